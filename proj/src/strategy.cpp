#include "strategy.hpp"

#include <cmath>
#include <memory>

#include "error.hpp"
#include "numeric.hpp"

namespace qdispatch {

namespace {

bool at_or_past(double q, double threshold) { return q >= threshold || nearly_equal(q, threshold); }

// Join below the target length, stay away above it, mix at the boundary.
std::function<double(double, double)> join_rule(double target, double join_prob) {
  return [target, join_prob](double q, double Q) -> double {
    if (q < Q) return 0.0;
    if (Q < target) return 0.0;
    if (Q > target) return 1.0;
    return 1.0 - join_prob;
  };
}

// Marginal destination J: the queue length is what pins its acceptance rate.
double marginal_accept(double Q, double target, double theta) {
  if (Q > target) return 1.0;
  if (Q < target) return 0.0;
  return theta;
}

}  // namespace

DriverStrategy equilibrium_strategy(Mechanism m, const Economy& e, const BinLayout* layout) {
  if (m == Mechanism::randomized_fifo && !layout)
    fail(ErrorKind::invalid_argument, "randomized FIFO strategy needs a bin layout");
  if (m == Mechanism::first_best)
    fail(ErrorKind::invalid_argument, "first best has no queue and no driver strategy");

  DriverStrategy s;
  s.rejoin = [](double, double) { return 0.0; };
  const std::size_t j = max_completed_index(e);
  const bool over = e.over_supplied();
  const double mu_j = e.mu(j);
  const double mu_tilde = fulfilled_rate_at_J(e);

  switch (m) {
    case Mechanism::strict_fifo: {
      EquilibriumOutcome out = strict_fifo(e);
      auto n = std::make_shared<std::vector<double>>(thresholds(e));
      s.accept = [n](double q, double, std::size_t i) { return at_or_past(q, (*n)[i - 1]) ? 1.0 : 0.0; };
      s.leave = join_rule(out.queue_length, std::min(out.throughput / e.lambda(), 1.0));
      break;
    }
    case Mechanism::direct_fifo: {
      s.accept = [](double, double, std::size_t) { return 1.0; };
      s.leave = join_rule(qbar(e), std::min(e.total_demand() / e.lambda(), 1.0));
      break;
    }
    case Mechanism::random_dispatch: {
      double target = direct_fifo(e).queue_length;
      double theta = 1.0 - std::pow(1.0 - mu_tilde / mu_j, 1.0 / static_cast<double>(e.patience()));
      if (over)
        s.accept = [](double, double, std::size_t) { return 1.0; };
      else
        s.accept = [j, target, theta](double, double Q, std::size_t i) {
          if (i < j) return 1.0;
          if (i > j) return 0.0;
          return marginal_accept(Q, target, theta);
        };
      s.leave = join_rule(qbar(e), std::min(e.total_demand() / e.lambda(), 1.0));
      break;
    }
    case Mechanism::randomized_fifo: {
      LayoutReport report = validate_layout(e, *layout);
      if (!report.ok()) fail(ErrorKind::invalid_layout, "invalid bin layout:\n" + report.summary());
      auto group_of = std::make_shared<std::vector<std::size_t>>(e.size() + 1, 0);
      for (std::size_t k = 0; k < layout->partition.groups.size(); ++k)
        for (std::size_t i : layout->partition.groups[k]) (*group_of)[i] = k + 1;
      auto lower = std::make_shared<std::vector<double>>();
      for (const auto& b : layout->bins) lower->push_back(b.lower);
      const std::size_t m_bins = lower->size();
      double target = direct_fifo(e).queue_length;
      double theta = mu_tilde / mu_j;
      s.accept = [group_of, lower, m_bins, j, over, target, theta](double q, double Q, std::size_t i) {
        std::size_t g = i < group_of->size() ? (*group_of)[i] : 0;
        if (g == 0) return 0.0;
        std::size_t bin = 1;
        for (std::size_t k = 1; k < m_bins; ++k)
          if (at_or_past(q, (*lower)[k])) bin = k + 1;
        if (g > bin) return 0.0;
        if (i == j && bin == m_bins && !over) return marginal_accept(Q, target, theta);
        return 1.0;
      };
      s.leave = join_rule(qbar(e), std::min(e.total_demand() / e.lambda(), 1.0));
      break;
    }
    case Mechanism::first_best: break;
  }
  return s;
}

DriverStrategy shift_cutoff(const DriverStrategy& base, int shift, std::size_t destinations) {
  DriverStrategy s = base;
  auto accept = base.accept;
  s.accept = [accept, shift, destinations](double q, double Q, std::size_t i) -> double {
    long k = static_cast<long>(i) - shift;
    if (k < 1) return 1.0;
    if (k > static_cast<long>(destinations)) return 0.0;
    return accept(q, Q, static_cast<std::size_t>(k));
  };
  return s;
}

}  // namespace qdispatch
