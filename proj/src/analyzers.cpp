#include "analyzers.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "error.hpp"
#include "format.hpp"
#include "numeric.hpp"

namespace qdispatch {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// Completed rate per destination under first-best ordering.
std::vector<double> served_rates(const Economy& e) {
  std::vector<double> rates(e.size(), 0.0);
  std::size_t j = max_completed_index(e);
  for (std::size_t i = 1; i < j; ++i) rates[i - 1] = e.mu(i);
  rates[j - 1] = fulfilled_rate_at_J(e);
  return rates;
}

double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

double gross_earnings(const Economy& e, const std::vector<double>& rates) {
  double r = 0.0;
  for (std::size_t i = 1; i <= e.size(); ++i) r += rates[i - 1] * e.w(i);
  return r;
}

struct TripMix {
  double rate = 0.0;
  double mean = 0.0;
  double variance = 0.0;
};

// Earnings distribution of trips in `indices`, with destination J thinned to mu tilde.
TripMix trip_mix(const Economy& e, const std::vector<std::size_t>& indices, const std::vector<double>& rates) {
  TripMix t;
  double earn = 0.0;
  for (std::size_t i : indices) {
    t.rate += rates[i - 1];
    earn += rates[i - 1] * e.w(i);
  }
  t.mean = earn / t.rate;
  for (std::size_t i : indices) {
    double d = e.w(i) - t.mean;
    t.variance += rates[i - 1] * d * d;
  }
  t.variance /= t.rate;
  return t;
}

}  // namespace

const char* mechanism_name(Mechanism m) {
  switch (m) {
    case Mechanism::first_best: return "first_best";
    case Mechanism::strict_fifo: return "strict";
    case Mechanism::direct_fifo: return "direct";
    case Mechanism::random_dispatch: return "random";
    case Mechanism::randomized_fifo: return "randomized";
  }
  return "unknown";
}

std::optional<Mechanism> mechanism_from_name(const std::string& name) {
  for (auto m : {Mechanism::first_best, Mechanism::strict_fifo, Mechanism::direct_fifo,
                 Mechanism::random_dispatch, Mechanism::randomized_fifo})
    if (name == mechanism_name(m)) return m;
  return std::nullopt;
}

ContinuationPayoffCurve::ContinuationPayoffCurve(std::vector<Breakpoint> points) {
  if (points.empty()) fail(ErrorKind::invalid_argument, "continuation curve needs at least one breakpoint");
  for (const auto& p : points) {
    if (!points_.empty() && p.q < points_.back().q)
      fail(ErrorKind::invalid_argument, "breakpoints must be sorted by position");
    if (!points_.empty() && p.q == points_.back().q) continue;
    points_.push_back(p);
  }
}

double ContinuationPayoffCurve::operator()(double q) const {
  if (q < points_.front().q || q > points_.back().q)
    fail(ErrorKind::invalid_argument, "position outside the continuation curve's domain");
  for (std::size_t k = 1; k < points_.size(); ++k) {
    const auto& a = points_[k - 1];
    const auto& b = points_[k];
    if (q <= b.q) return a.value + (b.value - a.value) * (q - a.q) / (b.q - a.q);
  }
  return points_.back().value;
}

std::vector<double> thresholds(const Economy& e) {
  std::vector<double> n(e.size(), 0.0);
  for (std::size_t i = 2; i <= e.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 1; j < i; ++j) s += (e.w(j) - e.w(i)) * e.mu(j);
    n[i - 1] = s / e.driver_cost();
  }
  return n;
}

double qbar(const Economy& e) {
  double s = 0.0;
  for (const auto& d : e.destinations()) s += d.w * d.mu;
  return s / e.driver_cost();
}

EquilibriumOutcome first_best(const Economy& e) {
  EquilibriumOutcome o;
  o.mechanism = Mechanism::first_best;
  o.completed_rates = served_rates(e);
  o.throughput = sum(o.completed_rates);
  o.net_revenue = gross_earnings(e, o.completed_rates);
  o.payoff_mean = o.net_revenue / e.lambda();
  // drivers left without a trip earn 0
  double var = std::max(e.lambda() - o.throughput, 0.0) * o.payoff_mean * o.payoff_mean;
  for (std::size_t i = 1; i <= e.size(); ++i) {
    double d = e.w(i) - o.payoff_mean;
    var += o.completed_rates[i - 1] * d * d;
  }
  o.payoff_variance = var / e.lambda();
  return o;
}

EquilibriumOutcome direct_fifo(const Economy& e) {
  EquilibriumOutcome o;
  o.mechanism = Mechanism::direct_fifo;
  o.completed_rates = served_rates(e);
  o.throughput = sum(o.completed_rates);
  std::size_t j = max_completed_index(e);
  const double c = e.driver_cost();
  if (e.over_supplied()) {
    o.queue_length = qbar(e);
    o.payoff_mean = 0.0;
    o.wait_min = e.w(e.size()) / c;
    o.wait_max = e.w(1) / c;
    o.wait_avg_joined = o.queue_length / e.total_demand();
  } else {
    o.queue_length = thresholds(e)[j - 1];
    o.payoff_mean = e.w(j);
    o.wait_min = 0.0;
    o.wait_max = (e.w(1) - e.w(j)) / c;
    o.wait_avg_joined = o.queue_length / e.lambda();
  }
  o.wait_avg_arrived = o.queue_length / e.lambda();
  o.net_revenue = gross_earnings(e, o.completed_rates) - e.platform_cost() * o.queue_length;
  o.payoff_variance = 0.0;
  return o;
}

EquilibriumOutcome strict_fifo(const Economy& e) {
  auto n = thresholds(e);
  std::size_t j = max_completed_index(e);
  double p = static_cast<double>(e.patience());
  if (p >= n[j - 1] || nearly_equal(p, n[j - 1])) {
    EquilibriumOutcome o = direct_fifo(e);
    o.mechanism = Mechanism::strict_fifo;
    return o;
  }
  std::size_t jp = 1;
  for (std::size_t i = 1; i <= e.size(); ++i)
    if (n[i - 1] <= p || nearly_equal(n[i - 1], p)) jp = i;

  EquilibriumOutcome o;
  o.mechanism = Mechanism::strict_fifo;
  o.completed_rates.assign(e.size(), 0.0);
  double gross = 0.0;
  for (std::size_t i = 1; i <= jp; ++i) {
    o.completed_rates[i - 1] = e.mu(i);
    gross += e.mu(i) * e.w(i);
  }
  const double c = e.driver_cost();
  o.throughput = sum(o.completed_rates);
  o.queue_length = gross / c;
  o.net_revenue = gross - e.platform_cost() * o.queue_length;
  o.payoff_mean = 0.0;
  o.payoff_variance = 0.0;
  o.wait_min = e.w(jp) / c;
  o.wait_max = e.w(1) / c;
  o.wait_avg_joined = o.queue_length / o.throughput;
  o.wait_avg_arrived = o.queue_length / e.lambda();
  return o;
}

EquilibriumOutcome random_dispatch(const Economy& e) {
  EquilibriumOutcome o = direct_fifo(e);
  o.mechanism = Mechanism::random_dispatch;
  o.wait_min = 0.0;
  o.wait_max = inf;
  const double lambda = e.lambda();
  std::size_t j = max_completed_index(e);
  if (e.over_supplied()) {
    std::vector<std::size_t> all;
    for (std::size_t i = 1; i <= e.size(); ++i) all.push_back(i);
    TripMix t = trip_mix(e, all, o.completed_rates);
    o.payoff_variance = (t.mean * t.mean + t.variance) * e.total_demand() / lambda;
  } else {
    // Closed form as printed for the under-supplied case: the spread of the
    // destination-J trips around the mean is not part of it.
    double wbar = gross_earnings(e, o.completed_rates) / lambda;
    double v = (wbar - e.w(j)) * (wbar - e.w(j));
    for (std::size_t i = 1; i < j; ++i) v += (e.w(i) - wbar) * (e.w(i) - wbar) * e.mu(i) / lambda;
    o.payoff_variance = v;
  }
  return o;
}

double bin_traversal_time(double eta, double zeta) {
  if (!(eta > 0) || !(zeta > 0 && zeta < 1))
    fail(ErrorKind::invalid_argument, "bin parameters need eta > 0 and 0 < zeta < 1");
  return -std::log1p(-zeta) / eta;
}

double bin_expected_wait(double eta, double zeta) {
  bin_traversal_time(eta, zeta);
  double g;
  if (zeta < 1e-2) {
    // 1 + (1/z - 1) log(1 - z) = sum z^n / (n (n + 1))
    g = 0.0;
    double zn = zeta;
    for (int n = 1; n <= 14; ++n, zn *= zeta) g += zn / (n * (n + 1.0));
  } else {
    g = 1.0 + (1.0 / zeta - 1.0) * std::log1p(-zeta);
  }
  return g / eta;
}

double bin_wait_variance(double eta, double zeta) {
  bin_traversal_time(eta, zeta);
  double f;
  if (zeta < 1e-2) {
    // z^2 - (1 - z) log(1 - z)^2 loses all digits for small z; series in z^4
    static const double coef[] = {1.0 / 12,   1.0 / 12,     13.0 / 180,    11.0 / 180,
                                  29.0 / 560, 223.0 / 5040, 481.0 / 12600, 419.0 / 12600};
    f = 0.0;
    double zn = 1.0;
    for (double k : coef) {
      f += k * zn;
      zn *= zeta;
    }
    f *= zeta * zeta;  // (z^2 - ...) / z^2
  } else {
    double l = std::log1p(-zeta);
    f = (zeta * zeta + (zeta - 1.0) * l * l) / (zeta * zeta);
  }
  return f / (eta * eta);
}

BinMixture randomized_fifo_mixture(const Economy& e, const BinLayout& layout) {
  LayoutReport report = validate_layout(e, layout);
  if (!report.ok()) fail(ErrorKind::invalid_layout, "invalid bin layout:\n" + report.summary());

  const auto& groups = layout.partition.groups;
  const auto& bs = layout.bins;
  const std::size_t m = groups.size();
  const double c = e.driver_cost();
  const double lambda = e.lambda();
  EquilibriumOutcome base = direct_fifo(e);
  const double T = base.throughput;
  const double Q = base.queue_length;
  const double u = base.payoff_mean;
  const std::vector<double>& rates = base.completed_rates;

  BinMixture mix;
  mix.components.resize(m + 1);
  mix.components[0].weight = std::max(lambda - e.total_demand(), 0.0) / lambda;

  std::vector<double> group_rate(m, 0.0), cum_rate(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t i : groups[k]) group_rate[k] += e.mu(i);
    cum_rate[k] = group_rate[k] + (k ? cum_rate[k - 1] : 0.0);
  }

  if (m == 1) {
    // one bin covering the top J destinations: waiting is an untruncated exponential
    auto& b = mix.components[1];
    TripMix t = trip_mix(e, groups[0], rates);
    b.weight = t.rate / lambda;
    b.time_to_lower = (Q - bs[0].upper) / T;
    double width = bs[0].upper - bs[0].lower;
    double expo = width > 0 ? width / t.rate : 0.0;
    b.mean = t.mean - c * (b.time_to_lower + expo);
    b.variance = t.variance + c * c * expo * expo;
    mix.wait_min = b.time_to_lower;
    mix.wait_max = width > 0 ? inf : b.time_to_lower;
  } else {
    // last bin, thinned at destination J
    {
      auto& b = mix.components[m];
      const Bin& bin = bs[m - 1];
      TripMix t = trip_mix(e, groups[m - 1], rates);
      b.weight = std::min(lambda - cum_rate[m - 2], group_rate[m - 1]) / lambda;
      double lead = (Q - bin.upper) / T;
      if (groups[m - 1].size() == 1) {
        b.mean = t.mean - c * lead;
        b.variance = 0.0;
        b.time_to_lower = lead;
      } else {
        double eta = t.rate / (bin.upper - bin.lower);
        double zeta = t.rate / T;
        b.mean = t.mean - c * (lead + bin_expected_wait(eta, zeta));
        b.variance = t.variance + c * c * bin_wait_variance(eta, zeta);
        b.time_to_lower = lead + bin_traversal_time(eta, zeta);
      }
      mix.wait_min = lead;
    }
    // middle bins, back to front, then the first bin
    for (std::size_t k = m - 1; k-- > 0;) {
      auto& b = mix.components[k + 1];
      const Bin& bin = bs[k];
      const double ahead = mix.components[k + 2].time_to_lower + (bs[k + 1].lower - bin.upper) / cum_rate[k];
      TripMix t = trip_mix(e, groups[k], rates);
      b.weight = group_rate[k] / lambda;
      if (groups[k].size() == 1) {
        b.mean = t.mean - c * ahead;
        b.variance = 0.0;
        b.time_to_lower = ahead;
        if (k == 0) mix.wait_max = ahead;
      } else if (k == 0) {
        double eta = group_rate[0] / bin.upper;
        b.mean = t.mean - c * (ahead + 1.0 / eta);
        b.variance = t.variance + (c / eta) * (c / eta);
        b.time_to_lower = ahead;
        mix.wait_max = inf;
      } else {
        double eta = group_rate[k] / (bin.upper - bin.lower);
        double zeta = group_rate[k] / cum_rate[k];
        b.mean = t.mean - c * (ahead + bin_expected_wait(eta, zeta));
        b.variance = t.variance + c * c * bin_wait_variance(eta, zeta);
        b.time_to_lower = ahead + bin_traversal_time(eta, zeta);
      }
    }
  }

  for (const auto& b : mix.components) mix.mean += b.weight * b.mean;
  for (const auto& b : mix.components) mix.variance += b.weight * (b.variance + (b.mean - u) * (b.mean - u));
  return mix;
}

EquilibriumOutcome randomized_fifo(const Economy& e, const BinLayout& layout) {
  BinMixture mix = randomized_fifo_mixture(e, layout);
  EquilibriumOutcome o = direct_fifo(e);
  o.mechanism = Mechanism::randomized_fifo;
  std::size_t m = layout.partition.size();
  std::size_t j = max_completed_index(e);
  if (m == 1 && j == 1) return o;
  if (m == 1 && !e.over_supplied()) {
    EquilibriumOutcome r = random_dispatch(e);
    r.mechanism = Mechanism::randomized_fifo;
    return r;
  }
  o.wait_min = mix.wait_min;
  o.wait_max = mix.wait_max;
  o.payoff_variance = mix.variance;
  return o;
}

ContinuationPayoffCurve direct_fifo_continuation(const Economy& e) {
  auto n = thresholds(e);
  std::size_t j = max_completed_index(e);
  std::vector<Breakpoint> pts;
  if (e.over_supplied()) {
    for (std::size_t i = 1; i <= e.size(); ++i) pts.push_back({n[i - 1], e.w(i)});
    pts.push_back({qbar(e), 0.0});
  } else {
    for (std::size_t i = 1; i <= j; ++i) pts.push_back({n[i - 1], e.w(i)});
  }
  return ContinuationPayoffCurve(std::move(pts));
}

ContinuationPayoffCurve randomized_fifo_continuation(const Economy& e, const BinLayout& layout) {
  LayoutReport report = validate_layout(e, layout);
  if (!report.ok()) fail(ErrorKind::invalid_layout, "invalid bin layout:\n" + report.summary());
  std::vector<Breakpoint> pts;
  for (std::size_t k = 0; k < layout.bins.size(); ++k) {
    double floor_w = e.w(layout.partition.groups[k].back());
    pts.push_back({layout.bins[k].lower, floor_w});
    pts.push_back({layout.bins[k].upper, floor_w});
  }
  if (e.over_supplied()) pts.push_back({qbar(e), 0.0});
  return ContinuationPayoffCurve(std::move(pts));
}

EquilibriumOutcome analyze(const Economy& e, Mechanism m, const OrderedPartition* partition) {
  switch (m) {
    case Mechanism::first_best: return first_best(e);
    case Mechanism::strict_fifo: return strict_fifo(e);
    case Mechanism::direct_fifo: return direct_fifo(e);
    case Mechanism::random_dispatch: return random_dispatch(e);
    case Mechanism::randomized_fifo: {
      OrderedPartition p = partition ? *partition : default_partition(e);
      return randomized_fifo(e, bins(e, p));
    }
  }
  fail(ErrorKind::invalid_argument, "unknown mechanism");
}

std::string outcome_csv_header() {
  return "mechanism,lambda,P,T,R,Q,wait_min,wait_max,wait_avg_arrived,wait_avg_joined,payoff_mean,payoff_sd";
}

std::string outcome_csv_row(const EquilibriumOutcome& o, const Economy& e) {
  std::ostringstream out;
  out << mechanism_name(o.mechanism) << ',' << format_report(e.lambda()) << ',' << e.patience() << ','
      << format_report(o.throughput) << ',' << format_report(o.net_revenue) << ','
      << format_report(o.queue_length) << ',' << format_report(o.wait_min) << ','
      << format_report(o.wait_max) << ',' << format_report(o.wait_avg_arrived) << ','
      << format_report(o.wait_avg_joined) << ',' << format_report(o.payoff_mean) << ','
      << format_report(std::sqrt(std::max(o.payoff_variance, 0.0)));
  return out.str();
}

}  // namespace qdispatch
