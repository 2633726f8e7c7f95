#include "dispatch.hpp"

#include <cmath>

#include "error.hpp"

namespace qdispatch {

namespace {

// n*k rounded up, ignoring representation noise such as 150.00000000000003
std::size_t scaled_ceil(double mass, unsigned scale) {
  double x = mass * scale;
  return static_cast<std::size_t>(std::ceil(x - 1e-9 * std::max(1.0, x)));
}

std::size_t scaled_floor(double mass, unsigned scale) {
  double x = mass * scale;
  return static_cast<std::size_t>(std::floor(x + 1e-9 * std::max(1.0, x)));
}

}  // namespace

DispatchPlan make_dispatch_plan(Mechanism m, const Economy& e, const BinLayout* layout, unsigned scale) {
  if (scale < 1) fail(ErrorKind::invalid_argument, "scale must be at least 1");
  if (m == Mechanism::first_best) fail(ErrorKind::invalid_argument, "first best has no dispatch rule");
  DispatchPlan plan;
  plan.mechanism = m;
  plan.patience = e.patience();
  plan.scale = scale;
  if (m == Mechanism::direct_fifo)
    for (double n : thresholds(e)) plan.start.push_back(scaled_ceil(n, scale));
  if (m == Mechanism::randomized_fifo) {
    if (!layout) fail(ErrorKind::invalid_argument, "randomized FIFO dispatch needs a bin layout");
    for (const auto& b : layout->bins) {
      DispatchPlan::IndexRange r{scaled_ceil(b.lower, scale), scaled_floor(b.upper, scale)};
      if (r.last < r.first) r.last = r.first;  // bin narrower than one driver
      plan.bins.push_back(r);
    }
  }
  return plan;
}

std::optional<std::size_t> dispatch_target(const DispatchPlan& plan, std::size_t destination, long attempt,
                                           std::size_t queue_size, std::mt19937_64& rng) {
  if (attempt < 1 || attempt > plan.patience)
    fail(ErrorKind::runtime, "dispatch attempt " + std::to_string(attempt) + " exceeds patience");
  const auto a = static_cast<std::size_t>(attempt);
  switch (plan.mechanism) {
    case Mechanism::strict_fifo:
      if (a - 1 < queue_size) return a - 1;
      return std::nullopt;
    case Mechanism::direct_fifo: {
      std::size_t idx = plan.start.at(destination - 1) + (a - 1);
      if (idx < queue_size) return idx;
      return std::nullopt;
    }
    case Mechanism::random_dispatch: {
      if (queue_size == 0) return std::nullopt;
      return std::uniform_int_distribution<std::size_t>(0, queue_size - 1)(rng);
    }
    case Mechanism::randomized_fifo: {
      if (a > plan.bins.size()) return std::nullopt;
      const auto& r = plan.bins[a - 1];
      if (r.first >= queue_size) return std::nullopt;
      std::size_t last = std::min(r.last, queue_size - 1);
      if (last == r.first) return r.first;
      return std::uniform_int_distribution<std::size_t>(r.first, last)(rng);
    }
    case Mechanism::first_best: break;
  }
  fail(ErrorKind::runtime, "mechanism has no dispatch rule");
}

}  // namespace qdispatch
