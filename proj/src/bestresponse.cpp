#include "bestresponse.hpp"

#include <cmath>
#include <limits>

#include "error.hpp"

namespace qdispatch {

namespace {

void check_rates(const OfferRates& rates, const Economy& e) {
  if (rates.size() != e.size())
    fail(ErrorKind::invalid_argument, "offer rates must have one entry per destination");
  for (double r : rates)
    if (!std::isfinite(r) || r < 0) fail(ErrorKind::invalid_argument, "offer rates must be finite and nonnegative");
}

}  // namespace

double cutoff_payoff(const OfferRates& rates, const Economy& e, std::size_t j) {
  check_rates(rates, e);
  if (j < 1 || j > e.size()) fail(ErrorKind::invalid_argument, "cutoff index out of range");
  double earn = 0.0, total = 0.0;
  for (std::size_t i = 1; i <= j; ++i) {
    earn += e.w(i) * rates[i - 1];
    total += rates[i - 1];
  }
  if (total <= 0) fail(ErrorKind::invalid_argument, "zero cumulative offer rate through cutoff");
  return (earn - e.driver_cost()) / total;
}

Cutoff best_cutoff(const OfferRates& rates, const Economy& e) {
  check_rates(rates, e);
  double best = -std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  double earn = 0.0, total = 0.0;
  for (std::size_t j = 1; j <= e.size(); ++j) {
    earn += e.w(j) * rates[j - 1];
    total += rates[j - 1];
    if (total <= 0) continue;
    double rho = (earn - e.driver_cost()) / total;
    if (rho > best) {
      best = rho;
      arg = j;
    }
  }
  if (arg == 0) fail(ErrorKind::invalid_argument, "all offer rates are zero");

  // rho exactly 0 is often computed as a tiny negative residue
  double slack = 1e-9 * std::max(1.0, std::fabs(e.w(1)));
  Cutoff out;
  if (best < -slack) return out;
  out.index = arg;
  out.value = std::max(best, 0.0);
  return out;
}

}  // namespace qdispatch
