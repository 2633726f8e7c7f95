#include <doctest.h>

#include <cmath>
#include <limits>

#include "bestresponse.hpp"
#include "error.hpp"
#include "oracles.hpp"

using namespace qdispatch;

namespace {

OfferRates random_rates(oracle::Generator& gen, std::size_t n) {
  OfferRates r(n);
  for (double& x : r) x = gen.uniform(0.0, 3.0);
  // occasional zero rates exercise the skip path
  if (n > 1 && gen.integer(0, 3) == 0) r[static_cast<std::size_t>(gen.integer(0, static_cast<long>(n) - 1))] = 0.0;
  if (r[0] == 0.0) r[0] = 0.5;
  return r;
}

// Best payoff over every subset of accepted destinations, not just prefixes.
double best_subset_value(const OfferRates& r, const Economy& e) {
  double best = -std::numeric_limits<double>::infinity();
  std::size_t n = e.size();
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    double earn = 0.0, total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) {
        earn += r[i] * e.w(i + 1);
        total += r[i];
      }
    if (total > 0) best = std::max(best, (earn - e.driver_cost()) / total);
  }
  return best;
}

}  // namespace

TEST_CASE("weighted-average recursion") {
  oracle::Generator gen(21);
  for (int t = 0; t < 200; ++t) {
    Economy e = gen.economy();
    OfferRates r = random_rates(gen, e.size());
    double prefix = r[0];
    for (std::size_t j = 2; j <= e.size(); ++j) {
      double before = prefix;
      prefix += r[j - 1];
      double lhs = cutoff_payoff(r, e, j) * prefix;
      double rhs = cutoff_payoff(r, e, j - 1) * before + e.w(j) * r[j - 1];
      CHECK(oracle::close(lhs, rhs, 1e-12, 1e-12 * e.w(1)));
    }
  }
}

TEST_CASE("best cutoff matches brute force argmax, ties to the smallest index") {
  oracle::Generator gen(22);
  for (int t = 0; t < 300; ++t) {
    Economy e = gen.economy();
    OfferRates r = random_rates(gen, e.size());
    double best = -std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    double total = 0.0;
    for (std::size_t j = 1; j <= e.size(); ++j) {
      total += r[j - 1];
      if (total <= 0) continue;
      double v = cutoff_payoff(r, e, j);
      if (v > best) best = v, arg = j;
    }
    Cutoff got = best_cutoff(r, e);
    if (best < 0 && !oracle::close(best, 0.0, 0, 1e-9 * e.w(1))) {
      CHECK_FALSE(got.index.has_value());
      CHECK(got.value == 0.0);
    } else {
      REQUIRE(got.index.has_value());
      CHECK(*got.index == arg);
      CHECK(got.value == doctest::Approx(std::max(best, 0.0)));
    }
  }
}

TEST_CASE("prefix cutoffs are optimal among all acceptance sets") {
  oracle::Generator gen(23);
  for (int t = 0; t < 200; ++t) {
    Economy e = gen.economy(7);
    OfferRates r = random_rates(gen, e.size());
    double best = best_subset_value(r, e);
    Cutoff got = best_cutoff(r, e);
    if (got.index) CHECK(oracle::close(cutoff_payoff(r, e, *got.index), best, 1e-12, 1e-12 * e.w(1)));
    else CHECK(best < 0);
  }
}

TEST_CASE("sandwich characterization and unimodality") {
  oracle::Generator gen(24);
  for (int t = 0; t < 300; ++t) {
    Economy e = gen.economy();
    OfferRates r(e.size());
    for (double& x : r) x = gen.uniform(0.05, 3.0);
    // cost small enough that some cutoff is profitable
    Cutoff got = best_cutoff(r, e);
    if (!got.index) continue;
    std::size_t j = *got.index;
    double rho = cutoff_payoff(r, e, j);
    double tol = 1e-9 * e.w(1);
    CHECK(rho <= e.w(j) + tol);
    if (j < e.size()) CHECK(rho >= e.w(j + 1) - tol);

    std::size_t turn = e.size();
    for (std::size_t k = 1; k < e.size(); ++k)
      if (cutoff_payoff(r, e, k) > e.w(k + 1)) {
        turn = k;
        break;
      }
    for (std::size_t k = 1; k < e.size(); ++k) {
      double a = cutoff_payoff(r, e, k), b = cutoff_payoff(r, e, k + 1);
      if (k < turn) CHECK(b >= a - tol);
      else CHECK(b <= a + tol);
    }
  }
}

TEST_CASE("simple cutoffs") {
  Economy e = validate_economy({{{1, 75}, {6, 25}, {3, 15}}, 5.0, 1.0 / 3, 1.0 / 3, 12});
  Cutoff only_first = best_cutoff({1, 0, 0}, e);
  REQUIRE(only_first.index);
  CHECK(*only_first.index == 1);
  CHECK(only_first.value == doctest::Approx(75 - 1.0 / 3));

  Economy costly = validate_economy({{{1, 75}, {6, 25}, {3, 15}}, 5.0, 1000.0, 0.0, 12});
  Cutoff leave = best_cutoff({0.1, 0.1, 0.1}, costly);
  CHECK_FALSE(leave.index);
  CHECK(leave.value == 0.0);

  // rho_1 and rho_2 are negative, rho_3 = (75 + 150 + 45 - 270) / 10 is exactly 0
  OfferRates tail{1, 6, 3};
  Economy tail_cost = validate_economy({{{1, 75}, {6, 25}, {3, 15}}, 5.0, 270.0, 0.0, 12});
  Cutoff at_zero = best_cutoff(tail, tail_cost);
  REQUIRE(at_zero.index);
  CHECK(at_zero.value == doctest::Approx(0.0).epsilon(1e-12));

  CHECK_THROWS_AS(best_cutoff({1, 1}, e), Error);
  CHECK_THROWS_AS(best_cutoff({0, 0, 0}, e), Error);
  CHECK_THROWS_AS(best_cutoff({1, -1, 0}, e), Error);
  CHECK_THROWS_AS(cutoff_payoff({1, 1, 1}, e, 4), Error);
}
