#include <doctest.h>

#include <algorithm>

#include "error.hpp"
#include "sweep.hpp"

using namespace qdispatch;

namespace {

Economy example1() { return validate_economy({{{1, 75}, {6, 25}, {3, 15}}, 5.0, 1.0 / 3, 1.0 / 3, 12}); }

}  // namespace

TEST_CASE("sweep rows follow grid then mechanism order") {
  SweepSpec spec;
  spec.parameter = SweepParameter::lambda;
  spec.grid = {2, 5, 8, 12};
  spec.mechanisms = {Mechanism::direct_fifo, Mechanism::strict_fifo};
  auto rows = run_sweep(example1(), spec);
  REQUIRE(rows.size() == 12);
  for (std::size_t g = 0; g < 4; ++g) {
    CHECK(rows[3 * g].outcome.mechanism == Mechanism::first_best);
    CHECK(rows[3 * g + 1].outcome.mechanism == Mechanism::direct_fifo);
    CHECK(rows[3 * g + 2].outcome.mechanism == Mechanism::strict_fifo);
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(rows[3 * g + k].x == spec.grid[g]);
      CHECK(rows[3 * g + k].economy.lambda() == spec.grid[g]);
    }
  }
  CHECK(rows[4].outcome.queue_length == doctest::Approx(150));
  CHECK(rows[5].outcome.throughput == doctest::Approx(1));

  std::string csv = sweep_csv(rows);
  CHECK(csv.rfind("mechanism,lambda,P,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 13);
  CHECK(csv.find("\ndirect,5,12,5,125,150,") != std::string::npos);
}

TEST_CASE("patience sweep and explicit partitions") {
  SweepSpec spec;
  spec.parameter = SweepParameter::patience;
  spec.grid = {1, 2, 3};
  spec.mechanisms = {Mechanism::randomized_fifo};
  Economy e = validate_economy({{{1, 75}, {6, 25}, {3, 15}}, 8.0, 1.0 / 3, 1.0 / 3, 2});
  auto rows = run_sweep(e, spec);
  REQUIRE(rows.size() == 6);
  CHECK(rows[1].economy.patience() == 1);
  CHECK(rows[5].outcome.payoff_variance == doctest::Approx(0).epsilon(1e-12));

  spec.grid = {2};
  spec.partition = parse_partition("{1},{2,3}");
  CHECK(run_sweep(e, spec)[1].outcome.payoff_variance == doctest::Approx(75));
  // the fixed partition needs two attempts
  spec.grid = {1, 2};
  CHECK_THROWS_AS(run_sweep(e, spec), Error);
}

TEST_CASE("sweep grid validation") {
  SweepSpec spec;
  spec.mechanisms = {Mechanism::direct_fifo};
  CHECK_THROWS_AS(validate_sweep(spec), Error);
  spec.grid = {3, 2};
  CHECK_THROWS_AS(validate_sweep(spec), Error);
  spec.grid = {0, 1};
  CHECK_THROWS_AS(validate_sweep(spec), Error);
  spec.parameter = SweepParameter::patience;
  spec.grid = {1, 2.5};
  CHECK_THROWS_AS(validate_sweep(spec), Error);
  spec.grid = {1, 2};
  CHECK_NOTHROW(validate_sweep(spec));
}
