#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "economy.hpp"
#include "partition.hpp"

namespace qdispatch {

enum class Mechanism { first_best, strict_fifo, direct_fifo, random_dispatch, randomized_fifo };

const char* mechanism_name(Mechanism m);
std::optional<Mechanism> mechanism_from_name(const std::string& name);

struct EquilibriumOutcome {
  Mechanism mechanism = Mechanism::first_best;
  double throughput = 0.0;
  double net_revenue = 0.0;
  double queue_length = 0.0;
  double wait_min = 0.0;
  double wait_max = 0.0;
  double wait_avg_arrived = 0.0;
  double wait_avg_joined = 0.0;
  double payoff_mean = 0.0;
  double payoff_variance = 0.0;
  std::vector<double> completed_rates;  // per destination
};

struct Breakpoint {
  double q = 0.0;
  double value = 0.0;
};

class ContinuationPayoffCurve {
public:
  explicit ContinuationPayoffCurve(std::vector<Breakpoint> points);

  const std::vector<Breakpoint>& breakpoints() const { return points_; }
  double end() const { return points_.back().q; }
  // Linear interpolation; throws outside [0, end()].
  double operator()(double q) const;

private:
  std::vector<Breakpoint> points_;
};

std::vector<double> thresholds(const Economy& e);
double qbar(const Economy& e);

EquilibriumOutcome first_best(const Economy& e);
EquilibriumOutcome strict_fifo(const Economy& e);
EquilibriumOutcome direct_fifo(const Economy& e);
EquilibriumOutcome random_dispatch(const Economy& e);
EquilibriumOutcome randomized_fifo(const Economy& e, const BinLayout& layout);

ContinuationPayoffCurve direct_fifo_continuation(const Economy& e);
ContinuationPayoffCurve randomized_fifo_continuation(const Economy& e, const BinLayout& layout);

// Dispatches on mechanism; randomized FIFO uses the default partition when none is given.
EquilibriumOutcome analyze(const Economy& e, Mechanism m, const OrderedPartition* partition = nullptr);

// Waiting inside a bin where offers arrive at rate eta and a fraction zeta of the
// drivers passing through is dispatched: truncated exponential on [0, -log(1-zeta)/eta].
double bin_traversal_time(double eta, double zeta);
double bin_expected_wait(double eta, double zeta);
double bin_wait_variance(double eta, double zeta);

// Per-bin payoff mixture behind randomized FIFO's payoff variance.
struct BinComponent {
  double weight = 0.0;       // psi
  double mean = 0.0;         // E[U]
  double variance = 0.0;     // Var[U]
  double time_to_lower = 0.0;  // nu: tail of queue to the bin's lower bound (entry k >= 1)
};

struct BinMixture {
  // entry 0: drivers who leave on arrival (payoff 0); entries 1..m: bins
  std::vector<BinComponent> components;
  double mean = 0.0;
  double variance = 0.0;
  double wait_min = 0.0;
  double wait_max = 0.0;
};

BinMixture randomized_fifo_mixture(const Economy& e, const BinLayout& layout);

// Shared CSV schema for analyzer and simulator summaries.
std::string outcome_csv_header();
std::string outcome_csv_row(const EquilibriumOutcome& o, const Economy& e);

}  // namespace qdispatch
