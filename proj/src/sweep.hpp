#pragma once

#include <optional>
#include <string>
#include <vector>

#include "analyzers.hpp"
#include "economy.hpp"
#include "partition.hpp"

namespace qdispatch {

enum class SweepParameter { lambda, patience };

struct SweepSpec {
  SweepParameter parameter = SweepParameter::lambda;
  std::vector<double> grid;
  std::vector<Mechanism> mechanisms;
  std::optional<OrderedPartition> partition;  // randomized FIFO; default partition per point otherwise
};

struct SweepRow {
  double x = 0.0;
  Economy economy;
  EquilibriumOutcome outcome;
};

void validate_sweep(const SweepSpec& spec);

// Rows ordered by grid point, then mechanism; first best is always included.
std::vector<SweepRow> run_sweep(const Economy& base, const SweepSpec& spec);

std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace qdispatch
