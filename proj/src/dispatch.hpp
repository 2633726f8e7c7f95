#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <vector>

#include "analyzers.hpp"
#include "economy.hpp"
#include "partition.hpp"

namespace qdispatch {

// Mechanism dispatch rule with positions converted to driver counts at a given scale.
struct DispatchPlan {
  Mechanism mechanism = Mechanism::direct_fifo;
  long patience = 1;
  unsigned scale = 1;
  std::vector<std::size_t> start;  // direct FIFO: first index at or past n_i
  struct IndexRange {
    std::size_t first = 0;
    std::size_t last = 0;
  };
  std::vector<IndexRange> bins;  // randomized FIFO
};

DispatchPlan make_dispatch_plan(Mechanism m, const Economy& e, const BinLayout* layout, unsigned scale);

// Index (drivers ahead) of the driver offered attempt `attempt` (1-based) of a
// trip to `destination`, or none when the mechanism does not dispatch it.
std::optional<std::size_t> dispatch_target(const DispatchPlan& plan, std::size_t destination, long attempt,
                                           std::size_t queue_size, std::mt19937_64& rng);

}  // namespace qdispatch
