#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "economy.hpp"

namespace qdispatch {

// Offer rate per destination, aligned with Economy indices (entry 0 is destination 1).
using OfferRates = std::vector<double>;

// Payoff of accepting exactly the destinations 1..j from a stationary offer stream.
double cutoff_payoff(const OfferRates& rates, const Economy& e, std::size_t j);

struct Cutoff {
  std::optional<std::size_t> index;  // absent: leaving is optimal
  double value = 0.0;
};

Cutoff best_cutoff(const OfferRates& rates, const Economy& e);

}  // namespace qdispatch
