#pragma once

#include <cstddef>
#include <functional>

#include "analyzers.hpp"
#include "economy.hpp"
#include "partition.hpp"

namespace qdispatch {

// Positions q and queue length Q are in driver mass (drivers / scale).
// A driver arriving at the tail is asked leave(Q, Q) before joining; drivers
// already in the queue are asked leave and rejoin right after declining an offer.
struct DriverStrategy {
  std::function<double(double q, double Q, std::size_t i)> accept;
  std::function<double(double q, double Q)> rejoin;
  std::function<double(double q, double Q)> leave;
};

DriverStrategy equilibrium_strategy(Mechanism m, const Economy& e, const BinLayout* layout = nullptr);

// Moves the acceptance cutoff by `shift` destinations: +1 also takes the next
// lower-earning destination everywhere, -1 drops the lowest accepted one.
DriverStrategy shift_cutoff(const DriverStrategy& base, int shift, std::size_t destinations);

}  // namespace qdispatch
