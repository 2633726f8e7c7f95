#pragma once

#include <algorithm>
#include <cmath>

namespace qdispatch {

// Relative tolerance used for every equality test on aggregated rates.
inline constexpr double rel_tol = 1e-9;

inline bool nearly_equal(double a, double b, double tol = rel_tol) {
  double scale = std::max({std::fabs(a), std::fabs(b), 1.0});
  return std::fabs(a - b) <= tol * scale;
}

// a > b and not within tolerance of b
inline bool definitely_greater(double a, double b, double tol = rel_tol) {
  return a > b && !nearly_equal(a, b, tol);
}

}  // namespace qdispatch
