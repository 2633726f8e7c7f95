#pragma once

#include <optional>
#include <string>

namespace qdispatch {

// Accepts decimal/scientific literals, "inf", and rationals like "1/3".
double parse_number(const std::string& token);

// Shortest representation that reads back to the same double.
std::string format_exact(double v);

// Report formatting: %.10g, "inf" for infinity, empty for missing.
// Magnitudes below 1e-10 print as 0.
std::string format_report(double v);
std::string format_report(const std::optional<double>& v);

std::string trim(const std::string& s);

}  // namespace qdispatch
