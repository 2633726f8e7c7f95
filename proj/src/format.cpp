#include "format.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "error.hpp"

namespace qdispatch {

namespace {

bool parse_plain(const std::string& s, double& out) {
  if (s.empty()) return false;
  if (s == "inf" || s == "+inf") {
    out = HUGE_VAL;
    return true;
  }
  if (s == "-inf") {
    out = -HUGE_VAL;
    return true;
  }
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;
  auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last;
}

}  // namespace

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& token) {
  std::string t = trim(token);
  double v = 0.0;
  auto slash = t.find('/');
  if (slash == std::string::npos) {
    if (!parse_plain(t, v)) fail(ErrorKind::parse, "not a number: '" + token + "'");
    return v;
  }
  double num = 0.0, den = 0.0;
  if (!parse_plain(trim(t.substr(0, slash)), num) || !parse_plain(trim(t.substr(slash + 1)), den) ||
      den == 0.0)
    fail(ErrorKind::parse, "not a rational: '" + token + "'");
  return num / den;
}

std::string format_exact(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string format_report(double v) {
  if (std::isnan(v)) return {};
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  // cancellation residue such as 75 - (1/3)*225 prints as 0
  if (std::fabs(v) < 1e-10) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string format_report(const std::optional<double>& v) {
  return v ? format_report(*v) : std::string();
}

}  // namespace qdispatch
