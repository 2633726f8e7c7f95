#include "partition.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "analyzers.hpp"
#include "error.hpp"
#include "format.hpp"
#include "numeric.hpp"

namespace qdispatch {

bool operator==(const OrderedPartition& a, const OrderedPartition& b) { return a.groups == b.groups; }

OrderedPartition parse_partition(const std::string& literal) {
  OrderedPartition p;
  std::size_t pos = 0;
  const std::string& s = literal;
  auto skip_ws = [&] {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  };
  auto bad = [&](const std::string& why) {
    fail(ErrorKind::parse, "bad partition literal '" + literal + "': " + why);
  };

  skip_ws();
  if (pos == s.size()) bad("empty");
  while (true) {
    skip_ws();
    if (pos >= s.size() || s[pos] != '{') bad("expected '{'");
    ++pos;
    std::vector<std::size_t> group;
    while (true) {
      skip_ws();
      std::size_t start = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      if (start == pos) bad("expected a destination index");
      if (pos - start > 9) bad("index too large");
      std::size_t idx = std::stoul(s.substr(start, pos - start));
      if (idx == 0) bad("indices are 1-based");
      group.push_back(idx);
      skip_ws();
      if (pos < s.size() && s[pos] == ',') {
        ++pos;
        continue;
      }
      if (pos < s.size() && s[pos] == '}') {
        ++pos;
        break;
      }
      bad("expected ',' or '}'");
    }
    p.groups.push_back(std::move(group));
    skip_ws();
    if (pos == s.size()) break;
    if (s[pos] != ',') bad("expected ',' between groups");
    ++pos;
  }
  return p;
}

std::string to_string(const OrderedPartition& p) {
  std::ostringstream out;
  for (std::size_t k = 0; k < p.groups.size(); ++k) {
    if (k) out << ',';
    out << '{';
    for (std::size_t i = 0; i < p.groups[k].size(); ++i) {
      if (i) out << ',';
      out << p.groups[k][i];
    }
    out << '}';
  }
  return out.str();
}

OrderedPartition default_partition(const Economy& e) {
  std::size_t j = max_completed_index(e);
  std::size_t m = std::min<std::size_t>(j, static_cast<std::size_t>(e.patience()));
  std::size_t base = j / m, extra = j % m;
  OrderedPartition p;
  std::size_t next = 1;
  for (std::size_t k = 0; k < m; ++k) {
    std::vector<std::size_t> group;
    std::size_t n = base + (k < extra ? 1 : 0);
    for (std::size_t t = 0; t < n; ++t) group.push_back(next++);
    p.groups.push_back(std::move(group));
  }
  return p;
}

BinLayout bins(const Economy& e, const OrderedPartition& p) {
  if (p.groups.empty()) fail(ErrorKind::invalid_layout, "partition has no groups");
  std::size_t expect = 1;
  for (const auto& g : p.groups) {
    if (g.empty()) fail(ErrorKind::invalid_layout, "partition has an empty group");
    for (std::size_t idx : g) {
      if (idx != expect)
        fail(ErrorKind::invalid_layout,
             "partition groups must list consecutive destinations 1, 2, ... in order");
      ++expect;
    }
  }
  if (expect - 1 > e.size())
    fail(ErrorKind::invalid_layout, "partition refers to destination " + std::to_string(expect - 1) +
                                        " but the economy has " + std::to_string(e.size()));

  BinLayout layout;
  layout.partition = p;
  const double c = e.driver_cost();
  std::vector<std::size_t> earlier;
  for (const auto& g : p.groups) {
    double floor_w = e.w(g.back());
    double lb = 0.0;
    for (std::size_t i : earlier) lb += (e.w(i) - floor_w) * e.mu(i) / c;
    double ub = lb;
    for (std::size_t i : g) ub += (e.w(i) - floor_w) * e.mu(i) / c;
    layout.bins.push_back({lb, ub});
    earlier.insert(earlier.end(), g.begin(), g.end());
  }
  return layout;
}

bool LayoutReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const LayoutCheck& c) { return c.passed; });
}

std::string LayoutReport::summary() const {
  std::string out;
  for (const auto& c : checks) {
    if (c.passed) continue;
    if (!out.empty()) out += '\n';
    out += c.name;
    if (!c.detail.empty()) out += ": " + c.detail;
  }
  return out;
}

LayoutReport validate_layout(const Economy& e, const BinLayout& layout) {
  LayoutReport report;
  auto add = [&](const std::string& name, bool passed, const std::string& detail = {}) {
    report.checks.push_back({name, passed, passed ? std::string() : detail});
  };
  const auto& groups = layout.partition.groups;
  const auto& bs = layout.bins;
  std::size_t j = max_completed_index(e);
  std::size_t m = groups.size();

  bool nonempty = m > 0 && std::none_of(groups.begin(), groups.end(), [](const auto& g) { return g.empty(); });
  add("groups nonempty", nonempty, "partition has no groups or an empty group");

  std::multiset<std::size_t> seen;
  for (const auto& g : groups) seen.insert(g.begin(), g.end());
  bool exclusive = std::set<std::size_t>(seen.begin(), seen.end()).size() == seen.size();
  add("groups mutually exclusive", exclusive, "a destination appears in more than one group");

  std::set<std::size_t> top;
  for (std::size_t i = 1; i <= j; ++i) top.insert(i);
  bool exhaustive = std::set<std::size_t>(seen.begin(), seen.end()) == top;
  add("groups cover exactly the top J destinations", exhaustive,
      "partition must cover destinations 1.." + std::to_string(j));

  bool ordered = true;
  std::size_t prev_max = 0;
  for (const auto& g : groups) {
    if (g.empty()) continue;
    auto [lo, hi] = std::minmax_element(g.begin(), g.end());
    if (*lo <= prev_max) ordered = false;
    prev_max = *hi;
  }
  add("groups ordered by earnings", ordered, "every index in an earlier group must precede later groups");

  std::size_t cap = std::min<std::size_t>(j, static_cast<std::size_t>(e.patience()));
  add("group count at most min(J, P)", m >= 1 && m <= cap,
      std::to_string(m) + " groups exceeds min(J, P) = " + std::to_string(cap));

  bool count_ok = bs.size() == m;
  add("one bin per group", count_ok, std::to_string(bs.size()) + " bins for " + std::to_string(m) + " groups");
  if (!count_ok || bs.empty()) return report;

  add("first bin starts at the head", bs.front().lower == 0.0,
      "first bin lower bound is " + format_report(bs.front().lower));

  bool bounded = true, disjoint = true, shape = true;
  for (std::size_t k = 0; k < bs.size(); ++k) {
    if (!(bs[k].lower <= bs[k].upper)) bounded = false;
    if (k > 0 && !(bs[k - 1].upper < bs[k].lower)) disjoint = false;
    if (k < groups.size()) {
      bool point = nearly_equal(bs[k].lower, bs[k].upper);
      if (point != (groups[k].size() == 1)) shape = false;
    }
  }
  add("bin bounds ordered", bounded, "a bin has lower bound above its upper bound");
  add("bins disjoint", disjoint, "bins overlap or touch");
  add("point bins exactly for singleton groups", shape, "bin width does not match group size");

  if (!e.over_supplied()) {
    double nj = thresholds(e)[j - 1];
    double lb_last = bs.back().lower;
    bool within = lb_last <= nj || nearly_equal(lb_last, nj);
    add(hazard_check_name, within,
        "last-bin lower bound exceeds equilibrium queue length (" + format_report(lb_last) + " > " +
            format_report(nj) + ")");
  }
  return report;
}

}  // namespace qdispatch
