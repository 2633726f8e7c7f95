#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "economy.hpp"

namespace qdispatch {

struct OrderedPartition {
  std::vector<std::vector<std::size_t>> groups;  // 1-based destination indices

  std::size_t size() const { return groups.size(); }
};

bool operator==(const OrderedPartition& a, const OrderedPartition& b);

struct Bin {
  double lower = 0.0;
  double upper = 0.0;
};

struct BinLayout {
  OrderedPartition partition;
  std::vector<Bin> bins;
};

// "{1},{2,3}"
OrderedPartition parse_partition(const std::string& literal);
std::string to_string(const OrderedPartition& p);

OrderedPartition default_partition(const Economy& e);

// Requires groups to be nonempty, ordered and to cover 1..r for some r <= L.
// Whether r equals J is left to validate_layout.
BinLayout bins(const Economy& e, const OrderedPartition& p);

struct LayoutCheck {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct LayoutReport {
  std::vector<LayoutCheck> checks;

  bool ok() const;
  std::string summary() const;  // failed checks only, one per line
};

inline constexpr const char* hazard_check_name = "last-bin lower bound within equilibrium queue length";

LayoutReport validate_layout(const Economy& e, const BinLayout& layout);

}  // namespace qdispatch
