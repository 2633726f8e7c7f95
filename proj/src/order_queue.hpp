#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace qdispatch {

// FIFO queue with O(log n) lookup by position and removal from anywhere.
// Slots are only stable until the next push_back (which may compact).
template <class Entry>
class OrderedQueue {
public:
  std::size_t size() const { return live_count_; }
  bool empty() const { return live_count_ == 0; }

  void push_back(const Entry& e) {
    if (next_ == cap_) compact();
    entries_[next_] = e;
    live_[next_] = 1;
    add(next_, +1);
    ++next_;
    ++live_count_;
  }

  // slot of the driver with `index` drivers ahead of it
  std::size_t slot_at(std::size_t index) const {
    std::size_t pos = 0;
    std::int64_t rem = static_cast<std::int64_t>(index) + 1;
    // cap_ is a power of two, so pos + step never passes it; written without
    // branches because random positions defeat the predictor
    for (std::size_t step = top_bit_; step; step >>= 1) {
      std::int64_t t = tree_[pos + step];
      bool go = t < rem;
      pos += go ? step : 0;
      rem -= go ? t : 0;
    }
    return pos;
  }

  Entry& at_slot(std::size_t slot) { return entries_[slot]; }
  const Entry& at_slot(std::size_t slot) const { return entries_[slot]; }

  void erase_slot(std::size_t slot) {
    live_[slot] = 0;
    add(slot, -1);
    --live_count_;
  }

private:
  void add(std::size_t slot, std::int32_t delta) {
    for (std::size_t i = slot + 1; i <= cap_; i += i & (~i + 1)) tree_[i] += delta;
  }

  void compact() {
    std::size_t cap = cap_ == 0 ? 1024 : cap_;
    while (live_count_ * 2 > cap) cap *= 2;
    std::vector<Entry> entries(cap);
    std::vector<std::uint8_t> live(cap, 0);
    std::size_t n = 0;
    for (std::size_t s = 0; s < next_; ++s)
      if (live_[s]) {
        entries[n] = entries_[s];
        live[n] = 1;
        ++n;
      }
    entries_.swap(entries);
    live_.swap(live);
    cap_ = cap;
    next_ = n;
    top_bit_ = 1;
    while (top_bit_ * 2 <= cap_) top_bit_ *= 2;
    tree_.assign(cap_ + 1, 0);
    for (std::size_t i = 1; i <= cap_; ++i) {
      tree_[i] += live_[i - 1];
      std::size_t parent = i + (i & (~i + 1));
      if (parent <= cap_) tree_[parent] += tree_[i];
    }
  }

  std::vector<Entry> entries_;
  std::vector<std::uint8_t> live_;
  std::vector<std::int32_t> tree_;
  std::size_t cap_ = 0;
  std::size_t next_ = 0;
  std::size_t live_count_ = 0;
  std::size_t top_bit_ = 0;
};

}  // namespace qdispatch
