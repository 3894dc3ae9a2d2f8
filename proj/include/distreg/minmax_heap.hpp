#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <optional>
#include <vector>

namespace distreg {

// Min-max heap (Atkinson, Sack, Santoro & Strothotte) over doubles that also
// maintains the running sum of its contents. Levels alternate between min and
// max ordering starting with a min root, so both extremes are readable in
// O(1) while push / pop_min / pop_max are O(log n). Queries on an empty heap
// return std::nullopt instead of failing.
class SummingMinMaxHeap {
 public:
  std::size_t size() const { return a_.size(); }
  bool empty() const { return a_.empty(); }
  double total() const { return total_; }

  void clear() {
    a_.clear();
    total_ = 0.0;
  }

  void reserve(std::size_t n) { a_.reserve(n); }

  std::optional<double> min() const {
    if (a_.empty()) return std::nullopt;
    return a_[0];
  }

  std::optional<double> max() const {
    if (a_.empty()) return std::nullopt;
    return a_[max_index()];
  }

  // Second largest element. It can only live on the first two levels or among
  // the children / grandchildren of the max node.
  std::optional<double> second_max() const {
    if (a_.size() < 2) return std::nullopt;
    const std::size_t mi = max_index();
    std::optional<double> best;
    auto consider = [&](std::size_t i) {
      if (i < a_.size() && i != mi && (!best || a_[i] > *best)) best = a_[i];
    };
    consider(0);
    consider(1);
    consider(2);
    consider(2 * mi + 1);
    consider(2 * mi + 2);
    for (std::size_t g = 4 * mi + 3; g <= 4 * mi + 6; ++g) consider(g);
    return best;
  }

  void push(double v) {
    a_.push_back(v);
    total_ += v;
    bubble_up(a_.size() - 1);
  }

  std::optional<double> pop_min() {
    if (a_.empty()) return std::nullopt;
    return remove_at(0);
  }

  std::optional<double> pop_max() {
    if (a_.empty()) return std::nullopt;
    return remove_at(max_index());
  }

  // Raw storage view (heap layout order); used by invariant checks in tests.
  const std::vector<double>& raw() const { return a_; }

 private:
  // Depth of slot i is bit_width(i + 1) - 1; even depths are min levels.
  static bool on_min_level(std::size_t i) {
    return (std::bit_width(i + 1) & 1u) != 0;
  }

  std::size_t max_index() const {
    if (a_.size() == 1) return 0;
    if (a_.size() == 2) return 1;
    return a_[1] >= a_[2] ? 1 : 2;
  }

  double remove_at(std::size_t i) {
    const double val = a_[i];
    total_ -= val;
    const double last = a_.back();
    a_.pop_back();
    if (i < a_.size()) {
      a_[i] = last;
      trickle_down(i);
    }
    return val;
  }

  template <bool Max>
  static bool better(double x, double y) {
    return Max ? x > y : x < y;
  }

  void bubble_up(std::size_t i) {
    if (i == 0) return;
    const std::size_t p = (i - 1) / 2;
    if (on_min_level(i)) {
      if (a_[i] > a_[p]) {
        std::swap(a_[i], a_[p]);
        bubble_up_level<true>(p);
      } else {
        bubble_up_level<false>(i);
      }
    } else {
      if (a_[i] < a_[p]) {
        std::swap(a_[i], a_[p]);
        bubble_up_level<false>(p);
      } else {
        bubble_up_level<true>(i);
      }
    }
  }

  template <bool Max>
  void bubble_up_level(std::size_t i) {
    while (i > 2) {
      const std::size_t g = ((i - 1) / 2 - 1) / 2;
      if (!better<Max>(a_[i], a_[g])) break;
      std::swap(a_[i], a_[g]);
      i = g;
    }
  }

  void trickle_down(std::size_t i) {
    if (on_min_level(i)) {
      trickle_down_level<false>(i);
    } else {
      trickle_down_level<true>(i);
    }
  }

  template <bool Max>
  void trickle_down_level(std::size_t i) {
    for (;;) {
      const std::size_t first_child = 2 * i + 1;
      if (first_child >= a_.size()) return;
      // Best descendant among children and grandchildren.
      std::size_t m = first_child;
      const std::size_t last_child = std::min(a_.size() - 1, 2 * i + 2);
      for (std::size_t c = first_child; c <= last_child; ++c)
        if (better<Max>(a_[c], a_[m])) m = c;
      const std::size_t first_grand = 4 * i + 3;
      if (first_grand < a_.size()) {
        const std::size_t last_grand = std::min(a_.size() - 1, 4 * i + 6);
        for (std::size_t g = first_grand; g <= last_grand; ++g)
          if (better<Max>(a_[g], a_[m])) m = g;
      }
      if (m >= first_grand) {
        if (better<Max>(a_[m], a_[i])) {
          std::swap(a_[m], a_[i]);
          const std::size_t p = (m - 1) / 2;
          if (better<Max>(a_[p], a_[m])) std::swap(a_[p], a_[m]);
          i = m;
          continue;
        }
        return;
      }
      if (better<Max>(a_[m], a_[i])) std::swap(a_[m], a_[i]);
      return;
    }
  }

  std::vector<double> a_;
  double total_ = 0.0;
};

}  // namespace distreg
