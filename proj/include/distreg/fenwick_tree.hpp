#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace distreg {

// Fenwick (binary indexed) tree over a fixed number of real-valued slots.
// Positions are 1-based. add() is a point update and prefix_sum(k) returns
// the sum of slots [1, k]; both cost O(log n). Out-of-range positions are
// rejected, they never wrap.
class FenwickTree {
 public:
  FenwickTree() = default;
  explicit FenwickTree(std::size_t n) : tree_(n + 1, 0.0) {}

  std::size_t size() const { return tree_.empty() ? 0 : tree_.size() - 1; }

  void resize(std::size_t n) { tree_.assign(n + 1, 0.0); }

  void reset() { std::fill(tree_.begin(), tree_.end(), 0.0); }

  void add(std::size_t pos, double v) {
    if (pos < 1 || pos > size())
      throw std::out_of_range("FenwickTree::add: position out of range");
    for (; pos <= size(); pos += pos & (~pos + 1)) tree_[pos] += v;
  }

  double prefix_sum(std::size_t k) const {
    if (k > size())
      throw std::out_of_range("FenwickTree::prefix_sum: index out of range");
    double s = 0.0;
    for (; k > 0; k -= k & (~k + 1)) s += tree_[k];
    return s;
  }

  // Sum of slots [a, b], 1 <= a <= b <= size().
  double sum(std::size_t a, std::size_t b) const {
    if (a < 1 || a > b || b > size())
      throw std::out_of_range("FenwickTree::sum: bad range");
    return prefix_sum(b) - prefix_sum(a - 1);
  }

 private:
  std::vector<double> tree_;  // slot 0 unused
};

}  // namespace distreg
