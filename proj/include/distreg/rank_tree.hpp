#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace distreg {

// Weight-balanced binary search tree (delta = 3, ratio = 2, the parameter
// pair used by Haskell's containers) restricted to insertion. insert(v)
// returns the 1-based rank of v in the sorted multiset after insertion; equal
// values are placed to the right of existing ones, so the rank equals
// (number of stored elements <= v) + 1.
//
// The balance invariant weight(child) * 3 >= weight(sibling), with
// weight = size + 1, bounds the height by log(n + 1) / log(4/3), i.e.
// about 2.41 * log2(n + 1).
class RankTree {
 public:
  static constexpr double kHeightConstant = 2.4094208396532095;  // 1/log2(4/3)

  std::size_t insert(double v) {
    rank_acc_ = 0;
    root_ = insert_node(root_, v);
    return rank_acc_ + 1;
  }

  std::size_t size() const { return root_ < 0 ? 0 : nodes_[root_].size; }

  void clear() {
    nodes_.clear();
    root_ = -1;
  }

  void reserve(std::size_t n) { nodes_.reserve(n); }

  int height() const { return height_of(root_); }

 private:
  struct Node {
    double value;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::uint32_t size = 1;
  };

  static constexpr std::uint32_t kDelta = 3;
  static constexpr std::uint32_t kRatio = 2;

  std::uint32_t subtree_size(std::int32_t t) const {
    return t < 0 ? 0u : nodes_[t].size;
  }

  std::uint32_t weight(std::int32_t t) const { return subtree_size(t) + 1u; }

  void update(std::int32_t t) {
    nodes_[t].size =
        1u + subtree_size(nodes_[t].left) + subtree_size(nodes_[t].right);
  }

  std::int32_t insert_node(std::int32_t t, double v) {
    if (t < 0) {
      nodes_.push_back(Node{v, -1, -1, 1});
      return static_cast<std::int32_t>(nodes_.size() - 1);
    }
    if (v < nodes_[t].value) {
      const std::int32_t child = insert_node(nodes_[t].left, v);
      nodes_[t].left = child;
    } else {
      rank_acc_ += subtree_size(nodes_[t].left) + 1;
      const std::int32_t child = insert_node(nodes_[t].right, v);
      nodes_[t].right = child;
    }
    update(t);
    return rebalance(t);
  }

  std::int32_t rotate_left(std::int32_t t) {
    const std::int32_t q = nodes_[t].right;
    nodes_[t].right = nodes_[q].left;
    nodes_[q].left = t;
    update(t);
    update(q);
    return q;
  }

  std::int32_t rotate_right(std::int32_t t) {
    const std::int32_t q = nodes_[t].left;
    nodes_[t].left = nodes_[q].right;
    nodes_[q].right = t;
    update(t);
    update(q);
    return q;
  }

  std::int32_t rebalance(std::int32_t t) {
    const std::uint32_t wl = weight(nodes_[t].left);
    const std::uint32_t wr = weight(nodes_[t].right);
    if (kDelta * wl < wr) {
      const std::int32_t r = nodes_[t].right;
      if (weight(nodes_[r].left) < kRatio * weight(nodes_[r].right))
        return rotate_left(t);
      nodes_[t].right = rotate_right(r);
      return rotate_left(t);
    }
    if (kDelta * wr < wl) {
      const std::int32_t l = nodes_[t].left;
      if (weight(nodes_[l].right) < kRatio * weight(nodes_[l].left))
        return rotate_right(t);
      nodes_[t].left = rotate_left(l);
      return rotate_right(t);
    }
    return t;
  }

  int height_of(std::int32_t t) const {
    if (t < 0) return 0;
    const int hl = height_of(nodes_[t].left);
    const int hr = height_of(nodes_[t].right);
    return 1 + (hl > hr ? hl : hr);
  }

  std::vector<Node> nodes_;
  std::int32_t root_ = -1;
  std::size_t rank_acc_ = 0;
};

}  // namespace distreg
