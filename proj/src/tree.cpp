#include "distreg/tree.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace distreg {

const char* criterion_name(Criterion c) {
  switch (c) {
    case Criterion::crps: return "crps";
    case Criterion::pinball: return "pinball";
    case Criterion::squared_error: return "squared_error";
  }
  throw std::logic_error("criterion_name: unknown criterion");
}

Criterion criterion_from_name(const std::string& name) {
  if (name == "crps") return Criterion::crps;
  if (name == "pinball") return Criterion::pinball;
  if (name == "squared_error") return Criterion::squared_error;
  throw std::invalid_argument("unknown criterion '" + name +
                              "' (expected crps, pinball or squared_error)");
}

DistTree::DistTree(Criterion criterion, TreeParams params,
                   std::vector<double> levels, std::size_t n_features,
                   std::vector<TreeNode> nodes)
    : criterion_(criterion),
      params_(params),
      levels_(std::move(levels)),
      n_features_(n_features),
      nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw std::invalid_argument("DistTree: no nodes");
}

void DistTree::check_input(std::span<const double> x) const {
  if (x.size() != n_features_)
    throw std::invalid_argument("DistTree: expected " +
                                std::to_string(n_features_) + " features, got " +
                                std::to_string(x.size()));
}

std::span<const double> DistTree::predict_leaf(std::span<const double> x) const {
  check_input(x);
  std::int32_t cur = 0;
  while (!nodes_[cur].is_leaf()) {
    const TreeNode& node = nodes_[cur];
    cur = x[node.feature] <= node.threshold ? node.left : node.right;
  }
  return nodes_[cur].leaf_targets;
}

std::int32_t DistTree::node_at_depth(std::span<const double> x, int depth) const {
  check_input(x);
  std::int32_t cur = 0;
  for (int d = 0; d < depth && !nodes_[cur].is_leaf(); ++d) {
    const TreeNode& node = nodes_[cur];
    cur = x[node.feature] <= node.threshold ? node.left : node.right;
  }
  return cur;
}

TreeBuilder::TreeBuilder(Criterion criterion, TreeParams params,
                         const QuantileLevels* levels)
    : criterion_(criterion), params_(params) {
  if (criterion_ == Criterion::pinball) {
    if (levels == nullptr)
      throw std::invalid_argument("TreeBuilder: pinball criterion needs quantile levels");
    levels_ = *levels;
    pinball_scanner_ = std::make_unique<PinballBankScanner>(*levels_);
  }
  if (params_.min_samples_leaf < 1)
    throw std::invalid_argument("TreeBuilder: min_samples_leaf must be >= 1");
  loo_ = params_.use_loo && criterion_ != Criterion::squared_error;
}

void TreeBuilder::prefix_profile(std::span<const double> y,
                                 std::vector<double>& entries) {
  switch (criterion_) {
    case Criterion::crps:
      crps_scanner_.prefix_entropies(y, loo_, entries);
      return;
    case Criterion::pinball:
      pinball_scanner_->prefix_entropies(y, loo_, entries);
      return;
    case Criterion::squared_error: {
      entries.clear();
      entries.reserve(y.size() + 1);
      entries.push_back(0.0);
      double mu = 0.0;
      for (const double v : y) mu += v;
      mu /= static_cast<double>(y.size());
      double sum = 0.0, sumsq = 0.0;
      for (std::size_t s = 1; s <= y.size(); ++s) {
        const double v = y[s - 1] - mu;
        sum += v;
        sumsq += v * v;
        const double sd = static_cast<double>(s);
        entries.push_back(std::max(0.0, sumsq / sd - (sum / sd) * (sum / sd)));
      }
      return;
    }
  }
  throw std::logic_error("prefix_profile: unknown criterion");
}

double TreeBuilder::node_impurity_total(std::span<const double> y) {
  prefix_profile(y, up_);
  return static_cast<double>(y.size()) * up_.back();
}

std::optional<SplitDecision> TreeBuilder::best_split(
    const Dataset& data, std::span<const std::size_t> rows) {
  const std::size_t n = rows.size();
  const std::size_t min_leaf = params_.min_samples_leaf;
  if (n < 2 * min_leaf) return std::nullopt;

  std::optional<SplitDecision> best;
  for (std::size_t j = 0; j < data.n_cols; ++j) {
    sort_buf_.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      sort_buf_[i] = {data.x(rows[i], j), static_cast<std::uint32_t>(i)};
    std::sort(sort_buf_.begin(), sort_buf_.end());
    if (sort_buf_.front().first == sort_buf_.back().first) continue;

    y_fwd_.resize(n);
    y_rev_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      y_fwd_[i] = data.targets[rows[sort_buf_[i].second]];
      y_rev_[n - 1 - i] = y_fwd_[i];
    }
    prefix_profile(y_fwd_, up_);
    prefix_profile(y_rev_, down_);

    for (std::size_t w = min_leaf; w + min_leaf <= n; ++w) {
      if (sort_buf_[w - 1].first == sort_buf_[w].first) continue;
      const double score = static_cast<double>(w) * up_[w] +
                           static_cast<double>(n - w) * down_[n - w];
      if (!best || score < best->score) {
        const double lo = sort_buf_[w - 1].first;
        const double hi = sort_buf_[w].first;
        double threshold = lo + (hi - lo) / 2.0;
        if (!(threshold < hi)) threshold = lo;  // keep the right block right
        best = SplitDecision{j, threshold, w, score, 0.0};
      }
    }
  }

  if (best) {
    y_fwd_.resize(n);
    for (std::size_t i = 0; i < n; ++i) y_fwd_[i] = data.targets[rows[i]];
    best->gain = node_impurity_total(y_fwd_) - best->score;
  }
  return best;
}

DistTree TreeBuilder::fit(const Dataset& data) {
  std::vector<std::size_t> rows(data.n_rows);
  for (std::size_t i = 0; i < data.n_rows; ++i) rows[i] = i;
  return fit(data, std::move(rows));
}

DistTree TreeBuilder::fit(const Dataset& data, std::vector<std::size_t> rows) {
  data.validate();
  if (rows.empty()) throw std::invalid_argument("TreeBuilder::fit: no rows");
  for (const std::size_t r : rows)
    if (r >= data.n_rows)
      throw std::invalid_argument("TreeBuilder::fit: row index out of range");

  std::vector<TreeNode> nodes;
  struct WorkItem {
    std::int32_t node;
    std::size_t begin, end;
    int depth;
  };
  std::vector<WorkItem> stack;
  nodes.emplace_back();
  stack.push_back({0, 0, rows.size(), 0});

  auto make_leaf = [&](const WorkItem& item) {
    TreeNode& node = nodes[item.node];
    node.feature = -1;
    node.leaf_targets.resize(item.end - item.begin);
    for (std::size_t i = item.begin; i < item.end; ++i)
      node.leaf_targets[i - item.begin] = data.targets[rows[i]];
    std::sort(node.leaf_targets.begin(), node.leaf_targets.end());
  };

  while (!stack.empty()) {
    const WorkItem item = stack.back();
    stack.pop_back();
    const std::size_t n = item.end - item.begin;

    bool stop = (params_.max_depth >= 0 && item.depth >= params_.max_depth) ||
                n < params_.min_samples_split ||
                n < 2 * params_.min_samples_leaf;
    if (!stop) {
      bool constant = true;
      for (std::size_t i = item.begin + 1; i < item.end && constant; ++i)
        constant = data.targets[rows[i]] == data.targets[rows[item.begin]];
      stop = constant;
    }

    std::optional<SplitDecision> dec;
    if (!stop) {
      dec = best_split(data, {rows.data() + item.begin, n});
      const double parent_total = dec ? dec->score + dec->gain : 0.0;
      if (!dec || dec->gain <= 1e-12 * std::max(1.0, std::abs(parent_total)))
        stop = true;
    }
    if (stop) {
      make_leaf(item);
      continue;
    }

    const std::size_t feature = dec->feature_index;
    const double threshold = dec->threshold;
    const auto mid_it = std::stable_partition(
        rows.begin() + item.begin, rows.begin() + item.end,
        [&](std::size_t r) { return data.x(r, feature) <= threshold; });
    const std::size_t mid = static_cast<std::size_t>(mid_it - rows.begin());
    if (mid - item.begin != dec->left_count)
      throw std::logic_error("TreeBuilder::fit: partition does not match split");

    const std::int32_t left = static_cast<std::int32_t>(nodes.size());
    nodes.emplace_back();
    const std::int32_t right = static_cast<std::int32_t>(nodes.size());
    nodes.emplace_back();
    nodes[item.node].feature = static_cast<std::int32_t>(feature);
    nodes[item.node].threshold = threshold;
    nodes[item.node].left = left;
    nodes[item.node].right = right;
    // Right child first so the left child is processed next: node indices
    // follow a deterministic preorder.
    stack.push_back({right, mid, item.end, item.depth + 1});
    stack.push_back({left, item.begin, mid, item.depth + 1});
  }

  std::vector<double> levels;
  if (levels_) levels.assign(levels_->values().begin(), levels_->values().end());
  return DistTree(criterion_, params_, std::move(levels), data.n_cols,
                  std::move(nodes));
}

}  // namespace distreg
