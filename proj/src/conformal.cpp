#include "distreg/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "distreg/parallel.hpp"

namespace distreg {

namespace {

// ceil/floor with a guard against float noise in products like 0.9 * 20.
std::size_t ceil_index(double v) {
  return static_cast<std::size_t>(std::ceil(v - 1e-9));
}
std::size_t floor_index(double v) {
  return static_cast<std::size_t>(std::floor(v + 1e-9));
}

}  // namespace

GroupPartition::GroupPartition(const DistTree& source, int depth)
    : depth_(depth) {
  if (depth < 0) throw std::invalid_argument("GroupPartition: negative depth");
  // Copy the routing prefix of the source tree; nodes at the cut depth (or
  // original leaves) become group leaves, numbered in preorder.
  struct Item {
    std::int32_t src;
    std::int32_t dst;
    int depth;
  };
  const auto& src_nodes = source.nodes();
  std::vector<Item> stack;
  nodes_.emplace_back();
  stack.push_back({0, 0, 0});
  std::int32_t next_group = 0;
  while (!stack.empty()) {
    const Item item = stack.back();
    stack.pop_back();
    const TreeNode& src = src_nodes[item.src];
    if (item.depth >= depth || src.is_leaf()) {
      nodes_[item.dst].group = next_group++;
      continue;
    }
    const std::int32_t left = static_cast<std::int32_t>(nodes_.size());
    nodes_.emplace_back();
    const std::int32_t right = static_cast<std::int32_t>(nodes_.size());
    nodes_.emplace_back();
    nodes_[item.dst].feature = src.feature;
    nodes_[item.dst].threshold = src.threshold;
    nodes_[item.dst].left = left;
    nodes_[item.dst].right = right;
    stack.push_back({src.right, right, item.depth + 1});
    stack.push_back({src.left, left, item.depth + 1});
  }
  n_groups_ = static_cast<std::size_t>(next_group);
}

GroupPartition::GroupPartition(std::vector<PNode> nodes, int depth)
    : nodes_(std::move(nodes)), depth_(depth) {
  if (nodes_.empty()) throw std::invalid_argument("GroupPartition: no nodes");
  std::int32_t max_group = -1;
  for (const PNode& n : nodes_) max_group = std::max(max_group, n.group);
  if (max_group < 0)
    throw std::invalid_argument("GroupPartition: no group leaves");
  n_groups_ = static_cast<std::size_t>(max_group) + 1;
}

std::size_t GroupPartition::group_of(std::span<const double> x) const {
  std::int32_t cur = 0;
  while (nodes_[cur].group < 0) {
    const PNode& node = nodes_[cur];
    if (static_cast<std::size_t>(node.feature) >= x.size())
      throw std::invalid_argument("GroupPartition: feature index out of range");
    cur = x[node.feature] <= node.threshold ? node.left : node.right;
  }
  return static_cast<std::size_t>(nodes_[cur].group);
}

const char* conformal_method_name(ConformalMethod m) {
  switch (m) {
    case ConformalMethod::distributional: return "distributional";
    case ConformalMethod::cqr: return "cqr";
  }
  throw std::logic_error("conformal_method_name: unknown method");
}

ConformalMethod conformal_method_from_name(const std::string& name) {
  if (name == "distributional") return ConformalMethod::distributional;
  if (name == "cqr") return ConformalMethod::cqr;
  throw std::invalid_argument("unknown conformal method '" + name +
                              "' (expected distributional or cqr)");
}

ConformalCalibrator::ConformalCalibrator(ConformalMethod method, double alpha,
                                         std::vector<double> parameters,
                                         std::optional<GroupPartition> partition)
    : method_(method),
      alpha_(alpha),
      parameters_(std::move(parameters)),
      partition_(std::move(partition)) {
  if (!(alpha_ > 0.0 && alpha_ < 1.0))
    throw std::invalid_argument("ConformalCalibrator: alpha must be in (0,1)");
  const std::size_t expected = partition_ ? partition_->group_count() : 1;
  if (parameters_.size() != expected)
    throw std::invalid_argument("ConformalCalibrator: parameter count mismatch");
}

ConformalCalibrator ConformalCalibrator::calibrate(const DistForest& forest,
                                                   const Dataset& calib,
                                                   double alpha,
                                                   ConformalMethod method,
                                                   const GroupPartition* partition) {
  calib.validate();
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("calibrate: alpha must be in (0,1)");
  if (calib.n_cols != forest.n_features())
    throw std::invalid_argument("calibrate: feature count mismatch");

  const std::size_t n = calib.n_rows;
  std::vector<double> scores(n);
  std::vector<std::size_t> groups(n, 0);
  const double lo_level = alpha / 2.0;
  const double hi_level = 1.0 - alpha / 2.0;
  parallel_for(n, [&](std::size_t i) {
    std::vector<double> x(calib.n_cols);
    for (std::size_t j = 0; j < calib.n_cols; ++j) x[j] = calib.x(i, j);
    const double y = calib.targets[i];
    if (method == ConformalMethod::distributional) {
      const WeightedCdf cdf = forest.predict_cdf(x);
      scores[i] = std::min(cdf.cdf(y), 1.0 - cdf.cdf_below(y));
    } else {
      const double levels[2] = {lo_level, hi_level};
      const std::vector<double> q = forest.predict_quantiles(x, levels);
      scores[i] = std::max(q[0] - y, y - q[1]);
    }
    if (partition) groups[i] = partition->group_of(x);
  });

  const std::size_t n_groups = partition ? partition->group_count() : 1;
  std::vector<std::vector<double>> buckets(n_groups);
  for (std::size_t i = 0; i < n; ++i) buckets[groups[i]].push_back(scores[i]);

  const std::size_t required = ceil_index(1.0 / alpha);
  std::vector<double> parameters(n_groups);
  for (std::size_t g = 0; g < n_groups; ++g) {
    std::vector<double>& bucket = buckets[g];
    if (bucket.size() < required)
      throw std::runtime_error(
          "calibrate: group " + std::to_string(g) + " has " +
          std::to_string(bucket.size()) + " calibration points, needs at least " +
          std::to_string(required));
    std::sort(bucket.begin(), bucket.end());
    const double m = static_cast<double>(bucket.size());
    if (method == ConformalMethod::distributional) {
      const std::size_t k = floor_index(alpha * (m + 1.0));
      double level = k >= 1 ? bucket[k - 1] : 0.0;
      parameters[g] = std::clamp(level, 0.0, 0.5);
    } else {
      const std::size_t k = ceil_index((1.0 - alpha) * (m + 1.0));
      parameters[g] = bucket[std::min(k, bucket.size()) - 1];
    }
  }

  return ConformalCalibrator(method, alpha, std::move(parameters),
                             partition ? std::optional<GroupPartition>(*partition)
                                       : std::nullopt);
}

std::pair<double, double> ConformalCalibrator::predict_interval(
    const DistForest& forest, std::span<const double> x) const {
  const std::size_t g = partition_ ? partition_->group_of(x) : 0;
  const double param = parameters_[g];
  double lo, hi;
  if (method_ == ConformalMethod::distributional) {
    const WeightedCdf cdf = forest.predict_cdf(x);
    lo = param > 0.0 ? cdf.quantile(param) : cdf.values.front();
    hi = cdf.quantile(1.0 - param);
  } else {
    const double levels[2] = {alpha_ / 2.0, 1.0 - alpha_ / 2.0};
    const std::vector<double> q = forest.predict_quantiles(x, levels);
    lo = q[0] - param;
    hi = q[1] + param;
    if (hi < lo) lo = hi = (lo + hi) / 2.0;  // strongly negative margins
  }
  return {lo, hi};
}

}  // namespace distreg
