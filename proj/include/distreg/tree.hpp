#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "distreg/crps.hpp"
#include "distreg/dataset.hpp"
#include "distreg/pinball.hpp"
#include "distreg/quantile_levels.hpp"

namespace distreg {

enum class Criterion { crps, pinball, squared_error };

const char* criterion_name(Criterion c);
Criterion criterion_from_name(const std::string& name);

struct TreeParams {
  int max_depth = -1;  // -1: unlimited
  std::size_t min_samples_leaf = 5;
  std::size_t min_samples_split = 10;
  bool use_loo = true;  // leave-one-out debiasing; crps and pinball only
};

struct SplitDecision {
  std::size_t feature_index = 0;
  double threshold = 0.0;      // rows with x <= threshold go left
  std::size_t left_count = 0;  // rank of the split in feature-sorted order
  double score = 0.0;          // w * H(left) + (n - w) * H(right)
  double gain = 0.0;           // n * H(node) - score
};

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::vector<double> leaf_targets;  // sorted; leaves only

  bool is_leaf() const { return feature < 0; }
};

// A fitted distributional regression tree. Leaves store the sorted training
// targets that reached them, i.e. each leaf is an empirical distribution.
class DistTree {
 public:
  DistTree() = default;
  DistTree(Criterion criterion, TreeParams params, std::vector<double> levels,
           std::size_t n_features, std::vector<TreeNode> nodes);

  // Sorted targets of the leaf x falls into.
  std::span<const double> predict_leaf(std::span<const double> x) const;

  // Index of the node reached after at most `depth` routing steps.
  std::int32_t node_at_depth(std::span<const double> x, int depth) const;

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  Criterion criterion() const { return criterion_; }
  const TreeParams& params() const { return params_; }
  std::span<const double> levels() const { return levels_; }
  std::size_t n_features() const { return n_features_; }

 private:
  void check_input(std::span<const double> x) const;

  Criterion criterion_ = Criterion::crps;
  TreeParams params_;
  std::vector<double> levels_;  // pinball criterion only
  std::size_t n_features_ = 0;
  std::vector<TreeNode> nodes_;
};

// Grows DistTrees by exhaustive split search: for every feature the node is
// sorted once and the entropies of all prefixes are computed in a forward and
// a mirrored streaming pass, so one node costs O(d * n log n). The builder
// owns its scratch structures and can be reused across fits.
class TreeBuilder {
 public:
  TreeBuilder(Criterion criterion, TreeParams params,
              const QuantileLevels* levels = nullptr);

  // Best split of the given rows, or nullopt when no feature admits one
  // (constant features, or min_samples_leaf eliminates every position).
  // Ties are broken toward the smallest feature index, then the smallest
  // split position.
  std::optional<SplitDecision> best_split(const Dataset& data,
                                          std::span<const std::size_t> rows);

  DistTree fit(const Dataset& data);
  DistTree fit(const Dataset& data, std::vector<std::size_t> rows);

 private:
  // entries[s] = entropy of the first s values of y under the criterion.
  void prefix_profile(std::span<const double> y, std::vector<double>& entries);
  double node_impurity_total(std::span<const double> y);  // n * H(y)

  Criterion criterion_;
  TreeParams params_;
  std::optional<QuantileLevels> levels_;
  bool loo_ = false;

  CrpsScanner crps_scanner_;
  std::unique_ptr<PinballBankScanner> pinball_scanner_;

  std::vector<std::pair<double, std::uint32_t>> sort_buf_;
  std::vector<double> y_fwd_, y_rev_;
  std::vector<double> up_, down_;
};

}  // namespace distreg
