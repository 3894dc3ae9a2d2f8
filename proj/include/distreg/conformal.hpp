#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "distreg/dataset.hpp"
#include "distreg/forest.hpp"
#include "distreg/tree.hpp"

namespace distreg {

// Partition of the feature space induced by the top levels of a fitted tree:
// every node reachable in `depth` routing steps (or leaf above that depth)
// becomes one group. Group ids are assigned in preorder, so they are
// deterministic for a given tree.
class GroupPartition {
 public:
  struct PNode {
    std::int32_t feature = -1;
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::int32_t group = -1;  // >= 0 marks a group leaf
  };

  GroupPartition(const DistTree& source, int depth);
  GroupPartition(std::vector<PNode> nodes, int depth);

  std::size_t group_count() const { return n_groups_; }
  std::size_t group_of(std::span<const double> x) const;
  int depth() const { return depth_; }
  const std::vector<PNode>& nodes() const { return nodes_; }

 private:
  std::vector<PNode> nodes_;
  std::size_t n_groups_ = 0;
  int depth_ = 0;
};

enum class ConformalMethod { distributional, cqr };

const char* conformal_method_name(ConformalMethod m);
ConformalMethod conformal_method_from_name(const std::string& name);

// Split-conformal calibration of forest predictions.
//
// distributional: the score of (x, y) is min(F_x(y), 1 - F_x(y-)) under the
// pooled forest CDF; the interval at level alpha is the band between the
// floor(alpha * (m+1))-th smallest score t* and quantiles [t*, 1 - t*].
//
// cqr: the score is max(q_{alpha/2}(x) - y, y - q_{1-alpha/2}(x)); the
// ceil((1-alpha) * (m+1))-th smallest score widens the base quantile band
// symmetrically.
//
// With a GroupPartition, one parameter is calibrated per group; every group
// must contain at least ceil(1/alpha) calibration points.
class ConformalCalibrator {
 public:
  ConformalCalibrator(ConformalMethod method, double alpha,
                      std::vector<double> parameters,
                      std::optional<GroupPartition> partition);

  static ConformalCalibrator calibrate(const DistForest& forest,
                                       const Dataset& calib, double alpha,
                                       ConformalMethod method,
                                       const GroupPartition* partition = nullptr);

  std::pair<double, double> predict_interval(const DistForest& forest,
                                             std::span<const double> x) const;

  ConformalMethod method() const { return method_; }
  double alpha() const { return alpha_; }
  const std::vector<double>& parameters() const { return parameters_; }
  const std::optional<GroupPartition>& partition() const { return partition_; }

 private:
  ConformalMethod method_;
  double alpha_;
  std::vector<double> parameters_;  // one entry, or one per group
  std::optional<GroupPartition> partition_;
};

}  // namespace distreg
