#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "distreg/dataset.hpp"
#include "distreg/tree.hpp"

namespace distreg {

// Right-continuous step CDF given as strictly increasing values with their
// cumulative probabilities (cum.back() == 1).
struct WeightedCdf {
  std::vector<double> values;
  std::vector<double> cum;

  // Smallest value whose cumulative probability reaches t (generalized
  // inverse); t in (0, 1].
  double quantile(double t) const;

  double cdf(double v) const;        // P(Y <= v)
  double cdf_below(double v) const;  // P(Y < v)
};

struct ForestParams {
  std::size_t n_trees = 50;
  double subsample_fraction = 0.6;  // rows per tree, without replacement
  std::uint64_t seed = 0;
};

// Ensemble of DistTrees over row subsamples. A prediction is the uniform
// mixture of the leaf empirical distributions, i.e. every tree contributes
// total weight 1/T spread evenly over its leaf sample.
class DistForest {
 public:
  DistForest() = default;
  DistForest(Criterion criterion, TreeParams tree_params, ForestParams params,
             std::vector<double> levels, std::size_t n_features,
             std::vector<DistTree> trees);

  static DistForest fit(const Dataset& data, Criterion criterion,
                        TreeParams tree_params, ForestParams params,
                        const QuantileLevels* levels = nullptr);

  WeightedCdf predict_cdf(std::span<const double> x) const;

  // Quantiles of the pooled mixture at the given levels (each in (0, 1]).
  std::vector<double> predict_quantiles(std::span<const double> x,
                                        std::span<const double> levels) const;

  const std::vector<DistTree>& trees() const { return trees_; }
  Criterion criterion() const { return criterion_; }
  const TreeParams& tree_params() const { return tree_params_; }
  const ForestParams& params() const { return params_; }
  std::span<const double> levels() const { return levels_; }
  std::size_t n_features() const { return n_features_; }

 private:
  Criterion criterion_ = Criterion::crps;
  TreeParams tree_params_;
  ForestParams params_;
  std::vector<double> levels_;
  std::size_t n_features_ = 0;
  std::vector<DistTree> trees_;
};

}  // namespace distreg
