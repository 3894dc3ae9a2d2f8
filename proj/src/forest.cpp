#include "distreg/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "distreg/parallel.hpp"
#include "distreg/rng.hpp"

namespace distreg {

double WeightedCdf::quantile(double t) const {
  if (!(t > 0.0 && t <= 1.0))
    throw std::invalid_argument("WeightedCdf::quantile: level must be in (0,1]");
  const auto it =
      std::lower_bound(cum.begin(), cum.end(), t - 1e-12);
  if (it == cum.end()) return values.back();
  return values[static_cast<std::size_t>(it - cum.begin())];
}

double WeightedCdf::cdf(double v) const {
  const auto it = std::upper_bound(values.begin(), values.end(), v);
  if (it == values.begin()) return 0.0;
  return cum[static_cast<std::size_t>(it - values.begin()) - 1];
}

double WeightedCdf::cdf_below(double v) const {
  const auto it = std::lower_bound(values.begin(), values.end(), v);
  if (it == values.begin()) return 0.0;
  return cum[static_cast<std::size_t>(it - values.begin()) - 1];
}

DistForest::DistForest(Criterion criterion, TreeParams tree_params,
                       ForestParams params, std::vector<double> levels,
                       std::size_t n_features, std::vector<DistTree> trees)
    : criterion_(criterion),
      tree_params_(tree_params),
      params_(params),
      levels_(std::move(levels)),
      n_features_(n_features),
      trees_(std::move(trees)) {
  if (trees_.empty()) throw std::invalid_argument("DistForest: no trees");
}

DistForest DistForest::fit(const Dataset& data, Criterion criterion,
                           TreeParams tree_params, ForestParams params,
                           const QuantileLevels* levels) {
  data.validate();
  if (params.n_trees < 1)
    throw std::invalid_argument("DistForest::fit: need at least one tree");
  if (!(params.subsample_fraction > 0.0 && params.subsample_fraction <= 1.0))
    throw std::invalid_argument(
        "DistForest::fit: subsample_fraction must be in (0,1]");
  const std::size_t m = static_cast<std::size_t>(
      params.subsample_fraction * static_cast<double>(data.n_rows));
  if (m < 2)
    throw std::invalid_argument(
        "DistForest::fit: subsample would have fewer than 2 rows");

  std::vector<DistTree> trees(params.n_trees);
  parallel_for(params.n_trees, [&](std::size_t t) {
    SplitMix64 rng = SplitMix64::substream(params.seed, t);
    // Partial Fisher-Yates: the first m entries become the subsample.
    std::vector<std::size_t> idx(data.n_rows);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j = i + rng.next_below(data.n_rows - i);
      std::swap(idx[i], idx[j]);
    }
    idx.resize(m);
    // Canonical row order keeps tie-breaking identical to a direct fit.
    std::sort(idx.begin(), idx.end());
    TreeBuilder builder(criterion, tree_params,
                        levels ? &*levels : nullptr);
    trees[t] = builder.fit(data, std::move(idx));
  });

  std::vector<double> level_values;
  if (levels)
    level_values.assign(levels->values().begin(), levels->values().end());
  return DistForest(criterion, tree_params, params, std::move(level_values),
                    data.n_cols, std::move(trees));
}

WeightedCdf DistForest::predict_cdf(std::span<const double> x) const {
  const double tree_weight = 1.0 / static_cast<double>(trees_.size());
  std::vector<std::pair<double, double>> pool;  // (value, weight)
  for (const DistTree& tree : trees_) {
    const std::span<const double> leaf = tree.predict_leaf(x);
    const double w = tree_weight / static_cast<double>(leaf.size());
    for (const double v : leaf) pool.emplace_back(v, w);
  }
  std::sort(pool.begin(), pool.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  WeightedCdf out;
  out.values.reserve(pool.size());
  out.cum.reserve(pool.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    acc += pool[i].second;
    if (!out.values.empty() && pool[i].first == out.values.back()) {
      out.cum.back() = acc;
    } else {
      out.values.push_back(pool[i].first);
      out.cum.push_back(acc);
    }
  }
  // acc is 1 up to rounding; normalize so quantile(1.0) is always valid.
  for (double& c : out.cum) c /= acc;
  out.cum.back() = 1.0;
  return out;
}

std::vector<double> DistForest::predict_quantiles(
    std::span<const double> x, std::span<const double> levels) const {
  const WeightedCdf cdf = predict_cdf(x);
  std::vector<double> out;
  out.reserve(levels.size());
  for (const double t : levels) out.push_back(cdf.quantile(t));
  return out;
}

}  // namespace distreg
