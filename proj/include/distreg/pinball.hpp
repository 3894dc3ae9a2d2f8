#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "distreg/minmax_heap.hpp"
#include "distreg/quantile_levels.hpp"

namespace distreg {

// Pinball (quantile) loss l_tau(xi) = (tau - 1{xi < 0}) * xi.
double pinball_loss(double xi, double tau);

// ceil(tau * n)-th smallest element of y.
double empirical_quantile(std::span<const double> y, double tau);

// Empirical pinball entropy (1/n) * sum_i l_tau(y_i - qhat_tau).
double pinball_entropy(std::span<const double> y, double tau);

// Leave-one-out entropy (1/n) * sum_i l_tau(y_i - qhat_tau^{-i}), evaluated
// through its closed form: the plain entropy plus a debias term built from
// the order-statistic gap around the quantile index. Requires n >= 2.
double loo_pinball_entropy(std::span<const double> y, double tau);

// Weighted interval score of quantile predictions aligned with
// base.wis_expansion() (2M + 1 values, outermost-to-outermost).
double wis_loss(std::span<const double> quantiles, double y,
                const QuantileLevels& base);

// (2 / (2M + 1)) * sum of pinball entropies over the symmetric level set.
// Converges to the CRPS entropy as the base level grid refines.
double wis_entropy(std::span<const double> y, const QuantileLevels& base);

// Streaming computation of sum_m pinball-entropy(prefix, tau_m) for every
// prefix of a sequence in O(M log s) per step. A bank of M + 1 summing
// min-max heaps partitions the current prefix into consecutive sorted-rank
// bands delimited by ceil(tau_m * s); the band maxima are exactly the
// empirical quantiles and the band sums give the partial sums the closed
// entropy form needs.
class PinballBankScanner {
 public:
  explicit PinballBankScanner(QuantileLevels levels);

  void reset();

  // Appends the next prefix element and restores all band invariants.
  void step(double v);

  std::size_t prefix_size() const { return count_; }

  // Multi-quantile entropy of the current prefix. With use_loo, every level
  // contributes its leave-one-out debias term; the entropy of a single
  // element is defined as 0.
  double entropy(bool use_loo = false) const;

  // entries[s] = entropy of the first s values, entries[0] = 0. Values are
  // centered on the sequence mean internally (the entropy is translation
  // invariant) to keep the running sums well conditioned.
  void prefix_entropies(std::span<const double> y, bool use_loo,
                        std::vector<double>& entries);

  const QuantileLevels& levels() const { return levels_; }
  std::size_t heap_count() const { return heaps_.size(); }
  std::size_t heap_size(std::size_t m) const { return heaps_[m - 1].size(); }

  // Sorted contents of heap m (1-based); test support.
  std::vector<double> heap_contents(std::size_t m) const;

 private:
  QuantileLevels levels_;
  std::vector<SummingMinMaxHeap> heaps_;
  std::size_t count_ = 0;
  mutable std::vector<double> above_min_;  // scratch for entropy()
};

}  // namespace distreg
