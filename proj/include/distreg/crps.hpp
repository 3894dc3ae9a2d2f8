#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "distreg/fenwick_tree.hpp"
#include "distreg/rank_tree.hpp"

namespace distreg {

// Empirical CDF of a finite sample (values stored sorted).
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> values);
  std::span<const double> values() const { return v_; }
  std::size_t size() const { return v_.size(); }

 private:
  std::vector<double> v_;
};

// CRPS(F, y) = integral of (F(s) - 1{s >= y})^2, evaluated exactly piecewise
// over the knots of F joined with y.
double crps_of_ecdf(const EmpiricalCdf& f, double y);

// Empirical CRPS entropy of a sample: the mean CRPS of its own ECDF, via the
// closed form (1/n^3) * sum_i (i-1) * i * (y_(i) - y_(n-i+1)).
double crps_entropy_direct(std::span<const double> y);

// Leave-one-out CRPS entropy; identical to the plain entropy rescaled by
// n^2 / (n-1)^2. Requires n >= 2.
double loo_crps_entropy(std::span<const double> y);

// CRPS of the step CDF that jumps by 1/K at each of the K quantile values.
// Crossing inputs are clamped non-decreasing (running maximum) first.
double crps_from_quantile_grid(std::span<const double> quantiles, double y);

// Streaming computation of the CRPS entropy of every prefix of a sequence in
// O(log s) per step. A Fenwick tree over the positions of the full-sequence
// sort order provides the partial sum below each inserted element, and a rank
// tree provides its rank within the prefix; together they drive a second
// order recurrence for the unnormalized entropy.
class CrpsScanner {
 public:
  // entries[s] = CRPS entropy of the first s values, entries[0] = 0. With
  // use_loo, entries are rescaled to the leave-one-out form and the singleton
  // entry is 0. Values are centered on the sequence mean internally.
  void prefix_entropies(std::span<const double> y, bool use_loo,
                        std::vector<double>& entries);

 private:
  FenwickTree fenwick_;
  RankTree ranks_;
  std::vector<std::uint32_t> order_;
  std::vector<std::uint32_t> slot_;  // 1-based position in sort order
  std::vector<double> centered_;
};

}  // namespace distreg
