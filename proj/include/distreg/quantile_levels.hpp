#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace distreg {

// 1-based index of the empirical tau-quantile in a sorted sample of size n,
// i.e. ceil(tau * n). The small backoff keeps products like 0.3 * 10 from
// being rounded up past the exact integer.
inline std::size_t quantile_index(double tau, std::size_t n) {
  const double k = std::ceil(tau * static_cast<double>(n) - 1e-9);
  if (!(k >= 1.0)) return 1;
  if (k > static_cast<double>(n)) return n;
  return static_cast<std::size_t>(k);
}

// Strictly increasing quantile levels, all inside (0, 1).
class QuantileLevels {
 public:
  explicit QuantileLevels(std::vector<double> levels)
      : levels_(std::move(levels)) {
    if (levels_.empty())
      throw std::invalid_argument("QuantileLevels: need at least one level");
    double prev = 0.0;
    for (const double t : levels_) {
      if (!(t > prev && t < 1.0))
        throw std::invalid_argument(
            "QuantileLevels: levels must be strictly increasing inside (0,1)");
      prev = t;
    }
  }

  // {step, 2*step, ...} strictly below 1.
  static QuantileLevels uniform_grid(double step) {
    if (!(step > 0.0 && step < 1.0))
      throw std::invalid_argument("QuantileLevels: step must be in (0,1)");
    std::vector<double> levels;
    for (std::size_t k = 1; k * step < 1.0 - 1e-9; ++k)
      levels.push_back(static_cast<double>(k) * step);
    return QuantileLevels(std::move(levels));
  }

  std::size_t count() const { return levels_.size(); }
  double operator[](std::size_t m) const { return levels_[m]; }
  std::span<const double> values() const { return levels_; }

  // For base levels tau_1 < ... < tau_M < 1/2: the symmetric interval-score
  // set tau_1, ..., tau_M, 1/2, 1 - tau_M, ..., 1 - tau_1 (2M + 1 levels).
  std::vector<double> wis_expansion() const {
    if (levels_.back() >= 0.5)
      throw std::invalid_argument(
          "QuantileLevels::wis_expansion: levels must lie below 1/2");
    std::vector<double> out(levels_.begin(), levels_.end());
    out.push_back(0.5);
    for (std::size_t m = levels_.size(); m-- > 0;)
      out.push_back(1.0 - levels_[m]);
    return out;
  }

 private:
  std::vector<double> levels_;
};

}  // namespace distreg
