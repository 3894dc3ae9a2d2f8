#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "distreg/quantile_levels.hpp"
#include "distreg/rng.hpp"

namespace distreg::testutil {

// Relative closeness with an absolute floor of the same width.
inline bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

// n values, either continuous or drawn from a small integer set so that ties
// are frequent.
inline std::vector<double> random_sequence(SplitMix64& rng, std::size_t n,
                                           bool tie_heavy) {
  std::vector<double> y(n);
  for (double& v : y)
    v = tie_heavy ? static_cast<double>(rng.next_below(7)) - 3.0
                  : rng.uniform(-5.0, 5.0);
  return y;
}

// 1..max_m distinct levels from a fixed 5%-grid, sorted.
inline QuantileLevels random_levels(SplitMix64& rng, std::size_t max_m) {
  const std::size_t m = 1 + rng.next_below(max_m);
  std::vector<double> grid;
  for (int k = 1; k <= 19; ++k) grid.push_back(0.05 * k);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const std::size_t j = i + rng.next_below(grid.size() - i);
    std::swap(grid[i], grid[j]);
  }
  grid.resize(m);
  std::sort(grid.begin(), grid.end());
  return QuantileLevels(grid);
}

}  // namespace distreg::testutil
