#include "distreg/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "distreg/rng.hpp"

namespace distreg {

Dataset gen_gamma(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("gen_gamma: n must be positive");
  SplitMix64 rng = SplitMix64::substream(seed, 0);
  Dataset d;
  d.n_rows = n;
  d.n_cols = 1;
  d.column_names = {"x"};
  d.columns.reserve(n);
  d.targets.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double u = rng.uniform();
    while (u <= 0.0) u = rng.uniform();
    const double x = 10.0 * u;
    const double shape = std::sqrt(x);
    const double scale = std::clamp(x, 1.0, 6.0);
    d.columns.push_back(x);
    d.targets.push_back(rng.gamma(shape, scale));
  }
  return d;
}

Dataset gen_hetero(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("gen_hetero: n must be positive");
  SplitMix64 rng = SplitMix64::substream(seed, 0);
  Dataset d;
  d.n_rows = n;
  d.n_cols = 2;
  d.column_names = {"x1", "x2"};
  d.columns.resize(2 * n);
  d.targets.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x1 = rng.uniform();
    const double x2 = rng.uniform();
    const double s = x1 + x2;
    d.columns[i] = x1;
    d.columns[n + i] = x2;
    d.targets.push_back(s + rng.normal() * std::sqrt(1.0 + s * s));
  }
  return d;
}

}  // namespace distreg
