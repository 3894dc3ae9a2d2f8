#pragma once

#include <cstdint>

#include "distreg/dataset.hpp"

namespace distreg {

// x ~ Uniform(0, 10); y | x ~ Gamma(shape = sqrt(x), scale = clamp(x, 1, 6)).
// A heteroscedastic, skewed benchmark with one feature.
Dataset gen_gamma(std::size_t n, std::uint64_t seed);

// x ~ Uniform([0,1]^2); y = s + e * sqrt(1 + s^2) with s = x1 + x2 and
// e ~ N(0, 1). Gaussian noise whose scale grows with the signal.
Dataset gen_hetero(std::size_t n, std::uint64_t seed);

}  // namespace distreg
