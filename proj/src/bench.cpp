#include "distreg/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "distreg/crps.hpp"
#include "distreg/rng.hpp"

namespace distreg {

namespace {

std::vector<double> random_sequence(std::size_t n, std::uint64_t seed) {
  SplitMix64 rng = SplitMix64::substream(seed, n);
  std::vector<double> y(n);
  for (double& v : y) v = rng.normal();
  return y;
}

void brute_prefix_entropies(std::span<const double> y, std::vector<double>& out) {
  out.clear();
  out.push_back(0.0);
  for (std::size_t s = 1; s <= y.size(); ++s)
    out.push_back(crps_entropy_direct(y.first(s)));
}

// Median-of-repeats timing; work is batched so one sample spans >= 20 ms.
template <typename F>
double time_median(int repeats, F&& work) {
  using clock = std::chrono::steady_clock;
  auto once = [&]() {
    const auto t0 = clock::now();
    work();
    return std::chrono::duration<double>(clock::now() - t0).count();
  };
  double single = once();
  std::size_t batch = 1;
  while (single * static_cast<double>(batch) < 0.02) batch *= 2;
  std::vector<double> samples;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = clock::now();
    for (std::size_t b = 0; b < batch; ++b) work();
    const double total = std::chrono::duration<double>(clock::now() - t0).count();
    samples.push_back(total / static_cast<double>(batch));
  }
  std::sort(samples.begin(), samples.end());
  return samples[samples.size() / 2];
}

double loglog_slope(const std::vector<std::pair<std::size_t, double>>& points) {
  const double n = static_cast<double>(points.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [size, seconds] : points) {
    const double x = std::log2(static_cast<double>(size));
    const double y = std::log2(seconds);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

BenchResult bench_prefix_entropies(std::span<const std::size_t> fast_sizes,
                                   std::span<const std::size_t> brute_sizes,
                                   int repeats, std::uint64_t seed) {
  if (fast_sizes.empty())
    throw std::invalid_argument("bench: need at least one fast size");
  if (repeats < 1) throw std::invalid_argument("bench: repeats must be >= 1");
  for (const std::size_t n : fast_sizes)
    if (n < 2) throw std::invalid_argument("bench: sizes must be >= 2");
  for (const std::size_t n : brute_sizes)
    if (n < 2) throw std::invalid_argument("bench: sizes must be >= 2");

  // Correctness gate before any timing.
  {
    const std::size_t gate_n = 1024;
    const std::vector<double> y = random_sequence(gate_n, seed);
    CrpsScanner scanner;
    std::vector<double> fast, brute;
    scanner.prefix_entropies(y, false, fast);
    brute_prefix_entropies(y, brute);
    for (std::size_t s = 1; s <= gate_n; ++s) {
      const double denom = std::max({std::abs(fast[s]), std::abs(brute[s]), 1e-12});
      if (std::abs(fast[s] - brute[s]) / denom > 1e-9)
        throw std::runtime_error(
            "bench: fast scan disagrees with the brute-force baseline at prefix " +
            std::to_string(s));
    }
  }

  BenchResult result;
  CrpsScanner scanner;
  std::vector<double> entries;
  std::vector<std::pair<std::size_t, double>> fast_points, brute_points;

  for (const std::size_t n : fast_sizes) {
    const std::vector<double> y = random_sequence(n, seed);
    const double sec = time_median(
        repeats, [&]() { scanner.prefix_entropies(y, false, entries); });
    result.records.push_back({n, "fast", sec, repeats});
    fast_points.emplace_back(n, sec);
  }
  for (const std::size_t n : brute_sizes) {
    const std::vector<double> y = random_sequence(n, seed);
    const double sec =
        time_median(repeats, [&]() { brute_prefix_entropies(y, entries); });
    result.records.push_back({n, "brute", sec, repeats});
    brute_points.emplace_back(n, sec);
  }

  result.fast_slope = fast_points.size() >= 2 ? loglog_slope(fast_points) : 0.0;
  result.brute_slope =
      brute_points.size() >= 2 ? loglog_slope(brute_points) : 0.0;
  return result;
}

std::string bench_to_csv(const BenchResult& result) {
  std::string out = "n,method,seconds,repeats\n";
  char buf[128];
  for (const BenchRecord& r : result.records) {
    std::snprintf(buf, sizeof(buf), "%zu,%s,%.9g,%d\n", r.n, r.method.c_str(),
                  r.seconds, r.repeats);
    out += buf;
  }
  return out;
}

}  // namespace distreg
