#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace distreg {

struct BenchRecord {
  std::size_t n = 0;
  std::string method;  // "fast" or "brute"
  double seconds = 0.0;
  int repeats = 0;
};

struct BenchResult {
  std::vector<BenchRecord> records;
  double fast_slope = 0.0;   // log-log least squares slope over fast sizes
  double brute_slope = 0.0;  // same over brute sizes (0 when not measured)
};

// Times the streaming CRPS prefix-entropy scan against the brute-force
// baseline that materializes and sorts every prefix. Before any timing, both
// are checked to agree within 1e-9 on a shared size; a mismatch throws.
// Every measurement is the median of `repeats` runs; sub-millisecond runs are
// batched until they are long enough to time reliably.
BenchResult bench_prefix_entropies(std::span<const std::size_t> fast_sizes,
                                   std::span<const std::size_t> brute_sizes,
                                   int repeats, std::uint64_t seed);

// CSV rows "n,method,seconds,repeats" with header.
std::string bench_to_csv(const BenchResult& result);

}  // namespace distreg
