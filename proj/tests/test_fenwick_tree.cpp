#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "distreg/fenwick_tree.hpp"
#include "distreg/rng.hpp"

using distreg::FenwickTree;
using distreg::SplitMix64;

TEST_CASE("prefix sums over hand-placed values") {
  FenwickTree t(6);
  CHECK(t.size() == 6);
  CHECK(t.prefix_sum(0) == 0.0);
  CHECK(t.prefix_sum(6) == 0.0);

  // Insert the observations 2,1,3,-1,-3,-2 at their positions in the sorted
  // order of the full sequence (sorted: -3,-2,-1,1,2,3).
  t.add(5, 2.0);
  t.add(4, 1.0);
  t.add(6, 3.0);
  t.add(3, -1.0);
  t.add(1, -3.0);
  CHECK(t.sum(1, 2) == -3.0);  // only -3 placed below slot 3 so far
  t.add(2, -2.0);
  CHECK(t.sum(1, 2) == -5.0);  // -3 + -2 once the sixth value lands
  CHECK(t.prefix_sum(3) == -6.0);
  CHECK(t.prefix_sum(6) == 0.0);
  CHECK(t.sum(4, 6) == 6.0);
}

TEST_CASE("point updates accumulate") {
  FenwickTree t(4);
  t.add(2, 1.5);
  t.add(2, 2.5);
  CHECK(t.prefix_sum(1) == 0.0);
  CHECK(t.prefix_sum(2) == 4.0);
  CHECK(t.sum(2, 2) == 4.0);
}

TEST_CASE("resize and reset clear state") {
  FenwickTree t(3);
  t.add(3, 7.0);
  t.reset();
  CHECK(t.prefix_sum(3) == 0.0);
  t.resize(8);
  CHECK(t.size() == 8);
  CHECK(t.prefix_sum(8) == 0.0);
  t.add(8, 1.0);
  CHECK(t.prefix_sum(8) == 1.0);
}

TEST_CASE("out-of-range positions are rejected") {
  FenwickTree t(5);
  CHECK_THROWS_AS(t.add(0, 1.0), std::out_of_range);
  CHECK_THROWS_AS(t.add(6, 1.0), std::out_of_range);
  CHECK_THROWS_AS(t.prefix_sum(6), std::out_of_range);
  CHECK_THROWS_AS(t.sum(0, 3), std::out_of_range);
  CHECK_THROWS_AS(t.sum(3, 2), std::out_of_range);
  CHECK_THROWS_AS(t.sum(1, 6), std::out_of_range);
  FenwickTree empty;
  CHECK(empty.size() == 0);
  CHECK_THROWS_AS(empty.add(1, 1.0), std::out_of_range);
}

TEST_CASE("randomized ops agree with a plain array") {
  SplitMix64 rng(0xfe2);
  const std::size_t n = 97;
  FenwickTree t(n);
  std::vector<double> ref(n + 1, 0.0);

  for (int op = 0; op < 10000; ++op) {
    if (rng.next_below(2) == 0) {
      const std::size_t pos = 1 + rng.next_below(n);
      const double v = static_cast<double>(rng.next_below(41)) - 20.0;
      t.add(pos, v);
      ref[pos] += v;
    } else {
      const std::size_t k = rng.next_below(n + 1);
      double expect = 0.0;
      for (std::size_t i = 1; i <= k; ++i) expect += ref[i];
      REQUIRE(t.prefix_sum(k) == expect);
    }
  }

  for (std::size_t a = 1; a <= n; a += 7)
    for (std::size_t b = a; b <= n; b += 11) {
      double expect = 0.0;
      for (std::size_t i = a; i <= b; ++i) expect += ref[i];
      REQUIRE(t.sum(a, b) == expect);
    }
}
