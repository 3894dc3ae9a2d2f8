#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "common/oracles.hpp"
#include "common/testutil.hpp"
#include "distreg/pinball.hpp"
#include "distreg/rng.hpp"

using namespace distreg;
using testutil::close;

TEST_CASE("pinball loss values and symmetry") {
  CHECK(pinball_loss(2.0, 0.3) == doctest::Approx(0.6));
  CHECK(pinball_loss(-2.0, 0.3) == doctest::Approx(1.4));
  CHECK(pinball_loss(0.0, 0.42) == 0.0);
  SplitMix64 rng(7);
  for (int i = 0; i < 100; ++i) {
    const double xi = rng.uniform(-4.0, 4.0);
    const double tau = rng.uniform(0.01, 0.99);
    CHECK(pinball_loss(xi, tau) ==
          doctest::Approx(pinball_loss(-xi, 1.0 - tau)));
    CHECK(pinball_loss(xi, tau) >= 0.0);
  }
}

TEST_CASE("quantile index convention") {
  CHECK(quantile_index(0.3, 10) == 3);  // 0.3 * 10 must not round up to 4
  CHECK(quantile_index(0.5, 4) == 2);
  CHECK(quantile_index(0.5, 5) == 3);
  CHECK(quantile_index(0.001, 5) == 1);
  CHECK(quantile_index(0.999, 5) == 5);
  const std::vector<double> y{4.0, 2.0, 1.0, 3.0};
  CHECK(empirical_quantile(y, 0.5) == 2.0);
  CHECK(empirical_quantile(y, 0.75) == 3.0);
  CHECK(empirical_quantile(y, 0.76) == 4.0);
  CHECK(empirical_quantile(std::vector<double>{5.0}, 0.2) == 5.0);
  CHECK_THROWS_AS(empirical_quantile(std::vector<double>{}, 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(empirical_quantile(y, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(empirical_quantile(y, 1.0), std::invalid_argument);
}

TEST_CASE("pinball entropy on worked samples") {
  CHECK(pinball_entropy(std::vector<double>{0.0, 1.0, 2.0, 3.0}, 0.5) ==
        doctest::Approx(0.5));
  const std::vector<double> y{0.0, 1.0, 2.0, 3.0, -1.0, -2.0};
  CHECK(pinball_entropy(y, 0.3) == doctest::Approx(37.0 / 60.0));
  CHECK(pinball_entropy(y, 0.7) == doctest::Approx(37.0 / 60.0));
}

TEST_CASE("pinball entropy is the minimal mean loss") {
  SplitMix64 rng(0xabc);
  for (int rep = 0; rep < 300; ++rep) {
    const std::size_t n = 1 + rng.next_below(40);
    const auto y = testutil::random_sequence(rng, n, rep % 2 == 0);
    const double tau = rng.uniform(0.02, 0.98);
    const double fast = pinball_entropy(y, tau);
    const double brute = oracles::pinball_entropy_brute(tau, y);
    REQUIRE(close(fast, brute, 1e-12));
  }
}

TEST_CASE("pinball entropy scales and translates") {
  SplitMix64 rng(0x77);
  const auto y = testutil::random_sequence(rng, 25, false);
  std::vector<double> shifted = y, scaled = y;
  for (double& v : shifted) v += 123.0;
  for (double& v : scaled) v *= 4.5;
  CHECK(close(pinball_entropy(shifted, 0.3), pinball_entropy(y, 0.3), 1e-12));
  CHECK(close(pinball_entropy(scaled, 0.3), 4.5 * pinball_entropy(y, 0.3),
              1e-12));
}

TEST_CASE("leave-one-out pinball entropy closed form") {
  const std::vector<double> y{1.0, 2.0, 3.0, 4.0, 5.0};
  CHECK(pinball_entropy(y, 0.5) == doctest::Approx(0.6));
  CHECK(loo_pinball_entropy(y, 0.5) == doctest::Approx(0.9));
  CHECK_THROWS_AS(loo_pinball_entropy(std::vector<double>{1.0}, 0.5),
                  std::invalid_argument);

  SplitMix64 rng(0x10c);
  for (int rep = 0; rep < 400; ++rep) {
    const std::size_t n = 2 + rng.next_below(40);
    const auto s = testutil::random_sequence(rng, n, rep % 3 == 0);
    const double tau = rng.uniform(0.02, 0.98);
    const double fast = loo_pinball_entropy(s, tau);
    const double brute = oracles::loo_pinball_entropy_brute(tau, s);
    REQUIRE(close(fast, brute, 1e-12));
  }
}

TEST_CASE("quantile level validation") {
  CHECK_THROWS_AS(QuantileLevels(std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(QuantileLevels({0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(QuantileLevels({0.5, 0.3}), std::invalid_argument);
  CHECK_THROWS_AS(QuantileLevels({0.0, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(QuantileLevels({0.5, 1.0}), std::invalid_argument);
  const QuantileLevels grid = QuantileLevels::uniform_grid(0.25);
  REQUIRE(grid.count() == 3);
  CHECK(grid[0] == doctest::Approx(0.25));
  CHECK(grid[2] == doctest::Approx(0.75));
}

TEST_CASE("weighted interval score expansion") {
  const QuantileLevels base({0.25});
  const std::vector<double> expanded = base.wis_expansion();
  REQUIRE(expanded.size() == 3);
  CHECK(expanded[0] == doctest::Approx(0.25));
  CHECK(expanded[1] == doctest::Approx(0.5));
  CHECK(expanded[2] == doctest::Approx(0.75));
  CHECK_THROWS_AS(QuantileLevels({0.5}).wis_expansion(), std::invalid_argument);

  const std::vector<double> zeros{0.0, 0.0, 0.0};
  CHECK(wis_loss(zeros, 3.0, base) == doctest::Approx(3.0));
  CHECK_THROWS_AS(wis_loss(std::vector<double>{0.0}, 3.0, base),
                  std::invalid_argument);
}

TEST_CASE("wis loss equals the interval score form") {
  SplitMix64 rng(0x1e);
  const QuantileLevels base({0.1, 0.25});
  const std::vector<double> levels = base.wis_expansion();
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> q(levels.size());
    for (double& v : q) v = rng.uniform(-2.0, 2.0);
    std::sort(q.begin(), q.end());
    const double y = rng.uniform(-4.0, 4.0);

    // (1 / (M + 1/2)) * (|y - median| / 2 + sum_k (a_k/2) * IS_{a_k})
    const double median = q[base.count()];
    double acc = std::abs(y - median) / 2.0;
    for (std::size_t m = 0; m < base.count(); ++m) {
      const double a = 2.0 * base[m];
      const double lo = q[m];
      const double hi = q[q.size() - 1 - m];
      double is = hi - lo;
      if (y < lo) is += 2.0 / a * (lo - y);
      if (y > hi) is += 2.0 / a * (y - hi);
      acc += a / 2.0 * is;
    }
    acc /= static_cast<double>(base.count()) + 0.5;
    REQUIRE(close(wis_loss(q, y, base), acc, 1e-12));
  }
}

TEST_CASE("wis entropy is the weighted sum of level entropies") {
  SplitMix64 rng(0x2f);
  const QuantileLevels base({0.1, 0.3});
  for (int rep = 0; rep < 50; ++rep) {
    const auto y = testutil::random_sequence(rng, 3 + rng.next_below(30), false);
    double acc = 0.0;
    for (const double tau : base.wis_expansion())
      acc += oracles::pinball_entropy_brute(tau, y);
    acc *= 2.0 / 5.0;
    REQUIRE(close(wis_entropy(y, base), acc, 1e-12));
  }
}

TEST_CASE("heap bank reproduces the worked six-step state") {
  PinballBankScanner scan(QuantileLevels({0.3, 0.7}));
  REQUIRE(scan.heap_count() == 3);
  for (const double v : {0.0, 1.0, 2.0, 3.0, -1.0}) scan.step(v);
  CHECK(scan.heap_contents(1) == std::vector<double>{-1.0, 0.0});
  CHECK(scan.heap_contents(2) == std::vector<double>{1.0, 2.0});
  CHECK(scan.heap_contents(3) == std::vector<double>{3.0});

  scan.step(-2.0);
  CHECK(scan.prefix_size() == 6);
  CHECK(scan.heap_contents(1) == std::vector<double>{-2.0, -1.0});
  CHECK(scan.heap_contents(2) == std::vector<double>{0.0, 1.0, 2.0});
  CHECK(scan.heap_contents(3) == std::vector<double>{3.0});
  CHECK(scan.entropy(false) == doctest::Approx(37.0 / 30.0));

  scan.reset();
  CHECK(scan.prefix_size() == 0);
  scan.step(5.0);
  CHECK(scan.heap_contents(1) == std::vector<double>{5.0});
  CHECK(scan.entropy(false) == 0.0);
  CHECK(scan.entropy(true) == 0.0);
}

TEST_CASE("prefix entropies match the brute force on random data") {
  SplitMix64 rng(0x700);
  std::vector<double> entries;
  for (int rep = 0; rep < 40; ++rep) {
    const QuantileLevels levels = testutil::random_levels(rng, 5);
    PinballBankScanner scan(levels);
    const std::size_t n = 1 + rng.next_below(120);
    const auto y = testutil::random_sequence(rng, n, rep % 2 == 0);
    const bool use_loo = rep % 3 == 0;
    scan.prefix_entropies(y, use_loo, entries);
    REQUIRE(entries.size() == n + 1);
    CHECK(entries[0] == 0.0);
    if (use_loo) CHECK(entries[1] == 0.0);
    for (std::size_t s = 1; s <= n; ++s) {
      const std::vector<double> prefix(y.begin(), y.begin() + s);
      const double brute =
          oracles::multi_pinball_entropy_brute(levels, prefix, use_loo);
      REQUIRE(close(entries[s], brute, 1e-9));
    }
  }
}

TEST_CASE("prefix entropies survive a large offset") {
  SplitMix64 rng(0x3e8);
  const QuantileLevels levels({0.2, 0.5, 0.8});
  PinballBankScanner scan(levels);
  std::vector<double> y = testutil::random_sequence(rng, 64, false);
  std::vector<double> entries_base, entries_shifted;
  scan.prefix_entropies(y, false, entries_base);
  for (double& v : y) v += 1e8;
  scan.prefix_entropies(y, false, entries_shifted);
  for (std::size_t s = 0; s < entries_base.size(); ++s)
    REQUIRE(close(entries_base[s], entries_shifted[s], 1e-6));
}
