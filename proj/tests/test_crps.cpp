#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "common/oracles.hpp"
#include "common/testutil.hpp"
#include "distreg/crps.hpp"
#include "distreg/rng.hpp"

using namespace distreg;
using testutil::close;

TEST_CASE("crps of an empirical cdf on worked cases") {
  CHECK(crps_of_ecdf(EmpiricalCdf({0.0, 1.0}), 0.0) == doctest::Approx(0.25));
  CHECK(crps_of_ecdf(EmpiricalCdf({1.0, 2.0}), 0.0) == doctest::Approx(1.25));
  CHECK(crps_of_ecdf(EmpiricalCdf({5.0}), 5.0) == 0.0);
  CHECK(crps_of_ecdf(EmpiricalCdf({5.0}), 8.0) == doctest::Approx(3.0));
  CHECK(crps_of_ecdf(EmpiricalCdf({5.0}), 1.5) == doctest::Approx(3.5));
  CHECK(crps_of_ecdf(EmpiricalCdf({0.0, 0.0, 1.0}), 0.5) ==
        doctest::Approx(5.0 / 18.0));
  CHECK_THROWS_AS(EmpiricalCdf({}), std::invalid_argument);
}

TEST_CASE("three crps evaluations agree") {
  SplitMix64 rng(0xc1);
  for (int rep = 0; rep < 400; ++rep) {
    const std::size_t n = 1 + rng.next_below(30);
    const auto sample = testutil::random_sequence(rng, n, rep % 2 == 0);
    const double y = rep % 5 == 0 ? rng.uniform(-20.0, 20.0)
                                  : rng.uniform(-4.0, 4.0);
    const double walk = crps_of_ecdf(EmpiricalCdf(sample), y);
    REQUIRE(close(walk, oracles::crps_energy(sample, y), 1e-12));
    REQUIRE(close(walk, oracles::crps_integral(sample, y), 1e-12));
  }
}

TEST_CASE("crps entropy closed form on worked cases") {
  CHECK(crps_entropy_direct(std::vector<double>{0.0, 1.0}) ==
        doctest::Approx(0.25));
  CHECK(crps_entropy_direct(std::vector<double>{0.0, 1.0, 2.0}) ==
        doctest::Approx(4.0 / 9.0));
  CHECK(crps_entropy_direct(std::vector<double>{3.0}) == 0.0);
  CHECK(crps_entropy_direct(std::vector<double>{2.0, 2.0, 2.0}) == 0.0);
  CHECK_THROWS_AS(crps_entropy_direct(std::vector<double>{}),
                  std::invalid_argument);
}

TEST_CASE("crps entropy equals half the mean absolute difference") {
  SplitMix64 rng(0xc2);
  for (int rep = 0; rep < 300; ++rep) {
    const std::size_t n = 1 + rng.next_below(50);
    const auto y = testutil::random_sequence(rng, n, rep % 2 == 0);
    REQUIRE(close(crps_entropy_direct(y), oracles::crps_entropy_pairwise(y),
                  1e-12));
  }
}

TEST_CASE("crps entropy scales and translates") {
  SplitMix64 rng(0xc3);
  const auto y = testutil::random_sequence(rng, 30, false);
  std::vector<double> shifted = y, scaled = y;
  for (double& v : shifted) v -= 55.5;
  for (double& v : scaled) v *= 3.0;
  CHECK(close(crps_entropy_direct(shifted), crps_entropy_direct(y), 1e-12));
  CHECK(close(crps_entropy_direct(scaled), 3.0 * crps_entropy_direct(y),
              1e-12));
}

TEST_CASE("leave-one-out crps entropy is an exact rescale") {
  const std::vector<double> y{0.0, 1.0, 2.0};
  CHECK(loo_crps_entropy(y) == doctest::Approx(1.0));
  CHECK_THROWS_AS(loo_crps_entropy(std::vector<double>{1.0}),
                  std::invalid_argument);

  SplitMix64 rng(0xc4);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 2 + rng.next_below(24);
    const auto s = testutil::random_sequence(rng, n, rep % 2 == 0);
    REQUIRE(close(loo_crps_entropy(s), oracles::loo_crps_entropy_brute(s),
                  1e-12));
  }
}

TEST_CASE("crps from a quantile grid clamps crossings") {
  CHECK(crps_from_quantile_grid(std::vector<double>{0.0, 1.0, 2.0}, 1.0) ==
        doctest::Approx(2.0 / 9.0));
  // The crossing pair (1, 0) is lifted to (1, 1) before scoring.
  CHECK(crps_from_quantile_grid(std::vector<double>{1.0, 0.0, 2.0}, 1.0) ==
        doctest::Approx(crps_of_ecdf(EmpiricalCdf({1.0, 1.0, 2.0}), 1.0)));
  CHECK_THROWS_AS(crps_from_quantile_grid(std::vector<double>{}, 0.0),
                  std::invalid_argument);
}

TEST_CASE("prefix entropies match the pairwise oracle") {
  CrpsScanner scan;
  std::vector<double> entries;
  scan.prefix_entropies(std::vector<double>{0.0, 1.0, 2.0}, false, entries);
  REQUIRE(entries.size() == 4);
  CHECK(entries[0] == 0.0);
  CHECK(entries[1] == doctest::Approx(0.0));
  CHECK(entries[2] == doctest::Approx(0.25));
  CHECK(entries[3] == doctest::Approx(4.0 / 9.0));

  SplitMix64 rng(0xc5);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t n = 1 + rng.next_below(150);
    const auto y = testutil::random_sequence(rng, n, rep % 2 == 0);
    const bool use_loo = rep % 3 == 0;
    scan.prefix_entropies(y, use_loo, entries);
    REQUIRE(entries.size() == n + 1);
    if (use_loo) CHECK(entries[1] == 0.0);
    for (std::size_t s = 1; s <= n; ++s) {
      const std::vector<double> prefix(y.begin(), y.begin() + s);
      double expect = oracles::crps_entropy_pairwise(prefix);
      if (use_loo) {
        const double sd = static_cast<double>(s);
        expect = s == 1 ? 0.0 : expect * (sd / (sd - 1.0)) * (sd / (sd - 1.0));
      }
      REQUIRE(close(entries[s], expect, 1e-9));
    }
  }
}

TEST_CASE("prefix entropies survive a large offset") {
  SplitMix64 rng(0xc6);
  CrpsScanner scan;
  std::vector<double> y = testutil::random_sequence(rng, 80, false);
  std::vector<double> base, shifted;
  scan.prefix_entropies(y, false, base);
  for (double& v : y) v += 1e8;
  scan.prefix_entropies(y, false, shifted);
  for (std::size_t s = 0; s < base.size(); ++s)
    REQUIRE(close(base[s], shifted[s], 1e-6));
}

TEST_CASE("prefix entropies reject an empty sequence") {
  CrpsScanner scan;
  std::vector<double> entries;
  CHECK_THROWS_AS(scan.prefix_entropies(std::vector<double>{}, false, entries),
                  std::invalid_argument);
}
