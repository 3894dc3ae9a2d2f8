#include "distreg/crps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace distreg {

EmpiricalCdf::EmpiricalCdf(std::vector<double> values) : v_(std::move(values)) {
  if (v_.empty()) throw std::invalid_argument("EmpiricalCdf: empty sample");
  std::sort(v_.begin(), v_.end());
}

double crps_of_ecdf(const EmpiricalCdf& f, double y) {
  const std::span<const double> v = f.values();
  const double n = static_cast<double>(v.size());
  constexpr double kInf = std::numeric_limits<double>::infinity();

  double acc = 0.0;
  double cur = std::min(v.front(), y);
  std::size_t consumed = 0;  // elements of v <= cur
  bool y_passed = false;
  for (;;) {
    while (consumed < v.size() && v[consumed] <= cur) ++consumed;
    if (cur >= y) y_passed = true;
    double nxt = consumed < v.size() ? v[consumed] : kInf;
    if (!y_passed && y < nxt) nxt = y;
    if (nxt == kInf) break;
    const double d =
        static_cast<double>(consumed) / n - (y_passed ? 1.0 : 0.0);
    acc += (nxt - cur) * d * d;
    cur = nxt;
  }
  return acc;
}

double crps_entropy_direct(std::span<const double> y) {
  if (y.empty()) throw std::invalid_argument("crps_entropy_direct: empty sample");
  const std::size_t n = y.size();
  std::vector<double> s(y.begin(), y.end());
  std::sort(s.begin(), s.end());
  double acc = 0.0;
  for (std::size_t i = 2; i <= n; ++i)
    acc += static_cast<double>(i - 1) * static_cast<double>(i) *
           (s[i - 1] - s[n - i]);
  const double nd = static_cast<double>(n);
  return acc / (nd * nd * nd);
}

double loo_crps_entropy(std::span<const double> y) {
  if (y.size() < 2)
    throw std::invalid_argument("loo_crps_entropy: need at least 2 values");
  const double n = static_cast<double>(y.size());
  const double ratio = (n / (n - 1.0)) * (n / (n - 1.0));
  return ratio * crps_entropy_direct(y);
}

double crps_from_quantile_grid(std::span<const double> quantiles, double y) {
  if (quantiles.empty())
    throw std::invalid_argument("crps_from_quantile_grid: empty grid");
  std::vector<double> q(quantiles.begin(), quantiles.end());
  for (std::size_t i = 1; i < q.size(); ++i) q[i] = std::max(q[i], q[i - 1]);
  return crps_of_ecdf(EmpiricalCdf(std::move(q)), y);
}

void CrpsScanner::prefix_entropies(std::span<const double> y, bool use_loo,
                                   std::vector<double>& entries) {
  const std::size_t n = y.size();
  if (n == 0) throw std::invalid_argument("prefix_entropies: empty sequence");

  const double mu =
      std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  centered_.resize(n);
  for (std::size_t i = 0; i < n; ++i) centered_[i] = y[i] - mu;

  // Sort order of the full sequence; stable so that equal values keep their
  // arrival order, matching the rank tree's right-of-ties rule.
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), 0u);
  std::stable_sort(order_.begin(), order_.end(),
                   [&](std::uint32_t a, std::uint32_t b) {
                     return centered_[a] < centered_[b];
                   });
  slot_.resize(n);
  for (std::size_t j = 0; j < n; ++j) slot_[order_[j]] = static_cast<std::uint32_t>(j + 1);

  fenwick_.resize(n);
  ranks_.clear();
  ranks_.reserve(n);

  entries.clear();
  entries.reserve(n + 1);
  entries.push_back(0.0);

  double running_sum = 0.0;       // sum of the current prefix
  double weighted_rank_sum = 0.0; // sum over prefix of rank_i * y_i at insertion state
  double entropy_acc = 0.0;       // s^3 * entropy of the current prefix
  for (std::size_t s = 1; s <= n; ++s) {
    const double v = centered_[s - 1];
    const double sd = static_cast<double>(s);
    const std::size_t rank = ranks_.insert(v);
    // Sum of prefix elements smaller than v (ties resolved by arrival
    // order); queried before inserting v itself.
    const double below = fenwick_.prefix_sum(slot_[s - 1]);
    weighted_rank_sum += static_cast<double>(rank) * v + running_sum - below;
    running_sum += v;
    entropy_acc += (sd - 1.0) * (2.0 * static_cast<double>(rank) - 3.0 - (sd - 1.0)) * v +
                   2.0 * weighted_rank_sum - 2.0 * running_sum -
                   2.0 * (sd - 1.0) * below;
    if (use_loo) {
      entries.push_back(s == 1 ? 0.0 : entropy_acc / (sd * (sd - 1.0) * (sd - 1.0)));
    } else {
      entries.push_back(entropy_acc / (sd * sd * sd));
    }
    fenwick_.add(slot_[s - 1], v);
  }
}

}  // namespace distreg
