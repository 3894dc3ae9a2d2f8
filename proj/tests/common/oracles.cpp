#include "common/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "distreg/pinball.hpp"

namespace distreg::oracles {

double pinball_entropy_brute(double tau, const std::vector<double>& y) {
  if (y.empty()) throw std::invalid_argument("pinball_entropy_brute: empty");
  double best = std::numeric_limits<double>::infinity();
  for (const double a : y) {
    double acc = 0.0;
    for (const double v : y) acc += pinball_loss(v - a, tau);
    best = std::min(best, acc / static_cast<double>(y.size()));
  }
  return best;
}

double loo_pinball_entropy_brute(double tau, const std::vector<double>& y) {
  const std::size_t n = y.size();
  if (n < 2) throw std::invalid_argument("loo_pinball_entropy_brute: n < 2");
  double acc = 0.0;
  std::vector<double> reduced;
  reduced.reserve(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    reduced.clear();
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) reduced.push_back(y[j]);
    std::sort(reduced.begin(), reduced.end());
    const double q = reduced[quantile_index(tau, n - 1) - 1];
    acc += pinball_loss(y[i] - q, tau);
  }
  return acc / static_cast<double>(n);
}

double crps_energy(const std::vector<double>& sample, double y) {
  if (sample.empty()) throw std::invalid_argument("crps_energy: empty");
  const double n = static_cast<double>(sample.size());
  double first = 0.0;
  for (const double v : sample) first += std::abs(v - y);
  double second = 0.0;
  for (const double a : sample)
    for (const double b : sample) second += std::abs(a - b);
  return first / n - second / (2.0 * n * n);
}

double crps_integral(const std::vector<double>& sample, double y) {
  if (sample.empty()) throw std::invalid_argument("crps_integral: empty");
  std::vector<double> breaks(sample.begin(), sample.end());
  breaks.push_back(y);
  std::sort(breaks.begin(), breaks.end());
  const double n = static_cast<double>(sample.size());
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double lo = breaks[k];
    const double hi = breaks[k + 1];
    if (hi == lo) continue;
    double le = 0.0;
    for (const double v : sample) le += v <= lo ? 1.0 : 0.0;
    const double gap = le / n - (lo >= y ? 1.0 : 0.0);
    acc += (hi - lo) * gap * gap;
  }
  return acc;
}

double crps_entropy_pairwise(const std::vector<double>& y) {
  if (y.empty()) throw std::invalid_argument("crps_entropy_pairwise: empty");
  const double n = static_cast<double>(y.size());
  double acc = 0.0;
  for (const double a : y)
    for (const double b : y) acc += std::abs(a - b);
  return acc / (2.0 * n * n);
}

double loo_crps_entropy_brute(const std::vector<double>& y) {
  const std::size_t n = y.size();
  if (n < 2) throw std::invalid_argument("loo_crps_entropy_brute: n < 2");
  double acc = 0.0;
  std::vector<double> reduced;
  reduced.reserve(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    reduced.clear();
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) reduced.push_back(y[j]);
    acc += crps_energy(reduced, y[i]);
  }
  return acc / static_cast<double>(n);
}

double multi_pinball_entropy_brute(const QuantileLevels& levels,
                                   const std::vector<double>& y, bool use_loo) {
  if (use_loo && y.size() < 2) return 0.0;
  double acc = 0.0;
  for (const double tau : levels.values())
    acc += use_loo ? loo_pinball_entropy_brute(tau, y)
                   : pinball_entropy_brute(tau, y);
  return acc;
}

double node_impurity(const std::vector<double>& y, Criterion criterion,
                     const QuantileLevels* levels, bool use_loo) {
  const std::size_t s = y.size();
  if (s == 0) return 0.0;
  const bool loo = use_loo && criterion != Criterion::squared_error;
  double h = 0.0;
  switch (criterion) {
    case Criterion::crps: {
      if (loo && s < 2) {
        h = 0.0;
      } else {
        h = crps_entropy_pairwise(y);
        if (loo) {
          const double sd = static_cast<double>(s);
          h *= (sd / (sd - 1.0)) * (sd / (sd - 1.0));
        }
      }
      break;
    }
    case Criterion::pinball:
      h = multi_pinball_entropy_brute(*levels, y, loo);
      break;
    case Criterion::squared_error: {
      double mu = 0.0;
      for (const double v : y) mu += v;
      mu /= static_cast<double>(s);
      for (const double v : y) h += (v - mu) * (v - mu);
      h /= static_cast<double>(s);
      break;
    }
  }
  return static_cast<double>(s) * h;
}

std::optional<BruteSplit> brute_best_split(const Dataset& data,
                                           const std::vector<std::size_t>& rows,
                                           Criterion criterion,
                                           const QuantileLevels* levels,
                                           std::size_t min_samples_leaf,
                                           bool use_loo) {
  const std::size_t n = rows.size();
  if (n < 2 * min_samples_leaf) return std::nullopt;

  std::optional<BruteSplit> best;
  std::vector<std::pair<double, std::uint32_t>> order(n);
  std::vector<double> left, right;
  for (std::size_t j = 0; j < data.n_cols; ++j) {
    for (std::size_t i = 0; i < n; ++i)
      order[i] = {data.x(rows[i], j), static_cast<std::uint32_t>(i)};
    std::sort(order.begin(), order.end());
    if (order.front().first == order.back().first) continue;

    for (std::size_t w = min_samples_leaf; w + min_samples_leaf <= n; ++w) {
      if (order[w - 1].first == order[w].first) continue;
      left.clear();
      right.clear();
      for (std::size_t i = 0; i < n; ++i) {
        const double t = data.targets[rows[order[i].second]];
        (i < w ? left : right).push_back(t);
      }
      const double score = node_impurity(left, criterion, levels, use_loo) +
                           node_impurity(right, criterion, levels, use_loo);
      if (!best || score < best->score) best = BruteSplit{j, w, score};
    }
  }
  return best;
}

}  // namespace distreg::oracles
