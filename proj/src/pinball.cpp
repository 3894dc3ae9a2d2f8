#include "distreg/pinball.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace distreg {

namespace {

void require_tau(double tau) {
  if (!(tau > 0.0 && tau < 1.0))
    throw std::invalid_argument("quantile level must lie in (0,1)");
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

double pinball_loss(double xi, double tau) {
  return xi >= 0.0 ? tau * xi : (tau - 1.0) * xi;
}

double empirical_quantile(std::span<const double> y, double tau) {
  if (y.empty())
    throw std::invalid_argument("empirical_quantile: empty sample");
  require_tau(tau);
  const std::size_t k = quantile_index(tau, y.size());
  std::vector<double> tmp(y.begin(), y.end());
  std::nth_element(tmp.begin(), tmp.begin() + (k - 1), tmp.end());
  return tmp[k - 1];
}

double pinball_entropy(std::span<const double> y, double tau) {
  const double q = empirical_quantile(y, tau);
  double acc = 0.0;
  for (const double v : y) acc += pinball_loss(v - q, tau);
  return acc / static_cast<double>(y.size());
}

double loo_pinball_entropy(std::span<const double> y, double tau) {
  if (y.size() < 2)
    throw std::invalid_argument("loo_pinball_entropy: need at least 2 values");
  require_tau(tau);
  const std::size_t n = y.size();
  std::vector<double> s(y.begin(), y.end());
  std::sort(s.begin(), s.end());

  const std::size_t r = quantile_index(tau, n);
  const std::size_t r_minus = quantile_index(tau, n - 1);
  const double q = s[r - 1];
  double acc = 0.0;
  for (const double v : s) acc += pinball_loss(v - q, tau);
  const double base = acc / static_cast<double>(n);

  // Removing one element shifts the quantile index to r_minus in the reduced
  // sample; the induced extra loss depends only on the gap to the adjacent
  // order statistic.
  double debias = 0.0;
  if (r == r_minus) {
    if (r + 1 <= n)
      debias = (1.0 - tau) * static_cast<double>(r) * (s[r] - s[r - 1]);
  } else {
    if (r >= 2)
      debias = tau * static_cast<double>(n - r + 1) * (s[r - 1] - s[r - 2]);
  }
  return base + debias / static_cast<double>(n);
}

double wis_loss(std::span<const double> quantiles, double y,
                const QuantileLevels& base) {
  const std::vector<double> levels = base.wis_expansion();
  if (quantiles.size() != levels.size())
    throw std::invalid_argument(
        "wis_loss: quantile count must match the symmetric level set");
  double acc = 0.0;
  for (std::size_t m = 0; m < levels.size(); ++m)
    acc += pinball_loss(y - quantiles[m], levels[m]);
  return 2.0 * acc / static_cast<double>(levels.size());
}

double wis_entropy(std::span<const double> y, const QuantileLevels& base) {
  const std::vector<double> levels = base.wis_expansion();
  double acc = 0.0;
  for (const double tau : levels) acc += pinball_entropy(y, tau);
  return 2.0 * acc / static_cast<double>(levels.size());
}

PinballBankScanner::PinballBankScanner(QuantileLevels levels)
    : levels_(std::move(levels)), heaps_(levels_.count() + 1) {}

void PinballBankScanner::reset() {
  for (auto& h : heaps_) h.clear();
  count_ = 0;
}

void PinballBankScanner::step(double v) {
  const std::size_t s = ++count_;
  const std::size_t bands = levels_.count();
  bool have_carry = true;
  double carry = v;
  std::size_t prefix = 0;  // elements settled in heaps 1..m after this stage
  for (std::size_t m = 0; m < bands && have_carry; ++m) {
    const std::size_t target = quantile_index(levels_[m], s);
    const std::size_t current = prefix + heaps_[m].size();
    if (current == target) {
      // Band already full: the carry passes through, possibly trading places
      // with the band maximum to keep the band holding the smallest values.
      if (!heaps_[m].empty() && carry <= *heaps_[m].max()) {
        const double displaced = *heaps_[m].pop_max();
        heaps_[m].push(carry);
        carry = displaced;
      }
    } else if (current + 1 == target) {
      // Band grows by one: absorb the smaller of the carry and the smallest
      // element above; the other keeps cascading.
      std::size_t src = m + 1;
      while (src < heaps_.size() && heaps_[src].empty()) ++src;
      if (src == heaps_.size()) {
        heaps_[m].push(carry);
        have_carry = false;
      } else {
        const double above = *heaps_[src].min();
        if (carry <= above) {
          heaps_[m].push(carry);
          heaps_[src].pop_min();
          carry = above;
        } else {
          heaps_[src].pop_min();
          heaps_[m].push(above);
        }
      }
    } else {
      throw std::logic_error("PinballBankScanner: band cardinality invariant violated");
    }
    prefix = target;
  }
  if (have_carry) heaps_[bands].push(carry);
}

double PinballBankScanner::entropy(bool use_loo) const {
  const std::size_t s = count_;
  if (s == 0) return 0.0;
  if (use_loo && s == 1) return 0.0;
  const std::size_t bands = levels_.count();

  double total = 0.0;
  for (const auto& h : heaps_) total += h.total();

  // above_min_[m] = smallest element stored strictly above band m.
  above_min_.assign(bands, kNaN);
  double running = kNaN;
  for (std::size_t m = bands; m-- > 0;) {
    if (!heaps_[m + 1].empty()) running = *heaps_[m + 1].min();
    above_min_[m] = running;
  }

  const double sd = static_cast<double>(s);
  double cum = 0.0;
  double top1 = kNaN, top2 = kNaN;  // two largest values within bands 1..m
  double entropy = 0.0;
  for (std::size_t m = 0; m < bands; ++m) {
    const auto& h = heaps_[m];
    if (!h.empty()) {
      top2 = h.size() >= 2 ? *h.second_max() : top1;
      top1 = *h.max();
    }
    cum += h.total();
    const double tau = levels_[m];
    const std::size_t r = quantile_index(tau, s);
    const double qhat = top1;
    entropy += qhat * (static_cast<double>(r) / sd - tau) + tau * total / sd -
               cum / sd;
    if (use_loo && s >= 2) {
      const std::size_t r_minus = quantile_index(tau, s - 1);
      double debias = 0.0;
      if (r == r_minus) {
        const double next_up = above_min_[m];
        if (!std::isnan(next_up))
          debias = (1.0 - tau) * static_cast<double>(r) * (next_up - qhat);
      } else {
        if (!std::isnan(top2))
          debias = tau * static_cast<double>(s - r + 1) * (qhat - top2);
      }
      entropy += debias / sd;
    }
  }
  return entropy;
}

void PinballBankScanner::prefix_entropies(std::span<const double> y,
                                          bool use_loo,
                                          std::vector<double>& entries) {
  if (y.empty())
    throw std::invalid_argument("prefix_entropies: empty sequence");
  reset();
  entries.clear();
  entries.reserve(y.size() + 1);
  entries.push_back(0.0);
  const double mu =
      std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
  for (const double v : y) {
    step(v - mu);
    entries.push_back(entropy(use_loo));
  }
}

std::vector<double> PinballBankScanner::heap_contents(std::size_t m) const {
  const auto& raw = heaps_[m - 1].raw();
  std::vector<double> out(raw.begin(), raw.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace distreg
