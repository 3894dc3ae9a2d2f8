#include "distreg/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "distreg/crps.hpp"
#include "distreg/parallel.hpp"
#include "distreg/pinball.hpp"

namespace distreg {

nlohmann::json MetricReport::to_json() const {
  nlohmann::json j{{"mean_crps", mean_crps},
                   {"mean_wis", mean_wis},
                   {"crossing_pct", crossing_pct}};
  if (coverage) j["coverage"] = *coverage;
  if (mean_width) j["mean_width"] = *mean_width;
  return j;
}

std::string MetricReport::to_table() const {
  char buf[128];
  std::string out;
  auto row = [&](const char* name, double v) {
    std::snprintf(buf, sizeof(buf), "%-14s %14.6g\n", name, v);
    out += buf;
  };
  row("mean_crps", mean_crps);
  row("mean_wis", mean_wis);
  row("crossing_pct", crossing_pct);
  if (coverage) row("coverage", *coverage);
  if (mean_width) row("mean_width", *mean_width);
  return out;
}

std::vector<double> level_grid(double step) {
  if (!(step > 0.0 && step < 1.0))
    throw std::invalid_argument("level_grid: step must be in (0,1)");
  const double k = 1.0 / step;
  const std::size_t count = static_cast<std::size_t>(std::llround(k));
  if (std::abs(k - static_cast<double>(count)) > 1e-9 || count < 4 ||
      count % 2 != 0)
    throw std::invalid_argument(
        "level_grid: 1/step must be an even integer >= 4");
  std::vector<double> grid(count);
  for (std::size_t i = 0; i + 1 < count; ++i)
    grid[i] = static_cast<double>(i + 1) * step;
  grid[count - 1] = 1.0;
  return grid;
}

MetricReport evaluate(const DistForest& forest, const Dataset& test,
                      double grid_step, const ConformalCalibrator* calibrator) {
  test.validate();
  if (test.n_cols != forest.n_features())
    throw std::invalid_argument("evaluate: feature count mismatch");

  const std::vector<double> grid = level_grid(grid_step);
  const std::size_t k = grid.size();
  // Symmetric interval-score levels: the grid without its final 1.0, i.e.
  // tau_1 .. tau_{K/2-1}, 1/2 and the mirrored upper half.
  std::vector<double> base(grid.begin(), grid.begin() + (k / 2 - 1));
  const QuantileLevels wis_base{std::move(base)};

  const std::size_t n = test.n_rows;
  std::vector<double> crps(n), wis(n), crossings(n);
  std::vector<double> covered(n, 0.0), width(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    std::vector<double> x(test.n_cols);
    for (std::size_t j = 0; j < test.n_cols; ++j) x[j] = test.x(i, j);
    const double y = test.targets[i];
    const std::vector<double> q = forest.predict_quantiles(x, grid);
    double crossed = 0.0;
    for (std::size_t m = 0; m + 1 < k; ++m)
      if (q[m] > q[m + 1]) crossed += 1.0;
    crossings[i] = crossed;
    crps[i] = crps_from_quantile_grid(q, y);
    wis[i] = wis_loss({q.data(), k - 1}, y, wis_base);
    if (calibrator) {
      const auto [lo, hi] = calibrator->predict_interval(forest, x);
      covered[i] = (y >= lo && y <= hi) ? 1.0 : 0.0;
      width[i] = hi - lo;
    }
  });

  const double nd = static_cast<double>(n);
  MetricReport report;
  double acc = 0.0;
  for (const double v : crps) acc += v;
  report.mean_crps = acc / nd;
  acc = 0.0;
  for (const double v : wis) acc += v;
  report.mean_wis = acc / nd;
  acc = 0.0;
  for (const double v : crossings) acc += v;
  report.crossing_pct = 100.0 * acc / (nd * static_cast<double>(k - 1));
  if (calibrator) {
    acc = 0.0;
    for (const double v : covered) acc += v;
    report.coverage = acc / nd;
    acc = 0.0;
    for (const double v : width) acc += v;
    report.mean_width = acc / nd;
  }
  return report;
}

}  // namespace distreg
