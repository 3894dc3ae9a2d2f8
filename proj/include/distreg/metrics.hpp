#pragma once

#include <optional>
#include <string>
#include <vector>

#include "distreg/conformal.hpp"
#include "distreg/dataset.hpp"
#include "distreg/forest.hpp"

#include <nlohmann/json_fwd.hpp>

namespace distreg {

struct MetricReport {
  double mean_crps = 0.0;
  double mean_wis = 0.0;
  double crossing_pct = 0.0;  // % of adjacent level pairs out of order
  std::optional<double> coverage;    // conformal intervals only
  std::optional<double> mean_width;  // conformal intervals only

  nlohmann::json to_json() const;
  std::string to_table() const;
};

// Level grid {step, 2*step, ..., 1.0}; 1/step must be an even integer.
std::vector<double> level_grid(double step);

// Evaluates forest predictions on a test set over the given level grid:
// mean CRPS of the predicted quantile-grid CDF, mean weighted interval score
// over the symmetric level subset, and the percentage of crossing pairs.
// When a calibrator is given, interval coverage and width are added.
MetricReport evaluate(const DistForest& forest, const Dataset& test,
                      double grid_step,
                      const ConformalCalibrator* calibrator = nullptr);

}  // namespace distreg
