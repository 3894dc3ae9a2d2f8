#pragma once

#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "distreg/conformal.hpp"
#include "distreg/forest.hpp"
#include "distreg/tree.hpp"

namespace distreg {

// A forest plus (optionally) its conformal calibrator; the unit the CLI
// saves and loads.
struct Model {
  DistForest forest;
  std::optional<ConformalCalibrator> conformal;
};

nlohmann::json tree_to_json(const DistTree& tree);
DistTree tree_from_json(const nlohmann::json& j);

nlohmann::json model_to_json(const Model& model);
Model model_from_json(const nlohmann::json& j);

void save_model(const Model& model, const std::string& path);
Model load_model(const std::string& path);

}  // namespace distreg
