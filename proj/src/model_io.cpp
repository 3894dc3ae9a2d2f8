#include "distreg/model_io.hpp"

#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace distreg {

namespace {

constexpr int kFormatVersion = 1;

nlohmann::json params_to_json(const TreeParams& p) {
  return {{"max_depth", p.max_depth},
          {"min_samples_leaf", p.min_samples_leaf},
          {"min_samples_split", p.min_samples_split},
          {"use_loo", p.use_loo}};
}

TreeParams params_from_json(const nlohmann::json& j) {
  TreeParams p;
  p.max_depth = j.at("max_depth").get<int>();
  p.min_samples_leaf = j.at("min_samples_leaf").get<std::size_t>();
  p.min_samples_split = j.at("min_samples_split").get<std::size_t>();
  p.use_loo = j.at("use_loo").get<bool>();
  return p;
}

nlohmann::json nodes_to_json(const std::vector<TreeNode>& nodes) {
  nlohmann::json arr = nlohmann::json::array();
  for (const TreeNode& node : nodes) {
    if (node.is_leaf()) {
      arr.push_back({{"type", "leaf"}, {"targets", node.leaf_targets}});
    } else {
      arr.push_back({{"type", "internal"},
                     {"feature", node.feature},
                     {"threshold", node.threshold},
                     {"left", node.left},
                     {"right", node.right}});
    }
  }
  return arr;
}

std::vector<TreeNode> nodes_from_json(const nlohmann::json& arr) {
  std::vector<TreeNode> nodes;
  nodes.reserve(arr.size());
  for (const auto& j : arr) {
    TreeNode node;
    const std::string type = j.at("type").get<std::string>();
    if (type == "leaf") {
      node.leaf_targets = j.at("targets").get<std::vector<double>>();
    } else if (type == "internal") {
      node.feature = j.at("feature").get<std::int32_t>();
      node.threshold = j.at("threshold").get<double>();
      node.left = j.at("left").get<std::int32_t>();
      node.right = j.at("right").get<std::int32_t>();
    } else {
      throw std::runtime_error("model: unknown node type '" + type + "'");
    }
    nodes.push_back(std::move(node));
  }
  if (nodes.empty()) throw std::runtime_error("model: tree has no nodes");
  return nodes;
}

nlohmann::json conformal_to_json(const ConformalCalibrator& c) {
  nlohmann::json j{{"method", conformal_method_name(c.method())},
                   {"alpha", c.alpha()},
                   {"parameters", c.parameters()}};
  if (c.partition()) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const GroupPartition::PNode& n : c.partition()->nodes()) {
      nodes.push_back({{"feature", n.feature},
                       {"threshold", n.threshold},
                       {"left", n.left},
                       {"right", n.right},
                       {"group", n.group}});
    }
    j["partition"] = {{"depth", c.partition()->depth()}, {"nodes", nodes}};
  } else {
    j["partition"] = nullptr;
  }
  return j;
}

ConformalCalibrator conformal_from_json(const nlohmann::json& j) {
  std::optional<GroupPartition> partition;
  if (!j.at("partition").is_null()) {
    const auto& pj = j.at("partition");
    std::vector<GroupPartition::PNode> nodes;
    for (const auto& nj : pj.at("nodes")) {
      GroupPartition::PNode n;
      n.feature = nj.at("feature").get<std::int32_t>();
      n.threshold = nj.at("threshold").get<double>();
      n.left = nj.at("left").get<std::int32_t>();
      n.right = nj.at("right").get<std::int32_t>();
      n.group = nj.at("group").get<std::int32_t>();
      nodes.push_back(n);
    }
    partition.emplace(std::move(nodes), pj.at("depth").get<int>());
  }
  return ConformalCalibrator(
      conformal_method_from_name(j.at("method").get<std::string>()),
      j.at("alpha").get<double>(),
      j.at("parameters").get<std::vector<double>>(), std::move(partition));
}

}  // namespace

nlohmann::json tree_to_json(const DistTree& tree) {
  return {{"format_version", kFormatVersion},
          {"kind", "tree"},
          {"criterion", criterion_name(tree.criterion())},
          {"levels", std::vector<double>(tree.levels().begin(), tree.levels().end())},
          {"params", params_to_json(tree.params())},
          {"n_features", tree.n_features()},
          {"nodes", nodes_to_json(tree.nodes())}};
}

DistTree tree_from_json(const nlohmann::json& j) {
  if (j.at("format_version").get<int>() != kFormatVersion)
    throw std::runtime_error("model: unsupported format version");
  return DistTree(criterion_from_name(j.at("criterion").get<std::string>()),
                  params_from_json(j.at("params")),
                  j.at("levels").get<std::vector<double>>(),
                  j.at("n_features").get<std::size_t>(),
                  nodes_from_json(j.at("nodes")));
}

nlohmann::json model_to_json(const Model& model) {
  const DistForest& f = model.forest;
  nlohmann::json trees = nlohmann::json::array();
  for (const DistTree& tree : f.trees()) {
    trees.push_back({{"levels", std::vector<double>(tree.levels().begin(),
                                                    tree.levels().end())},
                     {"nodes", nodes_to_json(tree.nodes())}});
  }
  nlohmann::json j{
      {"format_version", kFormatVersion},
      {"kind", "forest"},
      {"criterion", criterion_name(f.criterion())},
      {"levels", std::vector<double>(f.levels().begin(), f.levels().end())},
      {"params", params_to_json(f.tree_params())},
      {"n_trees", f.params().n_trees},
      {"subsample_fraction", f.params().subsample_fraction},
      {"seed", f.params().seed},
      {"n_features", f.n_features()},
      {"trees", trees}};
  if (model.conformal) j["conformal"] = conformal_to_json(*model.conformal);
  return j;
}

Model model_from_json(const nlohmann::json& j) {
  if (j.at("format_version").get<int>() != kFormatVersion)
    throw std::runtime_error("model: unsupported format version");
  if (j.at("kind").get<std::string>() != "forest")
    throw std::runtime_error("model: expected a forest model");

  const Criterion criterion =
      criterion_from_name(j.at("criterion").get<std::string>());
  const TreeParams tree_params = params_from_json(j.at("params"));
  ForestParams params;
  params.n_trees = j.at("n_trees").get<std::size_t>();
  params.subsample_fraction = j.at("subsample_fraction").get<double>();
  params.seed = j.at("seed").get<std::uint64_t>();
  const std::size_t n_features = j.at("n_features").get<std::size_t>();

  std::vector<DistTree> trees;
  for (const auto& tj : j.at("trees")) {
    trees.emplace_back(criterion, tree_params,
                       tj.at("levels").get<std::vector<double>>(), n_features,
                       nodes_from_json(tj.at("nodes")));
  }

  Model model{DistForest(criterion, tree_params, params,
                         j.at("levels").get<std::vector<double>>(), n_features,
                         std::move(trees)),
              std::nullopt};
  if (j.contains("conformal") && !j.at("conformal").is_null())
    model.conformal = conformal_from_json(j.at("conformal"));
  return model;
}

void save_model(const Model& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  out << model_to_json(model).dump(2) << '\n';
  if (!out) throw std::runtime_error(path + ": write failed");
}

Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": invalid JSON (" + e.what() + ")");
  }
  try {
    return model_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": malformed model (" + e.what() + ")");
  }
}

}  // namespace distreg
