#include "distreg/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "distreg/bench.hpp"
#include "distreg/conformal.hpp"
#include "distreg/dataset.hpp"
#include "distreg/forest.hpp"
#include "distreg/metrics.hpp"
#include "distreg/model_io.hpp"
#include "distreg/parallel.hpp"
#include "distreg/synthetic.hpp"
#include "distreg/tree.hpp"

namespace distreg {

namespace {

// Flag combinations CLI11 cannot express (e.g. criterion-dependent flags).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  out << text;
  if (!out) throw std::runtime_error(path + ": write failed");
}

std::string format_quantile_csv(const std::vector<std::vector<double>>& rows,
                                const std::vector<double>& levels) {
  std::string out;
  char buf[64];
  for (std::size_t m = 0; m < levels.size(); ++m) {
    std::snprintf(buf, sizeof(buf), "q_%g", levels[m]);
    out += buf;
    out += (m + 1 < levels.size()) ? ',' : '\n';
  }
  for (const auto& row : rows) {
    for (std::size_t m = 0; m < row.size(); ++m) {
      std::snprintf(buf, sizeof(buf), "%.17g", row[m]);
      out += buf;
      out += (m + 1 < row.size()) ? ',' : '\n';
    }
  }
  return out;
}

struct FitOptions {
  std::string data_path, target = "y", out_path;
  std::string criterion = "crps";
  std::vector<double> levels;
  std::size_t n_trees = 50;
  double subsample = 0.6;
  std::uint64_t seed = 0;
  int max_depth = -1;
  std::size_t min_leaf = 5;
  std::size_t min_split = 10;
  bool no_loo = false;
};

int run_fit(const FitOptions& opt) {
  const Criterion criterion = criterion_from_name(opt.criterion);
  std::optional<QuantileLevels> levels;
  if (criterion == Criterion::pinball) {
    if (opt.levels.empty())
      throw UsageError("--levels is required with --criterion pinball");
    levels.emplace(opt.levels);
  } else if (!opt.levels.empty()) {
    throw UsageError("--levels only applies to --criterion pinball");
  }

  const Dataset data = load_csv(opt.data_path, opt.target);
  TreeParams tp;
  tp.max_depth = opt.max_depth;
  tp.min_samples_leaf = opt.min_leaf;
  tp.min_samples_split = opt.min_split;
  tp.use_loo = !opt.no_loo;
  ForestParams fp;
  fp.n_trees = opt.n_trees;
  fp.subsample_fraction = opt.subsample;
  fp.seed = opt.seed;

  const Model model{DistForest::fit(data, criterion, tp, fp,
                                    levels ? &*levels : nullptr),
                    std::nullopt};
  save_model(model, opt.out_path);
  std::cerr << "fitted " << fp.n_trees << " trees on " << data.n_rows
            << " rows -> " << opt.out_path << "\n";
  return 0;
}

struct PredictOptions {
  std::string model_path, data_path, target = "y", out_path;
  std::vector<double> levels;
  bool intervals = false;
};

int run_predict(const PredictOptions& opt) {
  const Model model = load_model(opt.model_path);
  const Dataset data = load_csv(opt.data_path, opt.target);
  if (data.n_cols != model.forest.n_features())
    throw std::runtime_error("predict: feature count mismatch between model and data");
  if (opt.levels.empty()) throw UsageError("--levels must not be empty");

  std::vector<std::vector<double>> rows(data.n_rows);
  std::vector<double> x;
  for (std::size_t i = 0; i < data.n_rows; ++i) {
    data.row(i, x);
    rows[i] = model.forest.predict_quantiles(x, opt.levels);
  }
  write_text(opt.out_path, format_quantile_csv(rows, opt.levels));
  return 0;
}

struct EvalOptions {
  std::string model_path, data_path, target = "y";
  double grid_step = 0.02;
  bool json_only = false;
};

int run_eval(const EvalOptions& opt) {
  const Model model = load_model(opt.model_path);
  const Dataset data = load_csv(opt.data_path, opt.target);
  const MetricReport report =
      evaluate(model.forest, data, opt.grid_step,
               model.conformal ? &*model.conformal : nullptr);
  if (opt.json_only) {
    std::cout << report.to_json().dump(2) << "\n";
  } else {
    std::cout << report.to_table();
    std::cout << report.to_json().dump() << "\n";
  }
  return 0;
}

struct CalibrateOptions {
  std::string model_path, data_path, target = "y", out_path;
  std::string method = "distributional";
  double alpha = 0.1;
  std::string group_tree_path;
  int group_depth = 2;
};

int run_conformal_calibrate(const CalibrateOptions& opt) {
  Model model = load_model(opt.model_path);
  const Dataset calib = load_csv(opt.data_path, opt.target);
  std::optional<GroupPartition> partition;
  if (!opt.group_tree_path.empty()) {
    std::ifstream in(opt.group_tree_path);
    if (!in) throw std::runtime_error(opt.group_tree_path + ": cannot open file");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(opt.group_tree_path + ": invalid JSON (" +
                               e.what() + ")");
    }
    partition.emplace(tree_from_json(j), opt.group_depth);
  }
  model.conformal = ConformalCalibrator::calibrate(
      model.forest, calib, opt.alpha,
      conformal_method_from_name(opt.method),
      partition ? &*partition : nullptr);
  save_model(model, opt.out_path);
  std::cerr << "calibrated on " << calib.n_rows << " rows -> " << opt.out_path
            << "\n";
  return 0;
}

struct IntervalOptions {
  std::string model_path, data_path, target = "y", out_path;
};

int run_conformal_predict(const IntervalOptions& opt) {
  const Model model = load_model(opt.model_path);
  if (!model.conformal)
    throw std::runtime_error(
        "conformal-predict: model has no calibration; run conformal-calibrate first");
  const Dataset data = load_csv(opt.data_path, opt.target);
  if (data.n_cols != model.forest.n_features())
    throw std::runtime_error(
        "conformal-predict: feature count mismatch between model and data");

  std::string out = "lo,hi\n";
  char buf[80];
  std::vector<double> x;
  for (std::size_t i = 0; i < data.n_rows; ++i) {
    data.row(i, x);
    const auto [lo, hi] = model.conformal->predict_interval(model.forest, x);
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", lo, hi);
    out += buf;
  }
  write_text(opt.out_path, out);
  return 0;
}

struct SynthOptions {
  std::string kind = "gamma";
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  std::string out_path;
};

int run_synth(const SynthOptions& opt) {
  Dataset data;
  if (opt.kind == "gamma") {
    data = gen_gamma(opt.n, opt.seed);
  } else if (opt.kind == "hetero") {
    data = gen_hetero(opt.n, opt.seed);
  } else {
    throw UsageError("--kind must be gamma or hetero");
  }
  save_csv(data, opt.out_path);
  std::cerr << "wrote " << data.n_rows << " rows -> " << opt.out_path << "\n";
  return 0;
}

struct BenchOptions {
  std::vector<std::size_t> fast_sizes{1024, 4096, 16384, 65536, 131072};
  std::vector<std::size_t> brute_sizes{128, 256, 512, 1024, 2048};
  int repeats = 3;
  std::uint64_t seed = 0;
  std::string out_path;
};

int run_bench(const BenchOptions& opt) {
  const BenchResult result =
      bench_prefix_entropies(opt.fast_sizes, opt.brute_sizes, opt.repeats, opt.seed);
  if (!opt.out_path.empty()) write_text(opt.out_path, bench_to_csv(result));
  nlohmann::json j{{"fast_slope", result.fast_slope},
                   {"brute_slope", result.brute_slope}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Distributional regression trees and forests"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads,
                 "Worker thread count (0: hardware default, or DISTREG_THREADS)");

  FitOptions fit;
  CLI::App* fit_cmd = app.add_subcommand("fit", "Train a forest on CSV data");
  fit_cmd->add_option("--data", fit.data_path, "Training CSV")->required();
  fit_cmd->add_option("--target", fit.target, "Target column name");
  fit_cmd->add_option("--criterion", fit.criterion,
                      "Split criterion: crps, pinball or squared_error");
  fit_cmd->add_option("--levels", fit.levels,
                      "Quantile levels for the pinball criterion (comma separated)")
      ->delimiter(',');
  fit_cmd->add_option("--trees", fit.n_trees, "Number of trees");
  fit_cmd->add_option("--subsample", fit.subsample, "Row fraction per tree");
  fit_cmd->add_option("--seed", fit.seed, "Random seed");
  fit_cmd->add_option("--max-depth", fit.max_depth, "Depth limit (-1: unlimited)");
  fit_cmd->add_option("--min-leaf", fit.min_leaf, "Minimum samples per leaf");
  fit_cmd->add_option("--min-split", fit.min_split, "Minimum samples to split");
  fit_cmd->add_flag("--no-loo", fit.no_loo, "Disable leave-one-out debiasing");
  fit_cmd->add_option("--out", fit.out_path, "Output model JSON")->required();

  PredictOptions predict;
  CLI::App* predict_cmd =
      app.add_subcommand("predict", "Predict quantiles for CSV rows");
  predict_cmd->add_option("--model", predict.model_path, "Model JSON")->required();
  predict_cmd->add_option("--data", predict.data_path, "Input CSV")->required();
  predict_cmd->add_option("--target", predict.target, "Target column name");
  predict_cmd->add_option("--levels", predict.levels, "Quantile levels")
      ->required()
      ->delimiter(',');
  predict_cmd->add_option("--out", predict.out_path, "Output CSV (default stdout)");

  EvalOptions eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate a model on CSV data");
  eval_cmd->add_option("--model", eval.model_path, "Model JSON")->required();
  eval_cmd->add_option("--data", eval.data_path, "Test CSV")->required();
  eval_cmd->add_option("--target", eval.target, "Target column name");
  eval_cmd->add_option("--grid-step", eval.grid_step, "Level grid step");
  eval_cmd->add_flag("--json", eval.json_only, "Print JSON only");

  CalibrateOptions calibrate;
  CLI::App* cal_cmd = app.add_subcommand(
      "conformal-calibrate", "Attach a conformal calibration to a model");
  cal_cmd->add_option("--model", calibrate.model_path, "Model JSON")->required();
  cal_cmd->add_option("--data", calibrate.data_path, "Calibration CSV")->required();
  cal_cmd->add_option("--target", calibrate.target, "Target column name");
  cal_cmd->add_option("--alpha", calibrate.alpha, "Miscoverage level");
  cal_cmd->add_option("--method", calibrate.method,
                      "Score type: distributional or cqr");
  cal_cmd->add_option("--group-tree", calibrate.group_tree_path,
                      "Tree model JSON whose top levels define calibration groups");
  cal_cmd->add_option("--group-depth", calibrate.group_depth,
                      "Partition depth within the group tree");
  cal_cmd->add_option("--out", calibrate.out_path, "Output model JSON")->required();

  IntervalOptions intervals;
  CLI::App* int_cmd = app.add_subcommand(
      "conformal-predict", "Predict calibrated intervals for CSV rows");
  int_cmd->add_option("--model", intervals.model_path, "Calibrated model JSON")
      ->required();
  int_cmd->add_option("--data", intervals.data_path, "Input CSV")->required();
  int_cmd->add_option("--target", intervals.target, "Target column name");
  int_cmd->add_option("--out", intervals.out_path, "Output CSV (default stdout)");

  SynthOptions synth;
  CLI::App* synth_cmd =
      app.add_subcommand("synth", "Generate a synthetic benchmark dataset");
  synth_cmd->add_option("--kind", synth.kind, "gamma or hetero");
  synth_cmd->add_option("--n", synth.n, "Number of rows");
  synth_cmd->add_option("--seed", synth.seed, "Random seed");
  synth_cmd->add_option("--out", synth.out_path, "Output CSV")->required();

  BenchOptions bench;
  CLI::App* bench_cmd = app.add_subcommand(
      "bench", "Time the streaming prefix-entropy scan against brute force");
  bench_cmd->add_option("--fast-sizes", bench.fast_sizes, "Sizes for the fast scan")
      ->delimiter(',');
  bench_cmd->add_option("--brute-sizes", bench.brute_sizes,
                        "Sizes for the brute-force baseline")
      ->delimiter(',');
  bench_cmd->add_option("--repeats", bench.repeats, "Timing repeats (median)");
  bench_cmd->add_option("--seed", bench.seed, "Random seed");
  bench_cmd->add_option("--out", bench.out_path, "Timing CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (threads != 0) set_max_threads(threads);
    if (fit_cmd->parsed()) return run_fit(fit);
    if (predict_cmd->parsed()) return run_predict(predict);
    if (eval_cmd->parsed()) return run_eval(eval);
    if (cal_cmd->parsed()) return run_conformal_calibrate(calibrate);
    if (int_cmd->parsed()) return run_conformal_predict(intervals);
    if (synth_cmd->parsed()) return run_synth(synth);
    if (bench_cmd->parsed()) return run_bench(bench);
    std::cerr << "error: no subcommand selected\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace distreg
