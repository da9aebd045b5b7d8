#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "hydra/bench.hpp"
#include "hydra/dataset.hpp"
#include "hydra/kernels.hpp"
#include "hydra/model.hpp"
#include "hydra/serialize.hpp"
#include "hydra/version.hpp"

namespace {

using hydra::Error;
using hydra::HydraConfig;
using nlohmann::json;

struct CommonFlags {
  HydraConfig config;
  bool no_diff = false;
  std::string count_max = "soft";
  std::string count_min = "hard";
  std::string config_file;
  std::string backend = "auto";
  int threads = 1;
};

// Paper defaults are spelled out in the help text so a bare invocation
// reproduces the published configuration.
void add_config_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--k", f.config.k, "Kernels per group (default 8)");
  cmd->add_option("--g", f.config.g, "Groups per dilation (default 64)");
  cmd->add_option("--seed", f.config.seed, "Kernel bank seed (default 42)");
  cmd->add_option("--count-max", f.count_max,
                  "Counting for the max response: off|hard|soft|both (default soft)");
  cmd->add_option("--count-min", f.count_min,
                  "Counting for the min response: off|hard|soft|both (default hard)");
  cmd->add_flag("--clip", f.config.clip,
                "Count only positive max / negative min responses (default off)");
  cmd->add_flag("--no-diff", f.no_diff,
                "Disable the first-order-difference half of the groups");
  cmd->add_option("--batch-size", f.config.batch_size,
                  "Series per transform batch (default 256)");
  cmd->add_option("--config", f.config_file,
                  "JSON config file; explicit flags override its values");
  cmd->add_option("--threads", f.threads, "Worker threads (default 1)");
  cmd->add_option("--backend", f.backend, "Compute backend: auto|scalar|avx2");
}

// Values from --config become defaults; flags the user actually passed win.
void apply_config_file(const CLI::App* cmd, CommonFlags& f) {
  if (f.config_file.empty()) return;
  std::ifstream in(f.config_file);
  if (!in) throw Error(hydra::Errc::io_error, "cannot open config '" + f.config_file + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(hydra::Errc::config_error, "config file: " + std::string(e.what()));
  }
  auto unset = [&](const char* flag) { return cmd->count(flag) == 0; };
  try {
    if (j.contains("k") && unset("--k")) f.config.k = j["k"].get<int>();
    if (j.contains("g") && unset("--g")) f.config.g = j["g"].get<int>();
    if (j.contains("seed") && unset("--seed")) f.config.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("count_max") && unset("--count-max"))
      f.count_max = j["count_max"].get<std::string>();
    if (j.contains("count_min") && unset("--count-min"))
      f.count_min = j["count_min"].get<std::string>();
    if (j.contains("clip") && unset("--clip")) f.config.clip = j["clip"].get<bool>();
    if (j.contains("use_diff") && unset("--no-diff"))
      f.no_diff = !j["use_diff"].get<bool>();
    if (j.contains("batch_size") && unset("--batch-size"))
      f.config.batch_size = j["batch_size"].get<int>();
  } catch (const json::exception& e) {
    throw Error(hydra::Errc::config_error, "config file: " + std::string(e.what()));
  }
}

HydraConfig resolve_config(const CLI::App* cmd, CommonFlags& f) {
  apply_config_file(cmd, f);
  f.config.count_max = hydra::parse_count_mode(f.count_max);
  f.config.count_min = hydra::parse_count_mode(f.count_min);
  f.config.use_diff = !f.no_diff;
  hydra::kernels::set_active_backend(f.backend);
  for (const std::string& w : f.config.validate()) std::cerr << "warning: " << w << "\n";
  return f.config;
}

hydra::RunManifest make_manifest(const std::string& command, const HydraConfig& config,
                                 const CommonFlags& f) {
  hydra::RunManifest m;
  m.version = HYDRA_VERSION_STRING;
  m.command = command;
  m.params["config"] = json{{"k", config.k},
                            {"g", config.g},
                            {"seed", config.seed},
                            {"count_max", count_mode_name(config.count_max)},
                            {"count_min", count_mode_name(config.count_min)},
                            {"clip", config.clip},
                            {"use_diff", config.use_diff},
                            {"batch_size", config.batch_size}}
                           .dump();
  m.params["backend"] = hydra::kernels::active_backend().name;
  m.params["threads"] = std::to_string(f.threads);
  return m;
}

int run_fit(const std::string& train_path, const std::string& model_out, const CLI::App* cmd,
            CommonFlags& flags, hydra::FitOptions& options, bool normalize_input) {
  HydraConfig config = resolve_config(cmd, flags);
  options.normalize_input = normalize_input;
  options.threads = flags.threads;

  hydra::TimeSeriesDataset train = hydra::load_dataset(train_path);
  hydra::FitReport report;
  hydra::Model model = hydra::fit_model(train, config, options, &report);

  hydra::RunManifest manifest = make_manifest("fit", config, flags);
  manifest.params["train"] = train_path;
  manifest.params["classifier"] = model.is_ridge() ? "ridge" : "logistic";
  manifest.params["normalize_input"] = normalize_input ? "true" : "false";
  hydra::save_model(model, model_out, manifest);

  std::printf("train_accuracy %.6f\n", report.train_accuracy);
  std::printf("transform_s %.3f\ntrain_s %.3f\n", report.transform_seconds,
              report.train_seconds);
  std::printf("model %s\n", model_out.c_str());
  return 0;
}

int run_predict(const std::string& model_path, const std::string& data_path,
                const std::string& out_csv, CommonFlags& flags) {
  hydra::kernels::set_active_backend(flags.backend);
  hydra::Model model = hydra::load_model(model_path);
  hydra::TimeSeriesDataset data = hydra::load_dataset(data_path);

  auto scores = hydra::model_predict_scores(model, data, flags.threads);
  const int C = model.n_classes();
  std::vector<int> predicted(data.n());
  for (std::size_t i = 0; i < data.n(); ++i) {
    const double* row = scores.data() + i * C;
    int best = 0;
    for (int c = 1; c < C; ++c)
      if (row[c] > row[best]) best = c;
    predicted[i] = best;
  }

  hydra::RunManifest manifest = make_manifest("predict", model.config, flags);
  manifest.params["model"] = model_path;
  manifest.params["data"] = data_path;
  hydra::save_predictions_csv(out_csv, manifest, predicted, scores, model.class_names);

  if (data.labeled()) {
    // Compare on original label strings so the file's own class order is moot.
    std::size_t correct = 0;
    for (std::size_t i = 0; i < data.n(); ++i)
      if (model.class_names[predicted[i]] == data.class_names[data.labels[i]]) ++correct;
    std::printf("accuracy %.6f\n", static_cast<double>(correct) / data.n());
  }
  std::printf("predictions %s\n", out_csv.c_str());
  return 0;
}

int run_transform(const std::string& data_path, const std::string& bank_path,
                  const std::string& out_path, const std::string& format,
                  const std::string& save_bank_path, const CLI::App* cmd, CommonFlags& flags) {
  HydraConfig config = resolve_config(cmd, flags);
  hydra::TimeSeriesDataset data = hydra::load_dataset(data_path);

  hydra::KernelBank bank;
  if (!bank_path.empty()) {
    bank = hydra::load_bank(bank_path);
    if (bank.g != config.g || bank.k != config.k)
      std::cerr << "note: using geometry from the bank file (k=" << bank.k << ", g=" << bank.g
                << ")\n";
    config.k = bank.k;
    config.g = bank.g;
    config.use_diff = bank.diff_group_cutoff < bank.g;
    config.seed = bank.seed;
  } else {
    bank = hydra::generate_bank(config, static_cast<int>(data.length));
  }

  hydra::FeatureMatrix features = hydra::transform(data, bank, config, flags.threads);
  hydra::RunManifest manifest = make_manifest("transform", config, flags);
  manifest.params["data"] = data_path;
  if (!bank_path.empty()) manifest.params["bank"] = bank_path;

  if (format == "csv")
    hydra::save_features_csv(features, out_path, manifest);
  else if (format == "json")
    hydra::save_features_json(features, out_path, manifest);
  else
    throw Error(hydra::Errc::config_error, "unknown feature format '" + format + "'");
  if (!save_bank_path.empty()) hydra::save_bank(bank, save_bank_path, manifest);

  std::printf("features %s (%zu x %zu)\n", out_path.c_str(), features.rows, features.cols);
  return 0;
}

int run_benchmark(const std::string& list_path, const std::string& out_csv, int resamples,
                  std::uint64_t resample_seed, const std::string& classifier,
                  bool normalize_input, const CLI::App* cmd, CommonFlags& flags) {
  HydraConfig config = resolve_config(cmd, flags);
  auto datasets = hydra::read_dataset_list(list_path);

  hydra::RunOptions options;
  options.resample_seed = resample_seed;
  options.normalize_input = normalize_input;
  options.classifier = classifier;
  options.threads = flags.threads;
  options.results_csv = out_csv;
  options.manifest = make_manifest("benchmark", config, flags);
  options.manifest.params["datasets"] = list_path;
  options.manifest.params["resamples"] = std::to_string(resamples);
  options.manifest.params["resample_seed"] = std::to_string(resample_seed);

  std::vector<hydra::Variant> variants{{config.variant_name(), config}};
  auto outcome = hydra::run_experiment(datasets, variants, resamples, options);
  std::printf("results %s (%zu rows, %zu failures)\n", out_csv.c_str(),
              outcome.results.size(), outcome.failures.size());
  return outcome.failures.empty() ? 0 : 2;
}

int run_sensitivity_cmd(const std::string& list_path, const std::string& out_csv,
                        const std::string& ranks_csv, const std::string& axes_arg,
                        const std::string& cells_arg, int runs, const std::string& classifier,
                        const CLI::App* cmd, CommonFlags& flags) {
  HydraConfig config = resolve_config(cmd, flags);
  auto datasets = hydra::read_dataset_list(list_path);

  std::vector<hydra::Variant> variants;
  if (!cells_arg.empty()) {
    variants = hydra::explicit_cells(config, cells_arg);
  } else {
    std::vector<std::string> axes;
    std::string token;
    std::istringstream ss(axes_arg);
    while (std::getline(ss, token, ','))
      if (!token.empty()) axes.push_back(token);
    variants = hydra::full_grid(config, axes);
  }

  hydra::RunOptions options;
  options.classifier = classifier;
  options.threads = flags.threads;
  options.results_csv = out_csv;
  options.manifest = make_manifest("sensitivity", config, flags);
  options.manifest.params["datasets"] = list_path;
  options.manifest.params[cells_arg.empty() ? "axes" : "cells"] =
      cells_arg.empty() ? axes_arg : cells_arg;
  options.manifest.params["runs"] = std::to_string(runs);

  auto outcome = hydra::run_sensitivity(datasets, variants, runs, options);
  hydra::RankTable table = hydra::mean_rank(outcome.results);
  if (!ranks_csv.empty()) hydra::write_rank_csv(ranks_csv, options.manifest, table);

  for (std::size_t v = 0; v < table.variants.size(); ++v)
    std::printf("%-48s mean_rank %.3f\n", table.variants[v].c_str(), table.mean_rank[v]);
  return outcome.failures.empty() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HYDRA time series classification: grouped competing random convolutional "
               "kernels with count features and linear classifiers"};
  app.set_version_flag("--version", HYDRA_VERSION_STRING);
  app.require_subcommand(1);

  // fit
  auto* fit = app.add_subcommand("fit", "Train a model and write it to one model file");
  CommonFlags fit_flags;
  std::string fit_train, fit_model_out;
  bool fit_normalize = false;
  hydra::FitOptions fit_options;
  fit->add_option("--train", fit_train, "Training dataset (.ts or .tsv)")->required();
  fit->add_option("--model", fit_model_out, "Output model file")->required();
  add_config_flags(fit, fit_flags);
  fit->add_option("--classifier", fit_options.classifier,
                  "auto|ridge|logistic (auto: ridge up to 10000 training examples)");
  fit->add_flag("--normalize-input", fit_normalize, "Per-series z-normalization at load");
  fit->add_option("--validation-size", fit_options.protocol.validation_size,
                  "Logistic: validation examples (default 2048)");
  fit->add_option("--minibatch", fit_options.protocol.minibatch,
                  "Logistic: minibatch size (default 256)");
  fit->add_option("--lr", fit_options.protocol.lr,
                  "Logistic: initial learning rate (default 1e-4)");
  fit->add_option("--lr-patience", fit_options.protocol.lr_patience,
                  "Logistic: updates without improvement before halving (default 50)");
  fit->add_option("--stop-patience", fit_options.protocol.stop_patience,
                  "Logistic: updates without improvement before stopping (default 100)");
  fit->add_option("--max-epochs", fit_options.protocol.max_epochs,
                  "Logistic: epoch cap (default 100)");

  // predict
  auto* predict = app.add_subcommand("predict", "Predict with a saved model; writes a CSV");
  CommonFlags predict_flags;
  std::string predict_model, predict_data, predict_out;
  predict->add_option("--model", predict_model, "Model file from fit")->required();
  predict->add_option("--data", predict_data, "Dataset to classify")->required();
  predict->add_option("--out", predict_out, "Predictions CSV")->required();
  predict->add_option("--threads", predict_flags.threads, "Worker threads (default 1)");
  predict->add_option("--backend", predict_flags.backend, "Compute backend: auto|scalar|avx2");

  // transform
  auto* trans = app.add_subcommand("transform", "Write the raw count features for a dataset");
  CommonFlags trans_flags;
  std::string trans_data, trans_bank, trans_out, trans_format = "csv", trans_save_bank;
  trans->add_option("--data", trans_data, "Dataset to transform")->required();
  trans->add_option("--out", trans_out, "Output features file")->required();
  trans->add_option("--bank", trans_bank, "Existing bank file (otherwise generated from --seed)");
  trans->add_option("--format", trans_format, "Feature file format: csv|json (default csv)");
  trans->add_option("--save-bank", trans_save_bank, "Also write the generated bank here");
  add_config_flags(trans, trans_flags);

  // benchmark
  auto* bench = app.add_subcommand("benchmark",
                                   "Accuracy over stratified resamples of listed datasets");
  CommonFlags bench_flags;
  std::string bench_list, bench_out, bench_classifier = "auto";
  int bench_resamples = 30;
  std::uint64_t bench_resample_seed = 0;
  bool bench_normalize = false;
  bench->add_option("--datasets", bench_list, "Dataset list file")->required();
  bench->add_option("--out", bench_out, "Results CSV (appended to when resuming)")->required();
  bench->add_option("--resamples", bench_resamples, "Resamples per dataset (default 30)");
  bench->add_option("--resample-seed", bench_resample_seed, "Resample shuffle seed (default 0)");
  bench->add_option("--classifier", bench_classifier, "auto|ridge|logistic");
  bench->add_flag("--normalize-input", bench_normalize, "Per-series z-normalization at load");
  add_config_flags(bench, bench_flags);

  // sensitivity
  auto* sens = app.add_subcommand("sensitivity",
                                  "Hyperparameter grids on original splits, ranked");
  CommonFlags sens_flags;
  std::string sens_list, sens_out, sens_ranks, sens_axes = "kg", sens_cells,
      sens_classifier = "auto";
  int sens_runs = 10;
  sens->add_option("--datasets", sens_list, "Dataset list file")->required();
  sens->add_option("--out", sens_out, "Results CSV (appended to when resuming)")->required();
  sens->add_option("--ranks", sens_ranks, "Rank table CSV");
  sens->add_option("--axes", sens_axes, "Comma list of kg|counting|clip|diff (default kg)");
  sens->add_option("--cells", sens_cells,
                   "Explicit k x g cells instead of --axes, e.g. 8x64,512x1");
  sens->add_option("--runs", sens_runs, "Bank seeds per cell, 0..runs-1 (default 10)");
  sens->add_option("--classifier", sens_classifier, "auto|ridge|logistic");
  add_config_flags(sens, sens_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 3;
  }

  try {
    if (*fit) return run_fit(fit_train, fit_model_out, fit, fit_flags, fit_options, fit_normalize);
    if (*predict) return run_predict(predict_model, predict_data, predict_out, predict_flags);
    if (*trans)
      return run_transform(trans_data, trans_bank, trans_out, trans_format, trans_save_bank,
                           trans, trans_flags);
    if (*bench)
      return run_benchmark(bench_list, bench_out, bench_resamples, bench_resample_seed,
                           bench_classifier, bench_normalize, bench, bench_flags);
    if (*sens)
      return run_sensitivity_cmd(sens_list, sens_out, sens_ranks, sens_axes, sens_cells,
                                 sens_runs, sens_classifier, sens, sens_flags);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.is_config_error() ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
