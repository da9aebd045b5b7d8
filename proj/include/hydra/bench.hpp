#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hydra/config.hpp"
#include "hydra/serialize.hpp"

namespace hydra {

struct DatasetSpec {
  std::string name;
  std::string train_path;
  std::string test_path;
};

// One dataset per line: either "train_path<TAB>test_path[<TAB>name]" or a
// directory containing <dirname>_TRAIN.<ext> / <dirname>_TEST.<ext> with
// ext in {ts, tsv}. Lines starting '#' and blank lines are skipped.
std::vector<DatasetSpec> read_dataset_list(const std::string& path);

struct ExperimentResult {
  std::string dataset;
  int resample_id = 0;
  std::string variant;
  double accuracy = 0.0;
  double transform_seconds = 0.0;
  double train_seconds = 0.0;
  double test_seconds = 0.0;
};

struct ExperimentFailure {
  std::string dataset;
  int resample_id = 0;
  std::string variant;
  std::string reason;
};

struct Variant {
  std::string name;
  HydraConfig config;
};

struct RunOptions {
  std::uint64_t resample_seed = 0;
  bool normalize_input = false;
  std::string classifier = "auto";  // auto | ridge | logistic
  int threads = 1;                  // workers across (dataset, resample, variant) keys
  // Existing rows in results_csv are kept and their keys skipped; new rows
  // are appended through a single serialized writer.
  std::string results_csv;
  RunManifest manifest;
};

struct RunOutcome {
  std::vector<ExperimentResult> results;   // existing + newly computed rows
  std::vector<ExperimentFailure> failures; // per-key failures, recorded not fatal
};

// One result per (dataset, resample, variant); bank seed comes from each
// variant's config. Deterministic given seeds; resumable via results_csv.
RunOutcome run_experiment(const std::vector<DatasetSpec>& datasets,
                          const std::vector<Variant>& variants, int resamples,
                          const RunOptions& options);

// Sensitivity protocol: original split only, `runs` bank seeds (0..runs-1)
// per variant; the per-cell value reported downstream is the mean over runs.
// Each run is recorded as a row with resample_id = run index.
RunOutcome run_sensitivity(const std::vector<DatasetSpec>& datasets,
                           const std::vector<Variant>& variants, int runs,
                           const RunOptions& options);

// Sensitivity axes. Each returns named variants derived from `base`;
// full_grid composes the requested axes full-factorially.
std::vector<Variant> kg_lattice(const HydraConfig& base);
std::vector<Variant> counting_variants(const HydraConfig& base);
std::vector<Variant> clip_variants(const HydraConfig& base);
std::vector<Variant> diff_variants(const HydraConfig& base);
std::vector<Variant> full_grid(const HydraConfig& base, const std::vector<std::string>& axes);

// Explicit k x g cells, e.g. "8x64,512x1". A cell whose g is odd runs with
// use_diff disabled (noted on stderr); the variant name records it.
std::vector<Variant> explicit_cells(const HydraConfig& base, const std::string& spec);

struct RankTable {
  std::vector<std::string> variants;
  std::vector<std::string> datasets;
  std::vector<double> ranks;      // variants x datasets, row-major; ties averaged
  std::vector<double> mean_rank;  // per variant
};

// Rank 1 = most accurate, ties get the average rank. Datasets missing any
// variant are dropped (inner join) with a warning on stderr; an empty
// intersection throws NoCommonDatasets. Accuracies are averaged over
// resamples/runs per (variant, dataset) first.
RankTable mean_rank(const std::vector<ExperimentResult>& results);

void write_results_csv(const std::string& path, const RunManifest& manifest,
                       const std::vector<ExperimentResult>& results);
std::vector<ExperimentResult> read_results_csv(const std::string& path);
void write_rank_csv(const std::string& path, const RunManifest& manifest,
                    const RankTable& table);

}  // namespace hydra
