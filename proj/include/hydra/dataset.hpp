#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hydra/errors.hpp"

namespace hydra {

// Fixed-length labeled (or fully unlabeled) time series. Values are stored
// row-major, n x length, at 64-bit precision. Immutable after load; safe to
// share across transform workers.
struct TimeSeriesDataset {
  std::string name;
  std::size_t length = 0;                 // L, timepoints per series
  std::vector<double> values;             // n * length, row-major
  std::vector<int> labels;                // dense class indices; empty if unlabeled
  std::vector<std::string> class_names;   // original label strings, sorted

  std::size_t n() const { return length == 0 ? 0 : values.size() / length; }
  bool labeled() const { return !labels.empty(); }
  std::size_t n_classes() const { return class_names.size(); }

  std::span<const double> series(std::size_t i) const {
    return {values.data() + i * length, length};
  }
  std::span<double> series(std::size_t i) {
    return {values.data() + i * length, length};
  }
};

enum class DatasetFormat { auto_detect, ts, tsv };

// `.ts`: lines starting '@' or '#' are metadata/comments; data lines are
// "v1,v2,...,vL:label". TSV: "label\tv1\t...\tvL". A label of "?" marks the
// row unlabeled; mixing labeled and unlabeled rows in one file is an error.
TimeSeriesDataset load_dataset(const std::string& path,
                               DatasetFormat format = DatasetFormat::auto_detect);

// Writer for the same two formats (used by round-trip tests and exports).
void save_dataset(const TimeSeriesDataset& data, const std::string& path,
                  DatasetFormat format = DatasetFormat::auto_detect);

// Opt-in per-series z-normalization: (x - mean) / max(stdev, 1e-8).
void normalize_per_series(TimeSeriesDataset& data);

struct ResamplePlan {
  std::uint64_t seed = 0;
  int resample_id = 0;
  // Zero means "take from the inputs"; otherwise validated against them.
  std::size_t train_size = 0;
  std::size_t test_size = 0;
};

// Stratified reshuffle of the pooled train/test rows back into splits of the
// original sizes. resample_id = 0 returns the inputs unchanged. Per-class
// train counts are preserved exactly; deterministic in (seed, resample_id).
std::pair<TimeSeriesDataset, TimeSeriesDataset> stratified_resample(
    const TimeSeriesDataset& train, const TimeSeriesDataset& test,
    const ResamplePlan& plan);

}  // namespace hydra
