#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hydra/config.hpp"
#include "hydra/dataset.hpp"
#include "hydra/kernel_bank.hpp"

namespace hydra {

// Canonical feature ordering: dilation-major, then group, then counting
// channel, then kernel index. Channels are max before min, soft before hard
// within a pair; tags are "smax", "hmax", "smin", "hmin".
struct FeatureLayout {
  int g = 0;
  int k = 0;
  std::vector<int> dilations;
  std::vector<std::string> channel_tags;

  static FeatureLayout make(const HydraConfig& config, const KernelBank& bank);

  int channels() const { return static_cast<int>(channel_tags.size()); }
  std::size_t n_features() const {
    return dilations.size() * static_cast<std::size_t>(g) * channels() * k;
  }
  std::size_t index(int d_idx, int group, int channel, int kern) const {
    return ((static_cast<std::size_t>(d_idx) * g + group) * channels() + channel) * k + kern;
  }
  // "d{dilation}_g{group}_{tag}_{kernel}"
  std::string feature_name(std::size_t f) const;

  bool operator==(const FeatureLayout&) const = default;
};

struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;  // rows * cols, row-major
  FeatureLayout layout;

  double* row(std::size_t i) { return values.data() + i * cols; }
  const double* row(std::size_t i) const { return values.data() + i * cols; }
};

// y[t] = x[t+1] - x[t]; throws SeriesTooShort for length < 2.
std::vector<double> first_difference(std::span<const double> x);

// Dilated 9-tap correlation with centered zero padding; output length equals
// the input length. Runs on the active compute backend.
std::vector<double> convolve_dilated(std::span<const double> x,
                                     std::span<const double, 9> w, int dilation);

// Per-timepoint competition counting for one group at one dilation.
// `responses` is k rows of `len` values. Output is channels-major, k wide,
// in the canonical channel order for `config`.
std::vector<double> count_group(std::span<const double> responses, std::size_t k,
                                std::size_t len, const HydraConfig& config);

// The full transform. Series are processed in batches of config.batch_size
// and may be split across n_threads workers; the result is bitwise-identical
// for any batch size and thread count.
FeatureMatrix transform(const TimeSeriesDataset& data, const KernelBank& bank,
                        const HydraConfig& config, int n_threads = 1);

}  // namespace hydra
