#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "hydra/config.hpp"

namespace hydra {

// All powers of two 2^e whose dilated kernel span (9-1)*2^e + 1 fits in
// input_len. Never empty for input_len >= 9; throws SeriesTooShort below that.
std::vector<int> compute_dilations(int input_len);

// (w - mean(w)) / sum|w - mean(w)|. Throws DegenerateKernel when the centered
// weights are all zero.
std::array<double, 9> normalize_weights(const std::array<double, 9>& w);

// Normalized random kernels, [dilation][group][kernel][tap] row-major.
// Groups at or above diff_group_cutoff operate on the first-order difference.
struct KernelBank {
  int input_len = 0;
  std::uint64_t seed = 0;
  int g = 0;
  int k = 0;
  std::vector<int> dilations;
  std::vector<int> paddings;  // 4 * dilation each
  int diff_group_cutoff = 0;
  std::vector<double> weights;  // d * g * k * 9

  int n_dilations() const { return static_cast<int>(dilations.size()); }
  std::size_t kernels_per_dilation() const {
    return static_cast<std::size_t>(g) * static_cast<std::size_t>(k);
  }
  const double* kernel(int d_idx, int group, int kern) const {
    return weights.data() +
           ((static_cast<std::size_t>(d_idx) * g + group) * k + kern) * 9;
  }

  bool operator==(const KernelBank&) const = default;
};

// Seeded, deterministic bank generation: same (config, input_len) gives a
// bitwise-identical bank. Weights are drawn N(0,1) per tap, dilation-major,
// then normalized; degenerate draws are resampled.
KernelBank generate_bank(const HydraConfig& config, int input_len);

}  // namespace hydra
