#include "hydra/kernel_bank.hpp"

#include <cmath>

#include "hydra/rng.hpp"

namespace hydra {

std::vector<int> compute_dilations(int input_len) {
  if (input_len < 9)
    throw Error(Errc::series_too_short,
                "input length " + std::to_string(input_len) + " < 9 (minimum kernel span)");
  std::vector<int> dilations;
  // Effective span at dilation 2^e is 8*2^e + 1; keep it within the input.
  for (long long d = 1; 8 * d + 1 <= input_len; d *= 2)
    dilations.push_back(static_cast<int>(d));
  return dilations;
}

std::array<double, 9> normalize_weights(const std::array<double, 9>& w) {
  double mean = 0.0;
  for (double v : w) mean += v;
  mean /= 9.0;
  double abs_sum = 0.0;
  for (double v : w) abs_sum += std::abs(v - mean);
  if (abs_sum == 0.0)
    throw Error(Errc::degenerate_kernel, "all-equal weights normalize to zero");
  std::array<double, 9> out;
  for (int i = 0; i < 9; ++i) out[i] = (w[i] - mean) / abs_sum;
  return out;
}

KernelBank generate_bank(const HydraConfig& config, int input_len) {
  config.validate();

  KernelBank bank;
  bank.input_len = input_len;
  bank.seed = config.seed;
  bank.g = config.g;
  bank.k = config.k;
  bank.dilations = compute_dilations(input_len);
  bank.paddings.reserve(bank.dilations.size());
  for (int d : bank.dilations) bank.paddings.push_back(4 * d);
  bank.diff_group_cutoff = config.diff_group_cutoff();

  const std::size_t total = bank.dilations.size() * bank.kernels_per_dilation() * 9;
  bank.weights.reserve(total);

  NormalSampler rng(config.seed);
  std::array<double, 9> raw;
  for (std::size_t i = 0; i < total / 9; ++i) {
    for (;;) {
      for (double& v : raw) v = rng.next();
      // Degenerate draws have probability zero but would divide by zero.
      try {
        raw = normalize_weights(raw);
        break;
      } catch (const Error&) {
        continue;
      }
    }
    bank.weights.insert(bank.weights.end(), raw.begin(), raw.end());
  }
  return bank;
}

}  // namespace hydra
