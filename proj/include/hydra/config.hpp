#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hydra/errors.hpp"

namespace hydra {

// What to record when a kernel wins at a timepoint.
enum class CountMode { off, hard, soft, both };

std::string_view count_mode_name(CountMode m);
CountMode parse_count_mode(std::string_view s);  // throws Error(config_error)

struct HydraConfig {
  int k = 8;   // kernels per group
  int g = 64;  // groups per dilation
  static constexpr int kernel_len = 9;
  std::uint64_t seed = 42;
  CountMode count_max = CountMode::soft;
  CountMode count_min = CountMode::hard;
  bool clip = false;
  bool use_diff = true;
  int batch_size = 256;  // series per transform batch

  // Throws Error(config_error) on violations; returns non-fatal warnings
  // (k = 1 with both channels active is permitted but redundant).
  std::vector<std::string> validate() const;

  int max_channels() const {
    return count_max == CountMode::off ? 0 : (count_max == CountMode::both ? 2 : 1);
  }
  int min_channels() const {
    return count_min == CountMode::off ? 0 : (count_min == CountMode::both ? 2 : 1);
  }
  int channels() const { return max_channels() + min_channels(); }

  // Group index at or above which groups operate on the first difference.
  int diff_group_cutoff() const { return use_diff ? g / 2 : g; }

  // Short descriptor used as the variant key in benchmark outputs,
  // e.g. "k8_g64_max-soft_min-hard_diff".
  std::string variant_name() const;

  bool operator==(const HydraConfig&) const = default;
};

}  // namespace hydra
