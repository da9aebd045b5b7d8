#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hydra::kernels {

// Dilated 9-tap cross-correlation over a pre-padded input:
//   y[t] = sum_j w[j] * xpad[t + j*dilation],  t in [0, out_len)
// The caller supplies xpad with 4*dilation zeros on each side of the series,
// so xpad holds at least out_len + 8*dilation elements. Accumulation is a
// single fma chain in tap order; every backend produces bitwise-identical y.
using ConvFn = void (*)(const double* xpad, std::size_t out_len, const double* w,
                        std::size_t dilation, double* y);

// Running per-timepoint competition update for one kernel's response row:
// strictly greater (smaller) responses take over max (min) value and index,
// so iterating kernels in ascending order breaks ties toward the lowest index.
using ArgMinMaxFn = void (*)(const double* y, std::size_t len, std::uint64_t kernel_index,
                             double* max_val, std::uint64_t* max_idx,
                             double* min_val, std::uint64_t* min_idx);

struct Backend {
  const char* name;
  ConvFn conv_dilated;
  ArgMinMaxFn argminmax_update;
};

const Backend& scalar_backend();

// nullptr when the build or the running CPU lacks AVX2+FMA.
const Backend* avx2_backend();

std::vector<std::string> available_backends();

// Active backend, resolved once: HYDRA_BACKEND env var if set, else the best
// available. set_active_backend("auto"|"scalar"|"avx2") overrides; throws
// Error(config_error) on unknown or unavailable names.
const Backend& active_backend();
void set_active_backend(std::string_view name);

}  // namespace hydra::kernels
