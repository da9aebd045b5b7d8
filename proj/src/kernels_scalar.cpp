#include <cmath>

#include "hydra/kernels.hpp"

namespace hydra::kernels {

namespace {

// Explicit fma chain in tap order; the AVX2 variant uses the same chain per
// lane, so both backends produce bitwise-identical output.
void conv_dilated_scalar(const double* xpad, std::size_t out_len, const double* w,
                         std::size_t dilation, double* y) {
  for (std::size_t t = 0; t < out_len; ++t) {
    const double* x = xpad + t;
    double acc = 0.0;
    for (std::size_t j = 0; j < 9; ++j) acc = std::fma(w[j], x[j * dilation], acc);
    y[t] = acc;
  }
}

void argminmax_update_scalar(const double* y, std::size_t len, std::uint64_t kernel_index,
                             double* max_val, std::uint64_t* max_idx,
                             double* min_val, std::uint64_t* min_idx) {
  for (std::size_t t = 0; t < len; ++t) {
    const double v = y[t];
    if (v > max_val[t]) {
      max_val[t] = v;
      max_idx[t] = kernel_index;
    }
    if (v < min_val[t]) {
      min_val[t] = v;
      min_idx[t] = kernel_index;
    }
  }
}

}  // namespace

const Backend& scalar_backend() {
  static const Backend backend{"scalar", conv_dilated_scalar, argminmax_update_scalar};
  return backend;
}

}  // namespace hydra::kernels
