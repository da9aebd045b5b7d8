// AVX2+FMA variants of the compute kernels. Compiled with -mavx2 -mfma on
// x86-64 only; callers go through avx2_backend(), which returns nullptr when
// the running CPU lacks the extensions.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

#include "hydra/kernels.hpp"

namespace hydra::kernels {

namespace {

void conv_dilated_avx2(const double* xpad, std::size_t out_len, const double* w,
                       std::size_t dilation, double* y) {
  __m256d wv[9];
  for (int j = 0; j < 9; ++j) wv[j] = _mm256_set1_pd(w[j]);

  std::size_t t = 0;
  for (; t + 4 <= out_len; t += 4) {
    const double* x = xpad + t;
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t j = 0; j < 9; ++j)
      acc = _mm256_fmadd_pd(wv[j], _mm256_loadu_pd(x + j * dilation), acc);
    _mm256_storeu_pd(y + t, acc);
  }
  for (; t < out_len; ++t) {
    const double* x = xpad + t;
    double acc = 0.0;
    for (std::size_t j = 0; j < 9; ++j) acc = std::fma(w[j], x[j * dilation], acc);
    y[t] = acc;
  }
}

// 64-bit winner indices so the compare mask from _mm256_cmp_pd blends both
// the values and the indices directly.
void argminmax_update_avx2(const double* y, std::size_t len, std::uint64_t kernel_index,
                           double* max_val, std::uint64_t* max_idx,
                           double* min_val, std::uint64_t* min_idx) {
  const __m256d ki = _mm256_castsi256_pd(_mm256_set1_epi64x(static_cast<long long>(kernel_index)));
  std::size_t t = 0;
  for (; t + 4 <= len; t += 4) {
    const __m256d v = _mm256_loadu_pd(y + t);

    const __m256d mv = _mm256_loadu_pd(max_val + t);
    const __m256d gt = _mm256_cmp_pd(v, mv, _CMP_GT_OQ);
    _mm256_storeu_pd(max_val + t, _mm256_blendv_pd(mv, v, gt));
    const __m256d mi = _mm256_castsi256_pd(
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(max_idx + t)));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(max_idx + t),
                        _mm256_castpd_si256(_mm256_blendv_pd(mi, ki, gt)));

    const __m256d nv = _mm256_loadu_pd(min_val + t);
    const __m256d lt = _mm256_cmp_pd(v, nv, _CMP_LT_OQ);
    _mm256_storeu_pd(min_val + t, _mm256_blendv_pd(nv, v, lt));
    const __m256d ni = _mm256_castsi256_pd(
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(min_idx + t)));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(min_idx + t),
                        _mm256_castpd_si256(_mm256_blendv_pd(ni, ki, lt)));
  }
  for (; t < len; ++t) {
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

const Backend* avx2_backend() {
  static const Backend backend{"avx2", conv_dilated_avx2, argminmax_update_avx2};
  static const bool supported =
      __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &backend : nullptr;
}

}  // namespace hydra::kernels

#else

#include "hydra/kernels.hpp"

namespace hydra::kernels {
const Backend* avx2_backend() { return nullptr; }
}  // namespace hydra::kernels

#endif
