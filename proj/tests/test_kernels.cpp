#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "hydra/kernel_bank.hpp"
#include "hydra/kernels.hpp"
#include "hydra/rng.hpp"
#include "hydra/transform.hpp"
#include "oracle.hpp"

using namespace hydra;

TEST_SUITE_BEGIN("kernels");

namespace {

std::vector<double> padded(const std::vector<double>& x, std::size_t dilation) {
  std::vector<double> xpad(x.size() + 8 * dilation, 0.0);
  std::copy(x.begin(), x.end(), xpad.begin() + 4 * dilation);
  return xpad;
}

}  // namespace

TEST_CASE("scalar and avx2 backends agree bitwise") {
  const kernels::Backend* avx2 = kernels::avx2_backend();
  if (!avx2) {
    MESSAGE("avx2 not available on this CPU; equivalence checked elsewhere");
    return;
  }
  const kernels::Backend& scalar = kernels::scalar_backend();

  NormalSampler rng(77);
  for (std::size_t len : {1u, 3u, 4u, 7u, 16u, 129u, 300u}) {
    for (std::size_t dilation : {1u, 2u, 8u}) {
      std::vector<double> x(len);
      for (double& v : x) v = rng.next();
      std::array<double, 9> w;
      for (double& v : w) v = rng.next();
      auto xpad = padded(x, dilation);

      std::vector<double> ys(len), yv(len);
      scalar.conv_dilated(xpad.data(), len, w.data(), dilation, ys.data());
      avx2->conv_dilated(xpad.data(), len, w.data(), dilation, yv.data());
      CHECK(ys == yv);

      std::vector<double> max_s(len, -std::numeric_limits<double>::infinity());
      std::vector<double> min_s(len, std::numeric_limits<double>::infinity());
      std::vector<std::uint64_t> maxi_s(len, 0), mini_s(len, 0);
      auto max_v = max_s;
      auto min_v = min_s;
      auto maxi_v = maxi_s;
      auto mini_v = mini_s;
      for (std::uint64_t kern = 0; kern < 5; ++kern) {
        std::vector<double> y(len);
        for (double& v : y) v = rng.next();
        scalar.argminmax_update(y.data(), len, kern, max_s.data(), maxi_s.data(),
                                min_s.data(), mini_s.data());
        avx2->argminmax_update(y.data(), len, kern, max_v.data(), maxi_v.data(),
                               min_v.data(), mini_v.data());
      }
      CHECK(max_s == max_v);
      CHECK(min_s == min_v);
      CHECK(maxi_s == maxi_v);
      CHECK(mini_s == mini_v);
    }
  }
}

TEST_CASE("argminmax tie-breaking keeps the lowest kernel index") {
  for (const auto* backend : {&kernels::scalar_backend(), kernels::avx2_backend()}) {
    if (!backend) continue;
    const std::size_t len = 9;
    std::vector<double> y(len, 1.0);
    std::vector<double> max_val(len, -std::numeric_limits<double>::infinity());
    std::vector<double> min_val(len, std::numeric_limits<double>::infinity());
    std::vector<std::uint64_t> max_idx(len, 0), min_idx(len, 0);
    backend->argminmax_update(y.data(), len, 0, max_val.data(), max_idx.data(),
                              min_val.data(), min_idx.data());
    backend->argminmax_update(y.data(), len, 1, max_val.data(), max_idx.data(),
                              min_val.data(), min_idx.data());
    for (std::size_t t = 0; t < len; ++t) {
      CHECK(max_idx[t] == 0);
      CHECK(min_idx[t] == 0);
    }
  }
}

TEST_CASE("convolution basics") {
  NormalSampler rng(5);
  std::array<double, 9> raw;
  for (double& v : raw) v = rng.next();
  const auto w = normalize_weights(raw);

  SUBCASE("zero input gives zero output") {
    std::vector<double> x(64, 0.0);
    auto y = convolve_dilated(x, std::span<const double, 9>(w), 2);
    for (double v : y) CHECK(v == 0.0);
  }
  SUBCASE("constant input: interior points vanish (weights sum to zero)") {
    std::vector<double> x(64, 1.0);
    for (int dilation : {1, 2, 4}) {
      auto y = convolve_dilated(x, std::span<const double, 9>(w), dilation);
      REQUIRE(y.size() == x.size());
      for (std::size_t t = 4 * dilation; t + 4 * dilation < x.size(); ++t)
        CHECK(std::abs(y[t]) < 1e-12);
    }
  }
  SUBCASE("matches the explicit-loop oracle") {
    for (int dilation : {1, 2, 4}) {
      std::vector<double> x(100);
      for (double& v : x) v = rng.next();
      auto y = convolve_dilated(x, std::span<const double, 9>(w), dilation);
      for (std::size_t t = 0; t < x.size(); ++t) {
        const double expect = oracle::conv_at(x, w.data(), static_cast<long>(t), dilation);
        if (expect == 0.0)
          CHECK(std::abs(y[t]) < 1e-12);
        else
          CHECK(y[t] == doctest::Approx(expect).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("backend selection") {
  auto names = kernels::available_backends();
  CHECK(!names.empty());
  CHECK(names[0] == "scalar");
  kernels::set_active_backend("scalar");
  CHECK(std::string(kernels::active_backend().name) == "scalar");
  CHECK_THROWS_AS(kernels::set_active_backend("neon"), Error);
  kernels::set_active_backend("auto");
}

TEST_SUITE_END();
