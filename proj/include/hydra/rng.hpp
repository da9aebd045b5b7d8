#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace hydra {

// Standard-normal sampler with a fully pinned-down algorithm: mt19937_64
// (bit-exact sequence mandated by the C++ standard) feeding the basic
// Box-Muller transform. std::normal_distribution is implementation-defined,
// which would make kernel banks irreproducible across toolchains.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : gen_(seed) {}

  // Uniform on (0, 1]: top 53 bits of the draw, shifted into [0,1), flipped.
  double uniform_open0() {
    return 1.0 - static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }
  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_open0();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace hydra
