#pragma once

// Deterministic synthetic dataset generators shared by tests and the
// acceptance suite. Five families with distinct class structure so that
// rank-based comparisons have something meaningful to average over.

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "hydra/dataset.hpp"

namespace hydra::synth {

inline constexpr double kPi = std::numbers::pi;

inline double unit(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}
inline double gauss(std::mt19937_64& g) {
  // Box-Muller, cosine branch only; test data does not need the spare.
  const double u1 = 1.0 - unit(g);
  const double u2 = unit(g);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

inline hydra::TimeSeriesDataset make(const std::string& name, std::size_t length,
                                     const std::vector<int>& labels,
                                     std::vector<double> values) {
  hydra::TimeSeriesDataset d;
  d.name = name;
  d.length = length;
  d.values = std::move(values);
  d.labels = labels;
  int max_label = 0;
  for (int l : labels) max_label = std::max(max_label, l);
  for (int c = 0; c <= max_label; ++c) d.class_names.push_back(std::to_string(c));
  return d;
}

// Class 0: sine + noise. Class 1: the same sine with a transient square pulse.
inline hydra::TimeSeriesDataset sine_pulse(std::size_t n, std::size_t length,
                                           std::uint64_t seed, double noise = 0.2) {
  std::mt19937_64 g(seed);
  std::vector<double> values;
  std::vector<int> labels;
  const std::size_t pulse_len = std::min<std::size_t>(12, length / 3);
  const std::size_t slack = length > pulse_len + 4 ? length - pulse_len - 4 : 1;
  for (std::size_t i = 0; i < n; ++i) {
    const int label = static_cast<int>(i % 2);
    const std::size_t pulse_at = 2 + g() % slack;
    for (std::size_t t = 0; t < length; ++t) {
      double v = std::sin(2.0 * kPi * 3.0 * t / length) + noise * gauss(g);
      if (label == 1 && t >= pulse_at && t < pulse_at + pulse_len) v += 1.0;
      values.push_back(v);
    }
    labels.push_back(label);
  }
  return make("sine_pulse", length, labels, std::move(values));
}

// Classes differ in dominant frequency, by well under an octave, under heavy
// noise. Frequencies are given in cycles per series.
inline hydra::TimeSeriesDataset freq_split(std::size_t n, std::size_t length,
                                           std::uint64_t seed, double base_freq = 18.0,
                                           double freq_step = 3.0, double noise = 2.2) {
  std::mt19937_64 g(seed);
  std::vector<double> values;
  std::vector<int> labels;
  for (std::size_t i = 0; i < n; ++i) {
    const int label = static_cast<int>(i % 3);
    const double freq = base_freq + freq_step * label;
    const double phase = 2.0 * kPi * unit(g);
    for (std::size_t t = 0; t < length; ++t)
      values.push_back(std::sin(2.0 * kPi * freq * t / length + phase) + noise * gauss(g));
    labels.push_back(label);
  }
  return make("freq_split", length, labels, std::move(values));
}

// Whole-series high-frequency texture with class-dependent period (3 vs 4
// samples) riding on a strong smooth carrier, behind a random per-series gain.
inline hydra::TimeSeriesDataset texture_period(std::size_t n, std::size_t length,
                                               std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::vector<double> values;
  std::vector<int> labels;
  for (std::size_t i = 0; i < n; ++i) {
    const int label = static_cast<int>(i % 2);
    const double gain = 0.5 + 1.5 * unit(g);
    const double period = label == 0 ? 3.0 : 4.0;
    const double phase = 2.0 * kPi * unit(g);
    double carrier = 0.0;
    for (std::size_t t = 0; t < length; ++t) {
      carrier = 0.985 * carrier + 0.45 * gauss(g);
      values.push_back(gain * (carrier + 0.22 * std::sin(2.0 * kPi * t / period + phase) +
                               0.15 * gauss(g)));
    }
    labels.push_back(label);
  }
  return make("texture_period", length, labels, std::move(values));
}

// Classes share per-series random smooth carriers and differ only in the
// amplitude of high-frequency jitter riding on top.
inline hydra::TimeSeriesDataset texture_rough(std::size_t n, std::size_t length,
                                              std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::vector<double> values;
  std::vector<int> labels;
  for (std::size_t i = 0; i < n; ++i) {
    const int label = static_cast<int>(i % 2);
    const double jitter = label == 0 ? 0.06 : 0.18;
    double carrier = 0.0;
    for (std::size_t t = 0; t < length; ++t) {
      carrier = 0.97 * carrier + 0.4 * gauss(g);
      values.push_back(carrier + jitter * gauss(g));
    }
    labels.push_back(label);
  }
  return make("texture_rough", length, labels, std::move(values));
}

// Strong smooth random walks behind a random gain; one class passes through a
// faint period-3 wiggle that is sharp in the difference domain.
inline hydra::TimeSeriesDataset walk_wiggle(std::size_t n, std::size_t length,
                                            std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::vector<double> values;
  std::vector<int> labels;
  const std::size_t wiggle_len = std::min<std::size_t>(30, length / 2);
  const std::size_t slack = length > wiggle_len + 10 ? length - wiggle_len - 10 : 1;
  for (std::size_t i = 0; i < n; ++i) {
    const int label = static_cast<int>(i % 2);
    const double gain = 0.5 + 1.5 * unit(g);
    std::vector<double> x(length);
    double acc = 0.0;
    for (std::size_t t = 0; t < length; ++t) {
      acc = 0.98 * acc + 0.5 * gauss(g);
      x[t] = acc;
    }
    if (label == 1) {
      const std::size_t at = 5 + g() % slack;
      for (std::size_t j = 0; j < wiggle_len; ++j)
        x[at + j] += 0.3 * std::sin(2.0 * kPi * j / 3.0);
    }
    for (double& v : x) v *= gain;
    values.insert(values.end(), x.begin(), x.end());
    labels.push_back(label);
  }
  return make("walk_wiggle", length, labels, std::move(values));
}

// Classes differ in bump count; every series carries a random positive gain
// as a nuisance, which hard counting ignores (argmax is scale-invariant) but
// soft counting does not.
inline hydra::TimeSeriesDataset scale_jitter(std::size_t n, std::size_t length,
                                             std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::vector<double> values;
  std::vector<int> labels;
  for (std::size_t i = 0; i < n; ++i) {
    const int label = static_cast<int>(i % 2);
    const double gain = 0.4 + 2.2 * unit(g);
    std::vector<double> x(length);
    for (double& v : x) v = 0.3 * gauss(g);
    const int bumps = label == 0 ? 2 : 4;
    for (int m = 0; m < bumps; ++m) {
      const std::size_t at = g() % (length - 12);
      for (std::size_t j = 0; j < 12; ++j)
        x[at + j] += std::sin(kPi * j / 11.0);
    }
    for (double& v : x) v *= gain;
    values.insert(values.end(), x.begin(), x.end());
    labels.push_back(label);
  }
  return make("scale_jitter", length, labels, std::move(values));
}

// Unstructured noise dataset for differential tests.
inline hydra::TimeSeriesDataset random_dataset(std::size_t n, std::size_t length,
                                               std::uint64_t seed, int n_classes = 2) {
  std::mt19937_64 g(seed);
  std::vector<double> values(n * length);
  std::vector<int> labels(n);
  for (double& v : values) v = gauss(g);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i % n_classes);
  return make("random", length, labels, std::move(values));
}

}  // namespace hydra::synth
