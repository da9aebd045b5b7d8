#include "hydra/classifier.hpp"

#include <algorithm>
#include <cmath>

namespace hydra {

ScalerStats fit_scaler(const FeatureMatrix& train_features) {
  const std::size_t n = train_features.rows;
  const std::size_t F = train_features.cols;
  if (n < 2) throw Error(Errc::insufficient_data, "scaler needs at least 2 examples");

  ScalerStats stats;
  stats.mean.assign(F, 0.0);
  stats.stdev.assign(F, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = train_features.row(i);
    for (std::size_t f = 0; f < F; ++f) stats.mean[f] += row[f];
  }
  for (double& m : stats.mean) m /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = train_features.row(i);
    for (std::size_t f = 0; f < F; ++f) {
      const double d = row[f] - stats.mean[f];
      stats.stdev[f] += d * d;
    }
  }
  for (double& s : stats.stdev) s = std::max(std::sqrt(s / static_cast<double>(n)), 1e-8);
  return stats;
}

FeatureMatrix apply_scaler(const ScalerStats& stats, const FeatureMatrix& features) {
  if (stats.mean.size() != features.cols)
    throw Error(Errc::bank_mismatch, "scaler dimension " + std::to_string(stats.mean.size()) +
                                         " vs features " + std::to_string(features.cols));
  FeatureMatrix out = features;
  for (std::size_t i = 0; i < out.rows; ++i) {
    double* row = out.row(i);
    for (std::size_t f = 0; f < out.cols; ++f)
      row[f] = (row[f] - stats.mean[f]) / stats.stdev[f];
  }
  return out;
}

namespace {

std::vector<int> argmax_rows(const std::vector<double>& scores, std::size_t n, int C) {
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = scores.data() + i * C;
    int best = 0;
    for (int c = 1; c < C; ++c)
      if (row[c] > row[best]) best = c;  // ties keep the lowest class index
    labels[i] = best;
  }
  return labels;
}

std::vector<double> linear_scores(std::span<const double> weights,
                                  std::span<const double> intercepts,
                                  const FeatureMatrix& scaled, int C) {
  const std::size_t n = scaled.rows;
  const std::size_t F = scaled.cols;
  std::vector<double> scores(n * C);
  for (std::size_t i = 0; i < n; ++i) {
    const double* x = scaled.row(i);
    for (int c = 0; c < C; ++c) {
      const double* w = weights.data() + static_cast<std::size_t>(c) * F;
      double acc = intercepts[c];
      for (std::size_t f = 0; f < F; ++f) acc += w[f] * x[f];
      scores[i * C + c] = acc;
    }
  }
  return scores;
}

void softmax_rows(std::vector<double>& scores, std::size_t n, int C) {
  for (std::size_t i = 0; i < n; ++i) {
    double* row = scores.data() + i * C;
    double m = row[0];
    for (int c = 1; c < C; ++c) m = std::max(m, row[c]);
    double sum = 0.0;
    for (int c = 0; c < C; ++c) {
      row[c] = std::exp(row[c] - m);
      sum += row[c];
    }
    for (int c = 0; c < C; ++c) row[c] /= sum;
  }
}

}  // namespace

std::vector<double> predict_scores(const RidgeModel& model, const FeatureMatrix& features) {
  if (static_cast<int>(features.cols) != model.n_features)
    throw Error(Errc::bank_mismatch, "feature dimension does not match the model");
  FeatureMatrix scaled = apply_scaler(model.scaler, features);
  return linear_scores(model.weights, model.intercepts, scaled, model.n_classes);
}

std::vector<double> predict_scores(const LogisticModel& model, const FeatureMatrix& features) {
  if (static_cast<int>(features.cols) != model.n_features)
    throw Error(Errc::bank_mismatch, "feature dimension does not match the model");
  FeatureMatrix scaled = apply_scaler(model.scaler, features);
  auto scores = linear_scores(model.weights, model.intercepts, scaled, model.n_classes);
  softmax_rows(scores, scaled.rows, model.n_classes);
  return scores;
}

std::vector<int> predict(const RidgeModel& model, const FeatureMatrix& features) {
  return argmax_rows(predict_scores(model, features), features.rows, model.n_classes);
}

std::vector<int> predict(const LogisticModel& model, const FeatureMatrix& features) {
  return argmax_rows(predict_scores(model, features), features.rows, model.n_classes);
}

double accuracy(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size() || predicted.empty())
    throw Error(Errc::length_mismatch, "prediction/label size mismatch");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i)
    if (predicted[i] == truth[i]) ++correct;
  return static_cast<double>(correct) / static_cast<double>(predicted.size());
}

}  // namespace hydra
