#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hydra/transform.hpp"

namespace hydra {

// Per-feature standardization statistics, computed from training features
// only. Population stdev, floored at 1e-8 so constant columns scale to zero.
struct ScalerStats {
  std::vector<double> mean;
  std::vector<double> stdev;

  bool operator==(const ScalerStats&) const = default;
};

ScalerStats fit_scaler(const FeatureMatrix& train_features);
FeatureMatrix apply_scaler(const ScalerStats& stats, const FeatureMatrix& features);

std::vector<double> default_ridge_alphas();  // 10^-3 .. 10^3, 10 log steps

struct RidgeModel {
  int n_classes = 0;
  int n_features = 0;
  std::vector<double> weights;     // n_classes * n_features, row-major
  std::vector<double> intercepts;  // n_classes
  double alpha = 0.0;
  ScalerStats scaler;
};

// One-vs-rest ridge regression onto +/-1 targets over standardized features.
// The loss is the per-example mean of squared residuals plus alpha*|w|^2
// (intercept unpenalized), so duplicating the training set leaves the
// estimator unchanged for fixed alpha. Alpha is selected by closed-form
// leave-one-out CV from a single eigendecomposition, then the model is refit
// on the full training set.
RidgeModel fit_ridge(const FeatureMatrix& train_features, const std::vector<int>& labels,
                     int n_classes, std::span<const double> alphas = {});

// Closed-form LOO residuals y_i - yhat_i^(-i) for one alpha, over scaled
// features (row-major n x n_classes). Exposed for the brute-force cross-check.
std::vector<double> ridge_loo_residuals(const FeatureMatrix& scaled_features,
                                        const std::vector<int>& labels, int n_classes,
                                        double alpha);

struct LrEvent {
  long update = 0;     // 1-based update index at which the event fired
  double lr = 0.0;     // learning rate after the event
};

struct TrainingLog {
  std::vector<double> epoch_val_loss;  // validation loss at each epoch end
  std::vector<LrEvent> lr_events;
  long stop_update = -1;  // update index at which early stopping fired, -1 if none
  long best_update = 0;   // update index of the best validation loss (0 = initial)
  double best_val_loss = 0.0;
  long total_updates = 0;
};

struct LogisticProtocol {
  int validation_size = 2048;
  int minibatch = 256;
  double lr = 1e-4;
  int lr_patience = 50;    // updates without improvement before halving
  int stop_patience = 100; // updates without improvement before stopping
  int max_epochs = 100;
  std::uint64_t seed = 0;

  bool operator==(const LogisticProtocol&) const = default;
};

struct LogisticModel {
  int n_classes = 0;
  int n_features = 0;
  std::vector<double> weights;     // n_classes * n_features, row-major
  std::vector<double> intercepts;  // n_classes
  ScalerStats scaler;
  LogisticProtocol protocol;
  TrainingLog log;
};

// Multinomial cross-entropy minimized with Adam (0.9/0.999/1e-8) over
// standardized features, following the fixed minibatch/patience protocol.
// Validation loss is evaluated after every update; the pre-training loss is
// the best-so-far baseline. Returns the parameters at the best validation
// loss observed. Throws InsufficientData when n <= validation_size.
LogisticModel fit_logistic(const FeatureMatrix& train_features,
                           const std::vector<int>& labels, int n_classes,
                           const LogisticProtocol& protocol = {});

// Mean cross-entropy loss and its gradient at (weights, intercepts) over the
// given scaled rows. Exposed for finite-difference checks.
double logistic_loss_grad(std::span<const double> weights, std::span<const double> intercepts,
                          const FeatureMatrix& scaled_features, std::span<const std::size_t> rows,
                          const std::vector<int>& labels, int n_classes,
                          std::span<double> grad_w, std::span<double> grad_b);

// Deterministic argmax prediction (lowest class index wins ties). Ridge
// scores are decision values; logistic scores are softmax probabilities.
std::vector<int> predict(const RidgeModel& model, const FeatureMatrix& features);
std::vector<int> predict(const LogisticModel& model, const FeatureMatrix& features);
std::vector<double> predict_scores(const RidgeModel& model, const FeatureMatrix& features);
std::vector<double> predict_scores(const LogisticModel& model, const FeatureMatrix& features);

double accuracy(std::span<const int> predicted, std::span<const int> truth);

}  // namespace hydra
