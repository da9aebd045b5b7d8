#pragma once

#include <string>
#include <variant>
#include <vector>

#include "hydra/classifier.hpp"
#include "hydra/config.hpp"
#include "hydra/kernel_bank.hpp"

namespace hydra {

// Everything needed to reproduce predictions: bank + scaler + classifier,
// plus the load-time options that must be re-applied to new data.
struct Model {
  HydraConfig config;
  KernelBank bank;
  std::variant<RidgeModel, LogisticModel> classifier;
  std::vector<std::string> class_names;
  bool normalize_input = false;
  std::string trained_on;  // dataset name, informational

  bool is_ridge() const { return std::holds_alternative<RidgeModel>(classifier); }
  int n_classes() const { return static_cast<int>(class_names.size()); }
};

// Prediction over raw (untransformed) data; applies normalize_input, checks
// series length against the bank (BankMismatch otherwise), transforms, and
// classifies.
std::vector<int> model_predict(const Model& model, const TimeSeriesDataset& data,
                               int n_threads = 1);
std::vector<double> model_predict_scores(const Model& model, const TimeSeriesDataset& data,
                                         int n_threads = 1);

struct FitOptions {
  // "auto" picks ridge for n <= 10000 training examples, logistic above.
  std::string classifier = "auto";
  bool normalize_input = false;
  int threads = 1;
  std::vector<double> alphas;  // empty = default grid
  LogisticProtocol protocol;
};

struct FitReport {
  double transform_seconds = 0.0;
  double train_seconds = 0.0;
  double train_accuracy = 0.0;
};

// Bank generation + transform + scaling + classifier fit, end to end.
Model fit_model(const TimeSeriesDataset& train, const HydraConfig& config,
                const FitOptions& options = {}, FitReport* report = nullptr);

}  // namespace hydra
