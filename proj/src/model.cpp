#include "hydra/model.hpp"

#include <chrono>

#include "hydra/transform.hpp"

namespace hydra {

namespace {

FeatureMatrix features_for(const Model& model, const TimeSeriesDataset& data, int n_threads) {
  if (static_cast<int>(data.length) != model.bank.input_len)
    throw Error(Errc::bank_mismatch,
                "series length " + std::to_string(data.length) + " does not match model (" +
                    std::to_string(model.bank.input_len) + ")");
  if (model.normalize_input) {
    TimeSeriesDataset copy = data;
    normalize_per_series(copy);
    return transform(copy, model.bank, model.config, n_threads);
  }
  return transform(data, model.bank, model.config, n_threads);
}

}  // namespace

std::vector<int> model_predict(const Model& model, const TimeSeriesDataset& data,
                               int n_threads) {
  FeatureMatrix features = features_for(model, data, n_threads);
  return model.is_ridge() ? predict(std::get<RidgeModel>(model.classifier), features)
                          : predict(std::get<LogisticModel>(model.classifier), features);
}

std::vector<double> model_predict_scores(const Model& model, const TimeSeriesDataset& data,
                                         int n_threads) {
  FeatureMatrix features = features_for(model, data, n_threads);
  return model.is_ridge() ? predict_scores(std::get<RidgeModel>(model.classifier), features)
                          : predict_scores(std::get<LogisticModel>(model.classifier), features);
}

Model fit_model(const TimeSeriesDataset& train, const HydraConfig& config,
                const FitOptions& options, FitReport* report) {
  if (!train.labeled()) throw Error(Errc::degenerate_labels, "training data is unlabeled");
  config.validate();

  Model model;
  model.config = config;
  model.class_names = train.class_names;
  model.normalize_input = options.normalize_input;
  model.trained_on = train.name;

  const auto t0 = std::chrono::steady_clock::now();
  model.bank = generate_bank(config, static_cast<int>(train.length));
  FeatureMatrix features;
  if (options.normalize_input) {
    TimeSeriesDataset copy = train;
    normalize_per_series(copy);
    features = transform(copy, model.bank, config, options.threads);
  } else {
    features = transform(train, model.bank, config, options.threads);
  }
  const auto t1 = std::chrono::steady_clock::now();

  std::string choice = options.classifier;
  if (choice == "auto") choice = train.n() <= 10000 ? "ridge" : "logistic";
  const int C = static_cast<int>(train.n_classes());
  if (choice == "ridge") {
    model.classifier = fit_ridge(features, train.labels, C, options.alphas);
  } else if (choice == "logistic") {
    model.classifier = fit_logistic(features, train.labels, C, options.protocol);
  } else {
    throw Error(Errc::config_error, "unknown classifier '" + options.classifier + "'");
  }
  const auto t2 = std::chrono::steady_clock::now();

  if (report) {
    report->transform_seconds = std::chrono::duration<double>(t1 - t0).count();
    report->train_seconds = std::chrono::duration<double>(t2 - t1).count();
    auto predicted = model.is_ridge()
                         ? predict(std::get<RidgeModel>(model.classifier), features)
                         : predict(std::get<LogisticModel>(model.classifier), features);
    report->train_accuracy = accuracy(predicted, train.labels);
  }
  return model;
}

}  // namespace hydra
