#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "hydra/classifier.hpp"

namespace hydra {

namespace {

// Softmax cross-entropy over one set of rows; fills per-class probabilities
// minus one-hot targets into `delta` (rows.size() x C) for the gradient.
double xent_forward(std::span<const double> weights, std::span<const double> intercepts,
                    const FeatureMatrix& X, std::span<const std::size_t> rows,
                    const std::vector<int>& labels, int C, std::vector<double>* delta) {
  const std::size_t F = X.cols;
  double loss = 0.0;
  std::vector<double> z(C);
  if (delta) delta->assign(rows.size() * C, 0.0);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const double* x = X.row(rows[r]);
    for (int c = 0; c < C; ++c) {
      const double* w = weights.data() + static_cast<std::size_t>(c) * F;
      double acc = intercepts[c];
      for (std::size_t f = 0; f < F; ++f) acc += w[f] * x[f];
      z[c] = acc;
    }
    const double m = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (int c = 0; c < C; ++c) {
      z[c] = std::exp(z[c] - m);
      sum += z[c];
    }
    const int y = labels[rows[r]];
    loss -= std::log(z[y] / sum);
    if (delta) {
      double* d = delta->data() + r * C;
      for (int c = 0; c < C; ++c) d[c] = z[c] / sum - (c == y ? 1.0 : 0.0);
    }
  }
  return loss / static_cast<double>(rows.size());
}

}  // namespace

double logistic_loss_grad(std::span<const double> weights, std::span<const double> intercepts,
                          const FeatureMatrix& scaled_features,
                          std::span<const std::size_t> rows, const std::vector<int>& labels,
                          int n_classes, std::span<double> grad_w, std::span<double> grad_b) {
  std::vector<double> delta;
  const double loss = xent_forward(weights, intercepts, scaled_features, rows, labels,
                                   n_classes, &delta);
  const std::size_t F = scaled_features.cols;
  std::fill(grad_w.begin(), grad_w.end(), 0.0);
  std::fill(grad_b.begin(), grad_b.end(), 0.0);
  const double inv_b = 1.0 / static_cast<double>(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const double* x = scaled_features.row(rows[r]);
    const double* d = delta.data() + r * n_classes;
    for (int c = 0; c < n_classes; ++c) {
      const double dc = d[c] * inv_b;
      if (dc == 0.0) continue;
      double* gw = grad_w.data() + static_cast<std::size_t>(c) * F;
      for (std::size_t f = 0; f < F; ++f) gw[f] += dc * x[f];
      grad_b[c] += dc;
    }
  }
  return loss;
}

LogisticModel fit_logistic(const FeatureMatrix& train_features, const std::vector<int>& labels,
                           int n_classes, const LogisticProtocol& protocol) {
  if (train_features.rows != labels.size())
    throw Error(Errc::length_mismatch, "feature rows and labels differ");
  if (n_classes < 2) throw Error(Errc::degenerate_labels, "need at least 2 classes");
  const std::size_t n = train_features.rows;
  if (n <= static_cast<std::size_t>(protocol.validation_size))
    throw Error(Errc::insufficient_data,
                "n = " + std::to_string(n) + " <= validation_size = " +
                    std::to_string(protocol.validation_size));
  for (double v : train_features.values)
    if (!std::isfinite(v)) throw Error(Errc::non_finite_input, "non-finite feature value");

  LogisticModel model;
  model.n_classes = n_classes;
  model.n_features = static_cast<int>(train_features.cols);
  model.protocol = protocol;
  model.scaler = fit_scaler(train_features);
  FeatureMatrix X = apply_scaler(model.scaler, train_features);

  const std::size_t F = X.cols;
  const std::size_t P = static_cast<std::size_t>(n_classes) * F;

  std::mt19937_64 gen(protocol.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), gen);
  std::vector<std::size_t> val_rows(order.begin(),
                                    order.begin() + protocol.validation_size);
  std::vector<std::size_t> train_rows(order.begin() + protocol.validation_size, order.end());

  std::vector<double> w(P, 0.0), b(n_classes, 0.0);
  std::vector<double> gw(P), gb(n_classes);
  std::vector<double> mw(P, 0.0), vw(P, 0.0), mb(n_classes, 0.0), vb(n_classes, 0.0);
  const double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  double lr = protocol.lr;

  auto val_loss = [&] {
    return xent_forward(w, b, X, val_rows, labels, n_classes, nullptr);
  };

  // The pre-training loss is the best-so-far baseline, so a stream that never
  // improves triggers the halving exactly at lr_patience updates and the stop
  // exactly at stop_patience.
  TrainingLog& log = model.log;
  log.best_val_loss = val_loss();
  log.best_update = 0;
  std::vector<double> best_w = w, best_b = b;

  long update = 0;
  long since_best = 0;
  bool stopped = false;
  for (int epoch = 1; epoch <= protocol.max_epochs && !stopped; ++epoch) {
    std::shuffle(train_rows.begin(), train_rows.end(), gen);
    for (std::size_t begin = 0; begin < train_rows.size() && !stopped;
         begin += protocol.minibatch) {
      const std::size_t end =
          std::min(train_rows.size(), begin + static_cast<std::size_t>(protocol.minibatch));
      std::span<const std::size_t> batch(train_rows.data() + begin, end - begin);
      logistic_loss_grad(w, b, X, batch, labels, n_classes, gw, gb);

      ++update;
      const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(update));
      const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(update));
      for (std::size_t p = 0; p < P; ++p) {
        mw[p] = beta1 * mw[p] + (1.0 - beta1) * gw[p];
        vw[p] = beta2 * vw[p] + (1.0 - beta2) * gw[p] * gw[p];
        w[p] -= lr * (mw[p] / bc1) / (std::sqrt(vw[p] / bc2) + eps);
      }
      for (int c = 0; c < n_classes; ++c) {
        mb[c] = beta1 * mb[c] + (1.0 - beta1) * gb[c];
        vb[c] = beta2 * vb[c] + (1.0 - beta2) * gb[c] * gb[c];
        b[c] -= lr * (mb[c] / bc1) / (std::sqrt(vb[c] / bc2) + eps);
      }

      const double loss = val_loss();
      if (loss < log.best_val_loss) {
        log.best_val_loss = loss;
        log.best_update = update;
        best_w = w;
        best_b = b;
        since_best = 0;
      } else {
        ++since_best;
        if (protocol.lr_patience > 0 && since_best % protocol.lr_patience == 0) {
          lr *= 0.5;
          log.lr_events.push_back({update, lr});
        }
        if (epoch > 1 && since_best >= protocol.stop_patience) {
          log.stop_update = update;
          stopped = true;
        }
      }
    }
    log.epoch_val_loss.push_back(val_loss());
    // Stopping is armed only once the first epoch has completed.
    if (!stopped && epoch >= 1 && since_best >= protocol.stop_patience) {
      log.stop_update = update;
      stopped = true;
    }
  }
  log.total_updates = update;

  model.weights = std::move(best_w);
  model.intercepts = std::move(best_b);
  return model;
}

}  // namespace hydra
