#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <utility>

#include "hydra/classifier.hpp"

namespace hydra {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd targets_pm1(const std::vector<int>& labels, int C) {
  MatrixXd Y(labels.size(), C);
  Y.setConstant(-1.0);
  for (std::size_t i = 0; i < labels.size(); ++i) Y(static_cast<Eigen::Index>(i), labels[i]) = 1.0;
  return Y;
}

void check_finite(const FeatureMatrix& features) {
  for (double v : features.values)
    if (!std::isfinite(v)) throw Error(Errc::non_finite_input, "non-finite feature value");
}

// Spectral decomposition shared by the LOOCV curve and the final refit.
// The objective is (1/n) sum_i |y_i - x_i'b - b0|^2 + alpha |b|^2 with an
// unpenalized intercept, i.e. penalty n*alpha in the normal equations.
// Centering the columns makes the design orthogonal to the intercept column,
// so the augmented hat matrix is exactly H_c(alpha) + (1/n) 11'.
struct RidgeDecomp {
  MatrixXd Xc;        // centered scaled features, n x F
  VectorXd col_mean;  // F
  MatrixXd Yc;        // centered targets, n x C
  VectorXd y_mean;    // C
  bool dual;          // true: eigendecomposition of Xc Xc' (n x n)
  MatrixXd U;         // eigenvectors (n x n dual, or Z = Xc*V primal)
  MatrixXd V;         // primal eigenvectors (F x F), empty in dual mode
  VectorXd evals;
  std::size_t n;

  RidgeDecomp(const FeatureMatrix& scaled, const MatrixXd& Y) {
    n = scaled.rows;
    const auto F = static_cast<Eigen::Index>(scaled.cols);
    Xc = Eigen::Map<const MatrixXd>(scaled.values.data(), F, static_cast<Eigen::Index>(n))
             .transpose();
    col_mean = Xc.colwise().mean();
    Xc.rowwise() -= col_mean.transpose();
    y_mean = Y.colwise().mean();
    Yc = Y.rowwise() - y_mean.transpose();

    dual = static_cast<Eigen::Index>(n) <= F;
    if (dual) {
      Eigen::SelfAdjointEigenSolver<MatrixXd> eig(Xc * Xc.transpose());
      U = eig.eigenvectors();
      evals = eig.eigenvalues().cwiseMax(0.0);
    } else {
      Eigen::SelfAdjointEigenSolver<MatrixXd> eig(Xc.transpose() * Xc);
      V = eig.eigenvectors();
      evals = eig.eigenvalues().cwiseMax(0.0);
      U = Xc * V;  // Z, n x F: H_c = Z diag(1/(evals+lam)) Z'
    }
  }

  // LOO residuals y_i - yhat_i^(-i) for one alpha, n x C.
  MatrixXd loo_residuals(double alpha) const {
    const double lam = alpha * static_cast<double>(n);
    MatrixXd fitted;    // H y, from the centered part plus the mean
    VectorXd hat_diag;  // diag(H)
    if (dual) {
      const VectorXd shrink = evals.array() / (evals.array() + lam);
      fitted = U * (shrink.asDiagonal() * (U.transpose() * Yc));
      hat_diag = (U.array().square().matrix() * shrink);
    } else {
      const VectorXd inv = (evals.array() + lam).inverse();
      fitted = U * (inv.asDiagonal() * (U.transpose() * Yc));
      hat_diag = (U.array().square().matrix() * inv);
    }
    const double mean_h = 1.0 / static_cast<double>(n);
    fitted.rowwise() += y_mean.transpose();
    MatrixXd resid = targets_from_centered() - fitted;
    for (Eigen::Index i = 0; i < resid.rows(); ++i)
      resid.row(i) /= (1.0 - (hat_diag(i) + mean_h));
    return resid;
  }

  MatrixXd targets_from_centered() const {
    return Yc.rowwise() + y_mean.transpose();
  }

  // Full-data coefficients for one alpha: weights F x C plus intercepts.
  std::pair<MatrixXd, VectorXd> refit(double alpha) const {
    const double lam = alpha * static_cast<double>(n);
    MatrixXd beta;
    if (dual) {
      const VectorXd inv = (evals.array() + lam).inverse();
      beta = Xc.transpose() * (U * (inv.asDiagonal() * (U.transpose() * Yc)));
    } else {
      const VectorXd inv = (evals.array() + lam).inverse();
      beta = V * (inv.asDiagonal() * (U.transpose() * Yc));
    }
    VectorXd intercepts = y_mean - beta.transpose() * col_mean;
    return {std::move(beta), std::move(intercepts)};
  }
};

}  // namespace

std::vector<double> default_ridge_alphas() {
  std::vector<double> alphas(10);
  for (int i = 0; i < 10; ++i) alphas[i] = std::pow(10.0, -3.0 + 6.0 * i / 9.0);
  return alphas;
}

std::vector<double> ridge_loo_residuals(const FeatureMatrix& scaled_features,
                                        const std::vector<int>& labels, int n_classes,
                                        double alpha) {
  check_finite(scaled_features);
  RidgeDecomp decomp(scaled_features, targets_pm1(labels, n_classes));
  MatrixXd resid = decomp.loo_residuals(alpha);
  std::vector<double> out(resid.rows() * resid.cols());
  for (Eigen::Index i = 0; i < resid.rows(); ++i)
    for (Eigen::Index c = 0; c < resid.cols(); ++c)
      out[static_cast<std::size_t>(i) * n_classes + c] = resid(i, c);
  return out;
}

RidgeModel fit_ridge(const FeatureMatrix& train_features, const std::vector<int>& labels,
                     int n_classes, std::span<const double> alphas) {
  check_finite(train_features);
  if (train_features.rows != labels.size())
    throw Error(Errc::length_mismatch, "feature rows and labels differ");
  if (n_classes < 2) throw Error(Errc::degenerate_labels, "need at least 2 classes");

  std::vector<double> default_alphas;
  if (alphas.empty()) {
    default_alphas = default_ridge_alphas();
    alphas = default_alphas;
  }

  RidgeModel model;
  model.n_classes = n_classes;
  model.n_features = static_cast<int>(train_features.cols);
  model.scaler = fit_scaler(train_features);
  FeatureMatrix scaled = apply_scaler(model.scaler, train_features);

  RidgeDecomp decomp(scaled, targets_pm1(labels, n_classes));
  std::size_t best = 0;
  double best_sse = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    const double sse = decomp.loo_residuals(alphas[a]).squaredNorm();
    if (sse < best_sse) {
      best_sse = sse;
      best = a;
    }
  }
  model.alpha = alphas[best];

  auto [beta, intercepts] = decomp.refit(model.alpha);
  model.weights.resize(static_cast<std::size_t>(n_classes) * train_features.cols);
  for (int c = 0; c < n_classes; ++c)
    for (std::size_t f = 0; f < train_features.cols; ++f)
      model.weights[static_cast<std::size_t>(c) * train_features.cols + f] =
          beta(static_cast<Eigen::Index>(f), c);
  model.intercepts.assign(intercepts.data(), intercepts.data() + n_classes);
  return model;
}

}  // namespace hydra
