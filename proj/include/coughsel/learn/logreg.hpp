#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "coughsel/common.hpp"
#include "coughsel/learn/dataset.hpp"

namespace coughsel::learn {

namespace detail {

inline double log_sigmoid(double z) { return z >= 0 ? -std::log1p(std::exp(-z)) : z - std::log1p(std::exp(z)); }

inline double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace detail

/// sum_i [y log s(z_i) + (1 - y) log(1 - s(z_i))] - l2/2 |w|^2 with
/// z = b + x w. The intercept is not penalised.
inline double logistic_objective(const Eigen::MatrixXd& x, const std::vector<int>& y, const Eigen::VectorXd& w,
                                 double b, double l2) {
  const Eigen::VectorXd z = (x * w).array() + b;
  double ll = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i)
    ll += y[static_cast<std::size_t>(i)] == 1 ? detail::log_sigmoid(z(i)) : detail::log_sigmoid(-z(i));
  return ll - 0.5 * l2 * w.squaredNorm();
}

/// Gradient of logistic_objective; element 0 is d/db, the rest d/dw.
inline Eigen::VectorXd logistic_gradient(const Eigen::MatrixXd& x, const std::vector<int>& y, const Eigen::VectorXd& w,
                                         double b, double l2) {
  const Eigen::VectorXd z = (x * w).array() + b;
  Eigen::VectorXd resid(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) resid(i) = y[static_cast<std::size_t>(i)] - detail::sigmoid(z(i));
  Eigen::VectorXd g(w.size() + 1);
  g(0) = resid.sum();
  g.tail(w.size()) = x.transpose() * resid - l2 * w;
  return g;
}

struct LogRegModel {
  Standardizer scaler;
  Eigen::VectorXd weights;  // on standardised features
  double intercept = 0.0;
  bool converged = false;
  std::size_t iterations = 0;

  /// |coefficient| per feature; comparable across features because inputs
  /// are standardised.
  Eigen::VectorXd importance() const { return weights.cwiseAbs(); }
};

/// Gradient ascent with Armijo backtracking from w = 0, b = 0. Stops when the
/// largest gradient component per sample falls below `tol`; otherwise the
/// last iterate is returned with converged = false.
inline LogRegModel train_logreg(const Dataset& train, double l2_strength, std::size_t max_iter = 1000,
                                double tol = 1e-6) {
  train.validate(true);
  if (!(l2_strength >= 0.0)) throw InputError("train_logreg: l2_strength must be >= 0");
  LogRegModel m;
  m.scaler = Standardizer::fit(train.features);
  const Eigen::MatrixXd x = m.scaler.transform(train.features);
  const double n = static_cast<double>(train.size());
  Eigen::VectorXd w = Eigen::VectorXd::Zero(x.cols());
  double b = 0.0;
  double f = logistic_objective(x, train.labels, w, b, l2_strength);
  double step = 1.0 / n;
  for (m.iterations = 0; m.iterations < max_iter; ++m.iterations) {
    const Eigen::VectorXd g = logistic_gradient(x, train.labels, w, b, l2_strength);
    if (g.cwiseAbs().maxCoeff() / n < tol) {
      m.converged = true;
      break;
    }
    const double g2 = g.squaredNorm();
    bool moved = false;
    for (int tries = 0; tries < 60; ++tries) {
      const Eigen::VectorXd w_new = w + step * g.tail(w.size());
      const double b_new = b + step * g(0);
      const double f_new = logistic_objective(x, train.labels, w_new, b_new, l2_strength);
      if (f_new >= f + 0.5 * step * g2) {
        w = w_new;
        b = b_new;
        f = f_new;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
    step *= 2.0;
  }
  m.weights = w;
  m.intercept = b;
  return m;
}

inline Eigen::VectorXd predict_logreg(const LogRegModel& model, const Eigen::MatrixXd& features) {
  if (features.cols() != model.weights.size()) throw InputError("predict_logreg: feature dimension mismatch");
  const Eigen::VectorXd z = (model.scaler.transform(features) * model.weights).array() + model.intercept;
  return z.unaryExpr([](double v) { return detail::sigmoid(v); });
}

}  // namespace coughsel::learn
