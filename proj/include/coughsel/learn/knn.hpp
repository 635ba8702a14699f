#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <vector>

#include "coughsel/common.hpp"
#include "coughsel/learn/dataset.hpp"

namespace coughsel::learn {

struct KnnModel {
  Standardizer scaler;
  Eigen::MatrixXd points;  // standardised training rows
  std::vector<int> labels;
  std::size_t n_neighbors = 5;
};

inline KnnModel train_knn(const Dataset& train, std::size_t n_neighbors) {
  if (train.size() == 0) throw InputError("train_knn: empty training set");
  train.validate(false);
  if (n_neighbors < 1 || n_neighbors > train.size())
    throw InputError("train_knn: n_neighbors = " + std::to_string(n_neighbors) + " outside [1, " +
                     std::to_string(train.size()) + "]");
  KnnModel m;
  m.scaler = Standardizer::fit(train.features);
  m.points = m.scaler.transform(train.features);
  m.labels = train.labels;
  m.n_neighbors = n_neighbors;
  return m;
}

/// Fraction of positive labels among the k nearest training rows. Distance
/// ties are resolved by training order.
inline Eigen::VectorXd predict_knn(const KnnModel& model, const Eigen::MatrixXd& features) {
  if (features.cols() != model.points.cols()) throw InputError("predict_knn: feature dimension mismatch");
  const Eigen::MatrixXd q = model.scaler.transform(features);
  const auto n = static_cast<std::size_t>(model.points.rows());
  const std::size_t k = model.n_neighbors;
  Eigen::VectorXd scores(q.rows());
  std::vector<std::pair<double, std::size_t>> d(n);
  for (Eigen::Index r = 0; r < q.rows(); ++r) {
    for (std::size_t i = 0; i < n; ++i)
      d[i] = {(model.points.row(static_cast<Eigen::Index>(i)) - q.row(r)).squaredNorm(), i};
    std::partial_sort(d.begin(), d.begin() + static_cast<long>(k), d.end());
    std::size_t pos = 0;
    for (std::size_t j = 0; j < k; ++j) pos += model.labels[d[j].second] == 1;
    scores(r) = static_cast<double>(pos) / static_cast<double>(k);
  }
  return scores;
}

}  // namespace coughsel::learn
