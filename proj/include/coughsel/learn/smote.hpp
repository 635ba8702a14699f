#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <numeric>

#include "coughsel/common.hpp"
#include "coughsel/learn/dataset.hpp"

namespace coughsel::learn {

/// Indices of the k nearest other rows of `x` to row i (Euclidean; index
/// breaks distance ties).
inline std::vector<std::size_t> nearest_rows(const Eigen::MatrixXd& x, std::size_t i, std::size_t k) {
  std::vector<std::pair<double, std::size_t>> d;
  d.reserve(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index r = 0; r < x.rows(); ++r)
    if (static_cast<std::size_t>(r) != i)
      d.emplace_back((x.row(r) - x.row(static_cast<Eigen::Index>(i))).squaredNorm(), static_cast<std::size_t>(r));
  std::partial_sort(d.begin(), d.begin() + static_cast<long>(k), d.end());
  std::vector<std::size_t> out(k);
  for (std::size_t j = 0; j < k; ++j) out[j] = d[j].second;
  return out;
}

/// target_count - M synthetic rows, each x + u (nn - x) for a uniformly drawn
/// minority row x, one of its k nearest minority neighbours nn and u ~ U[0, 1].
inline Eigen::MatrixXd smote(const Eigen::MatrixXd& minority, std::size_t target_count, std::size_t k_neighbors,
                             std::uint64_t seed = kDefaultSeed) {
  const auto m = static_cast<std::size_t>(minority.rows());
  if (k_neighbors < 1) throw InputError("smote: k_neighbors must be at least 1");
  if (m <= k_neighbors)
    throw InputError("smote: need more than k_neighbors = " + std::to_string(k_neighbors) + " minority samples, have " +
                     std::to_string(m));
  if (target_count < m) throw InputError("smote: target_count below current minority count");
  const std::size_t n_new = target_count - m;
  Eigen::MatrixXd out(static_cast<Eigen::Index>(n_new), minority.cols());
  if (n_new == 0) return out;
  std::vector<std::vector<std::size_t>> neighbours(m);
  for (std::size_t i = 0; i < m; ++i) neighbours[i] = nearest_rows(minority, i, k_neighbors);
  Rng rng(seed);
  for (std::size_t s = 0; s < n_new; ++s) {
    const std::size_t base = rng.index(m);
    const std::size_t nn = neighbours[base][rng.index(k_neighbors)];
    const double u = rng.uniform01();
    out.row(static_cast<Eigen::Index>(s)) =
        minority.row(static_cast<Eigen::Index>(base)) +
        u * (minority.row(static_cast<Eigen::Index>(nn)) - minority.row(static_cast<Eigen::Index>(base)));
  }
  return out;
}

/// Appends SMOTE samples until both classes have the majority count.
/// Synthetic ids are "<smote>#n". Balanced input is returned unchanged.
inline Dataset oversample(const Dataset& train, std::size_t k_neighbors, std::uint64_t seed) {
  const std::size_t pos = train.count(1), neg = train.count(0);
  if (pos == neg) return train;
  const int minority_label = pos < neg ? 1 : 0;
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < train.size(); ++i)
    if (train.labels[i] == minority_label) rows.push_back(i);
  const Eigen::MatrixXd synth =
      smote(train.subset(rows).features, std::max(pos, neg), std::min(k_neighbors, rows.size() - 1), seed);
  Dataset out = train;
  out.features.conservativeResize(train.features.rows() + synth.rows(), Eigen::NoChange);
  out.features.bottomRows(synth.rows()) = synth;
  for (Eigen::Index s = 0; s < synth.rows(); ++s) {
    out.labels.push_back(minority_label);
    out.ids.push_back("<smote>#" + std::to_string(s));
  }
  return out;
}

}  // namespace coughsel::learn
