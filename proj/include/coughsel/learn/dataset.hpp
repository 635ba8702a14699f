#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "coughsel/common.hpp"

namespace coughsel::learn {

/// Feature rows with binary labels (1 = positive) and sample identifiers.
struct Dataset {
  Eigen::MatrixXd features;
  std::vector<int> labels;
  std::vector<std::string> ids;
  std::vector<std::string> feature_names;

  std::size_t size() const { return labels.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(features.cols()); }

  std::size_t count(int label) const {
    std::size_t n = 0;
    for (int l : labels) n += l == label;
    return n;
  }

  void validate(bool need_both_classes = true) const {
    if (features.rows() != static_cast<Eigen::Index>(labels.size()) || ids.size() != labels.size())
      throw InputError("dataset: features, labels and ids differ in length");
    if (labels.empty()) throw InputError("dataset: no samples");
    if (!features.allFinite()) throw InputError("dataset: non-finite feature value");
    for (int l : labels)
      if (l != 0 && l != 1) throw InputError("dataset: labels must be 0 or 1");
    if (need_both_classes && (count(0) == 0 || count(1) == 0))
      throw InputError("dataset: both classes must be present");
  }

  Dataset subset(const std::vector<std::size_t>& rows) const {
    Dataset out;
    out.feature_names = feature_names;
    out.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      out.features.row(static_cast<Eigen::Index>(r)) = features.row(static_cast<Eigen::Index>(rows[r]));
      out.labels.push_back(labels[rows[r]]);
      out.ids.push_back(ids[rows[r]]);
    }
    return out;
  }

  /// Same samples restricted to the selected columns.
  Dataset columns(const std::vector<std::size_t>& cols) const {
    Dataset out;
    out.labels = labels;
    out.ids = ids;
    out.features.resize(features.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) {
      out.features.col(static_cast<Eigen::Index>(c)) = features.col(static_cast<Eigen::Index>(cols[c]));
      if (!feature_names.empty()) out.feature_names.push_back(feature_names[cols[c]]);
    }
    return out;
  }
};

/// Per-column standardisation fitted on one sample set; zero-variance columns
/// keep unit scale.
struct Standardizer {
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd scale;

  static Standardizer fit(const Eigen::MatrixXd& x) {
    Standardizer s;
    s.mean = x.colwise().mean();
    const Eigen::MatrixXd centred = x.rowwise() - s.mean;
    s.scale = (centred.array().square().colwise().sum() / static_cast<double>(x.rows())).sqrt();
    for (Eigen::Index j = 0; j < s.scale.size(); ++j)
      if (!(s.scale(j) > 1e-12)) s.scale(j) = 1.0;
    return s;
  }

  Eigen::MatrixXd transform(const Eigen::MatrixXd& x) const {
    return (x.rowwise() - mean).array().rowwise() / scale.array();
  }
};

}  // namespace coughsel::learn
