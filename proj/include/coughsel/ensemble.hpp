#pragma once

// Soft and hard fusion of per-strategy TOPSIS closeness into one ranking.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "coughsel/common.hpp"
#include "coughsel/mcdm.hpp"

namespace coughsel::ensemble {

/// closeness(i, j) = C of model i under strategy j.
struct ClosenessTable {
  std::vector<std::string> models;
  std::vector<std::string> strategies;
  Eigen::MatrixXd closeness;

  void validate() const {
    if (models.empty()) throw InputError("closeness table: no models");
    if (strategies.empty()) throw InputError("closeness table: no strategies");
    if (closeness.rows() != static_cast<Eigen::Index>(models.size()) ||
        closeness.cols() != static_cast<Eigen::Index>(strategies.size()))
      throw InputError("closeness table: shape does not match labels");
    if (std::set<std::string>(models.begin(), models.end()).size() != models.size())
      throw InputError("closeness table: duplicate model");
    if (std::set<std::string>(strategies.begin(), strategies.end()).size() != strategies.size())
      throw InputError("closeness table: duplicate strategy");
    for (Eigen::Index i = 0; i < closeness.size(); ++i) {
      const double c = closeness.data()[i];
      if (!std::isfinite(c) || c < 0.0 || c > 1.0) throw InputError("closeness table: values must lie in [0, 1]");
    }
  }
};

/// When two closeness values count as equal for point assignment. Values are
/// compared in descending order against their predecessor, so ties chain.
///  - relative: gap <= eps * larger value (default, eps = 0.002)
///  - absolute: gap <= eps (eps = 0 gives exact ties only)
///  - decimals: equal after rounding to `decimals` places
struct TieRule {
  enum class Kind { kRelative, kAbsolute, kDecimals };
  Kind kind = Kind::kRelative;
  double eps = 2e-3;
  int decimals = 2;

  static TieRule relative(double eps) { return {Kind::kRelative, eps, 2}; }
  static TieRule absolute(double eps) { return {Kind::kAbsolute, eps, 2}; }
  static TieRule rounded(int decimals) { return {Kind::kDecimals, 0.0, decimals}; }

  void validate() const {
    if (!(eps >= 0.0) || !std::isfinite(eps)) throw InputError("tie rule: eps must be >= 0");
    if (decimals < 0 || decimals > 12) throw InputError("tie rule: decimals must lie in [0, 12]");
  }

  /// `higher` >= `lower` assumed.
  bool tied(double higher, double lower) const {
    switch (kind) {
      case Kind::kRelative: return higher - lower <= eps * std::abs(higher);
      case Kind::kAbsolute: return higher - lower <= eps;
      case Kind::kDecimals: {
        const double scale = std::pow(10.0, decimals);
        return std::round(higher * scale) == std::round(lower * scale);
      }
    }
    return false;
  }
};

/// Points for one strategy column: m + 1 - competition rank, tied values
/// sharing the best rank of their cluster.
inline std::vector<int> column_points(const Eigen::VectorXd& closeness, const TieRule& rule) {
  rule.validate();
  const auto m = static_cast<std::size_t>(closeness.size());
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return closeness(static_cast<Eigen::Index>(a)) > closeness(static_cast<Eigen::Index>(b));
  });
  std::vector<int> points(m);
  std::size_t cluster_rank = 1;
  for (std::size_t pos = 0; pos < m; ++pos) {
    if (pos > 0 && !rule.tied(closeness(static_cast<Eigen::Index>(order[pos - 1])),
                              closeness(static_cast<Eigen::Index>(order[pos]))))
      cluster_rank = pos + 1;
    points[order[pos]] = static_cast<int>(m + 1 - cluster_rank);
  }
  return points;
}

inline Eigen::MatrixXi hard_points(const ClosenessTable& ct, const TieRule& rule = {}) {
  ct.validate();
  Eigen::MatrixXi pts(ct.closeness.rows(), ct.closeness.cols());
  for (Eigen::Index j = 0; j < ct.closeness.cols(); ++j) {
    const auto col = column_points(ct.closeness.col(j), rule);
    for (Eigen::Index i = 0; i < pts.rows(); ++i) pts(i, j) = col[static_cast<std::size_t>(i)];
  }
  return pts;
}

struct SoftResult {
  Eigen::VectorXd scores;
  std::vector<int> ranks;
};

/// Mean closeness across strategies, ranked descending.
inline SoftResult soft_ensemble(const ClosenessTable& ct) {
  ct.validate();
  SoftResult r;
  r.scores = ct.closeness.rowwise().mean();
  r.ranks = mcdm::competition_ranks(r.scores);
  return r;
}

struct HardResult {
  Eigen::MatrixXi points;
  Eigen::VectorXi totals;
  std::vector<int> ranks;
};

/// Summed per-strategy points, ranked descending.
inline HardResult hard_ensemble(const ClosenessTable& ct, const TieRule& rule = {}) {
  HardResult r;
  r.points = hard_points(ct, rule);
  r.totals = r.points.rowwise().sum();
  r.ranks = mcdm::competition_ranks(r.totals.cast<double>());
  return r;
}

struct EnsembleResult {
  std::vector<std::string> models;
  std::vector<std::string> strategies;
  Eigen::MatrixXd closeness;
  Eigen::VectorXd soft_scores;
  std::vector<int> soft_ranks;
  Eigen::MatrixXi hard_points;
  Eigen::VectorXi hard_totals;
  std::vector<int> hard_ranks;
  std::string soft_best;
  std::string hard_best;
  std::vector<std::string> notes;  // how ties for first place were broken
};

namespace detail {

/// Index maximising primary, then secondary, then smallest name.
inline std::size_t pick_best(const std::vector<std::string>& names, const Eigen::VectorXd& primary,
                             const Eigen::VectorXd& secondary, const char* what, const char* tiebreak,
                             std::vector<std::string>& notes) {
  const double top = primary.maxCoeff();
  std::vector<std::size_t> leaders;
  for (std::size_t i = 0; i < names.size(); ++i)
    if (primary(static_cast<Eigen::Index>(i)) == top) leaders.push_back(i);
  std::size_t best = leaders.front();
  for (std::size_t i : leaders) {
    const double a = secondary(static_cast<Eigen::Index>(i)), b = secondary(static_cast<Eigen::Index>(best));
    if (a > b || (a == b && names[i] < names[best])) best = i;
  }
  if (leaders.size() > 1) {
    std::string msg = std::string(what) + " tie for first between";
    for (std::size_t i : leaders) msg += " " + names[i];
    msg += "; broken by " + std::string(tiebreak) + " then name -> " + names[best];
    notes.push_back(msg);
  }
  return best;
}

}  // namespace detail

inline EnsembleResult fuse(const ClosenessTable& ct, const TieRule& rule = {}) {
  const SoftResult soft = soft_ensemble(ct);
  const HardResult hard = hard_ensemble(ct, rule);
  EnsembleResult r;
  r.models = ct.models;
  r.strategies = ct.strategies;
  r.closeness = ct.closeness;
  r.soft_scores = soft.scores;
  r.soft_ranks = soft.ranks;
  r.hard_points = hard.points;
  r.hard_totals = hard.totals;
  r.hard_ranks = hard.ranks;
  const Eigen::VectorXd totals = hard.totals.cast<double>();
  r.soft_best = ct.models[detail::pick_best(ct.models, soft.scores, totals, "soft ensemble", "hard total", r.notes)];
  r.hard_best = ct.models[detail::pick_best(ct.models, totals, soft.scores, "hard ensemble", "soft score", r.notes)];
  return r;
}

}  // namespace coughsel::ensemble
