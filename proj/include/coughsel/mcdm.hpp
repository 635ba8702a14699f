#pragma once

// Entropy-weighted TOPSIS over a DecisionMatrix.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "coughsel/common.hpp"
#include "coughsel/metrics.hpp"

namespace coughsel::mcdm {

using metrics::CriterionSpec;
using metrics::DecisionMatrix;
using metrics::Direction;

/// One non-negative weight per criterion, summing to 1.
struct WeightVector {
  Eigen::VectorXd values;

  void validate(std::size_t n_criteria) const {
    if (values.size() != static_cast<Eigen::Index>(n_criteria))
      throw InputError("weights: expected " + std::to_string(n_criteria) + " values, got " + std::to_string(values.size()));
    if (!values.allFinite() || values.minCoeff() < 0.0) throw InputError("weights: values must be finite and >= 0");
    if (std::abs(values.sum() - 1.0) > 1e-9) throw InputError("weights: values must sum to 1");
  }
};

/// Per-criterion entropy E_j alongside the derived weights.
struct EntropyResult {
  Eigen::VectorXd entropy;
  WeightVector weights;
};

/// Min-max standardise each column, project to proportions, take the
/// normalised Shannon entropy (0 ln 0 = 0), weight by 1 - E_j. A constant
/// column carries no information: E_j = 1, weight 0.
inline EntropyResult entropy_analysis(const DecisionMatrix& dm) {
  dm.validate();
  const Eigen::Index m = dm.rows(), n = dm.cols();
  const double log_m = std::log(static_cast<double>(m));
  EntropyResult out;
  out.entropy.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double lo = dm.values.col(j).minCoeff(), hi = dm.values.col(j).maxCoeff();
    if (hi == lo) {
      out.entropy(j) = 1.0;
      continue;
    }
    const Eigen::VectorXd standardised = (dm.values.col(j).array() - lo) / (hi - lo);
    const Eigen::VectorXd share = standardised / standardised.sum();
    double h = 0.0;
    for (Eigen::Index i = 0; i < m; ++i)
      if (share(i) > 0.0) h += share(i) * std::log(share(i));
    out.entropy(j) = -h / log_m;
  }
  const Eigen::VectorXd divergence = (1.0 - out.entropy.array()).matrix();
  const double total = divergence.sum();
  if (!(total > 0.0)) throw DegenerateError("entropy weights: every criterion column is constant");
  out.weights.values = divergence / total;
  return out;
}

inline WeightVector entropy_weights(const DecisionMatrix& dm) { return entropy_analysis(dm).weights; }

/// Ideal best (V+) and ideal worst (V-) rows of a weighted matrix: benefit
/// columns take max/min, cost columns min/max.
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> ideal_solutions(const Eigen::MatrixXd& weighted,
                                                                   const std::vector<CriterionSpec>& criteria) {
  if (weighted.cols() != static_cast<Eigen::Index>(criteria.size()))
    throw InputError("ideal_solutions: criteria count does not match columns");
  if (weighted.rows() < 1) throw InputError("ideal_solutions: empty matrix");
  if (!weighted.allFinite()) throw InputError("ideal_solutions: non-finite value");
  Eigen::VectorXd best(weighted.cols()), worst(weighted.cols());
  for (Eigen::Index j = 0; j < weighted.cols(); ++j) {
    const double hi = weighted.col(j).maxCoeff(), lo = weighted.col(j).minCoeff();
    const bool benefit = criteria[static_cast<std::size_t>(j)].direction == Direction::kBenefit;
    best(j) = benefit ? hi : lo;
    worst(j) = benefit ? lo : hi;
  }
  return {best, worst};
}

/// Competition ranking ("1-2-2-4") on descending score; only exactly equal
/// scores share a rank.
inline std::vector<int> competition_ranks(const Eigen::VectorXd& scores) {
  const auto m = static_cast<std::size_t>(scores.size());
  std::vector<int> ranks(m);
  for (std::size_t i = 0; i < m; ++i) {
    int better = 0;
    for (std::size_t k = 0; k < m; ++k)
      if (scores(static_cast<Eigen::Index>(k)) > scores(static_cast<Eigen::Index>(i))) ++better;
    ranks[i] = better + 1;
  }
  return ranks;
}

struct TopsisResult {
  Eigen::MatrixXd weighted;     // V = W * vector-normalised X
  Eigen::VectorXd ideal_best;   // V+
  Eigen::VectorXd ideal_worst;  // V-
  Eigen::VectorXd s_plus;
  Eigen::VectorXd s_minus;
  Eigen::VectorXd closeness;
  std::vector<int> ranks;
  std::vector<std::string> flags;  // degenerate cases hit, if any
};

inline TopsisResult topsis(const DecisionMatrix& dm, const WeightVector& w) {
  dm.validate();
  w.validate(dm.criteria.size());
  const Eigen::Index m = dm.rows(), n = dm.cols();
  TopsisResult r;
  r.weighted.resize(m, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double norm = dm.values.col(j).norm();
    if (norm == 0.0) {
      r.weighted.col(j).setZero();
      r.flags.push_back("criterion '" + dm.criteria[static_cast<std::size_t>(j)].name + "' is all zero; normalised to zeros");
    } else {
      r.weighted.col(j) = w.values(j) * dm.values.col(j) / norm;
    }
  }
  std::tie(r.ideal_best, r.ideal_worst) = ideal_solutions(r.weighted, dm.criteria);
  r.s_plus = (r.weighted.rowwise() - r.ideal_best.transpose()).rowwise().norm();
  r.s_minus = (r.weighted.rowwise() - r.ideal_worst.transpose()).rowwise().norm();
  const Eigen::VectorXd spread = r.s_plus + r.s_minus;
  if (spread.minCoeff() == 0.0) {
    r.closeness = Eigen::VectorXd::Constant(m, 0.5);
    r.flags.push_back("all alternatives coincide after weighting; closeness set to 0.5");
  } else {
    r.closeness = r.s_minus.cwiseQuotient(spread);
  }
  r.ranks = competition_ranks(r.closeness);
  return r;
}

}  // namespace coughsel::mcdm
