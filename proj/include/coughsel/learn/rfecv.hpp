#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <numeric>
#include <vector>

#include "coughsel/common.hpp"
#include "coughsel/learn/dataset.hpp"
#include "coughsel/learn/folds.hpp"
#include "coughsel/learn/logreg.hpp"
#include "coughsel/metrics.hpp"

namespace coughsel::learn {

struct RfecvPoint {
  std::size_t n_features = 0;
  double mean_auc = 0.0;
};

struct RfecvResult {
  std::vector<bool> mask;
  std::vector<std::size_t> selected;  // column indices, ascending
  std::vector<RfecvPoint> curve;      // strictly decreasing n_features
};

/// Mean held-out AUC of L2 logistic regression on `cols` over `plan`.
inline double cv_auc(const Dataset& ds, const std::vector<std::size_t>& cols, const FoldPlan& plan, double l2) {
  const Dataset view = ds.columns(cols);
  double total = 0.0;
  for (std::size_t f = 0; f < plan.k; ++f) {
    const Dataset test = view.subset(plan.test_indices(f));
    const Eigen::VectorXd s = predict_logreg(train_logreg(view.subset(plan.train_indices(f)), l2), test.features);
    std::vector<metrics::PredictionEntry> e;
    for (std::size_t i = 0; i < test.size(); ++i) e.push_back({test.ids[i], test.labels[i], s(static_cast<Eigen::Index>(i))});
    total += metrics::roc_auc(e);
  }
  return total / static_cast<double>(plan.k);
}

/// Recursive elimination with logistic |coefficient| importance: score the
/// current set by k-fold CV AUC, refit on all samples, drop the `step`
/// least important features (never the last one), repeat down to one
/// feature. Returns the best-scoring set, smallest on ties.
inline RfecvResult rfecv(const Dataset& ds, std::size_t step = 1, std::size_t k_folds = 5,
                         std::uint64_t seed = kDefaultSeed, double l2 = 1.0) {
  ds.validate(true);
  if (step < 1 || step >= ds.dim())
    throw InputError("rfecv: step must lie in [1, " + std::to_string(ds.dim()) + ")");
  const FoldPlan plan = stratified_kfold(ds.labels, k_folds, seed);
  std::vector<std::size_t> current(ds.dim());
  std::iota(current.begin(), current.end(), 0);
  std::vector<std::vector<std::size_t>> sets;
  RfecvResult r;
  while (true) {
    sets.push_back(current);
    r.curve.push_back({current.size(), cv_auc(ds, current, plan, l2)});
    if (current.size() == 1) break;
    const Eigen::VectorXd imp = train_logreg(ds.columns(current), l2).importance();
    std::vector<std::size_t> order(current.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return imp(static_cast<Eigen::Index>(a)) < imp(static_cast<Eigen::Index>(b));
    });
    const std::size_t drop = std::min(step, current.size() - 1);
    std::vector<bool> keep(current.size(), true);
    for (std::size_t i = 0; i < drop; ++i) keep[order[i]] = false;
    std::vector<std::size_t> next;
    for (std::size_t i = 0; i < current.size(); ++i)
      if (keep[i]) next.push_back(current[i]);
    current = std::move(next);
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < r.curve.size(); ++i)
    if (r.curve[i].mean_auc >= r.curve[best].mean_auc) best = i;  // later = smaller
  r.selected = sets[best];
  std::sort(r.selected.begin(), r.selected.end());
  r.mask.assign(ds.dim(), false);
  for (std::size_t c : r.selected) r.mask[c] = true;
  return r;
}

}  // namespace coughsel::learn
