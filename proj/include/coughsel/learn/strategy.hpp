#pragma once

// The three training regimes: plain stratified CV, + SMOTE, + SMOTE with an
// inner grid search. All of them pick the decision threshold on training-fold
// predictions.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <future>
#include <string>
#include <variant>
#include <vector>

#include "coughsel/common.hpp"
#include "coughsel/learn/dataset.hpp"
#include "coughsel/learn/folds.hpp"
#include "coughsel/learn/knn.hpp"
#include "coughsel/learn/logreg.hpp"
#include "coughsel/learn/smote.hpp"
#include "coughsel/metrics.hpp"

namespace coughsel::learn {

enum class ModelKind { kKnn, kLogReg };

/// An in-repo classifier with its single hyper-parameter: n_neighbors for
/// k-NN, L2 strength for logistic regression.
struct ModelSpec {
  ModelKind kind = ModelKind::kKnn;
  double param = 5;
  std::vector<double> grid{5, 6, 7, 8};
  std::size_t max_iter = 1000;
  double tol = 1e-6;

  static ModelSpec knn() { return {}; }
  static ModelSpec logreg() { return {ModelKind::kLogReg, 1.0, {0.01, 0.1, 1, 10}}; }

  std::string name() const { return kind == ModelKind::kKnn ? "k-NN" : "LR"; }

  void validate() const {
    for (double v : grid) check(v);
    check(param);
    if (grid.empty()) throw InputError(name() + ": empty hyper-parameter grid");
  }

 private:
  void check(double v) const {
    if (kind == ModelKind::kKnn && !(v >= 1 && v == std::floor(v)))
      throw InputError("k-NN: n_neighbors must be a positive integer");
    if (kind == ModelKind::kLogReg && !(v >= 0 && std::isfinite(v)))
      throw InputError("LR: l2 strength must be finite and >= 0");
  }
};

class FittedModel {
 public:
  FittedModel(const ModelSpec& spec, const Dataset& train, double param) {
    if (spec.kind == ModelKind::kKnn) model_ = train_knn(train, static_cast<std::size_t>(param));
    else model_ = train_logreg(train, param, spec.max_iter, spec.tol);
  }

  Eigen::VectorXd predict(const Eigen::MatrixXd& x) const {
    if (const auto* k = std::get_if<KnnModel>(&model_)) return predict_knn(*k, x);
    return predict_logreg(std::get<LogRegModel>(model_), x);
  }

  const LogRegModel* logreg() const { return std::get_if<LogRegModel>(&model_); }

 private:
  std::variant<KnnModel, LogRegModel> model_;
};

enum class HyperMode { kFixed, kNestedGrid };

struct StrategyConfig {
  int id = 1;
  bool use_smote = false;
  bool threshold_moving = true;
  HyperMode hyper = HyperMode::kFixed;
  std::size_t outer_folds = 10;
  std::size_t inner_folds = 5;
  std::size_t smote_k = 5;
  std::vector<double> threshold_grid = metrics::default_threshold_grid();
  metrics::Metric objective = metrics::Metric::kF1;

  static StrategyConfig strategy(int id) {
    StrategyConfig c;
    c.id = id;
    switch (id) {
      case 1: break;
      case 2: c.use_smote = true; break;
      case 3:
        c.use_smote = true;
        c.hyper = HyperMode::kNestedGrid;
        break;
      default: throw InputError("strategy id must be 1, 2 or 3");
    }
    return c;
  }

  void validate() const {
    if (outer_folds < 2 || inner_folds < 2) throw InputError("strategy: fold counts must be >= 2");
    if (smote_k < 1) throw InputError("strategy: smote_k must be >= 1");
    if (threshold_grid.empty()) throw InputError("strategy: empty threshold grid");
  }
};

struct StrategyOutcome {
  metrics::PredictionSet predictions;  // out-of-fold, sorted by sample_id
  std::vector<double> fold_thresholds;
  std::vector<double> fold_params;
};

namespace detail {

inline metrics::PredictionSet as_predictions(const Dataset& ds, const Eigen::VectorXd& scores) {
  metrics::PredictionSet p;
  for (std::size_t i = 0; i < ds.size(); ++i)
    p.entries.push_back({ds.ids[i], ds.labels[i], std::clamp(scores(static_cast<Eigen::Index>(i)), 0.0, 1.0)});
  return p;
}

/// Grid value with the best mean inner-fold AUC; the first one wins ties.
inline double grid_search(const Dataset& train, const ModelSpec& spec, const StrategyConfig& cfg, std::uint64_t seed) {
  if (spec.grid.size() == 1) return spec.grid.front();
  const FoldPlan inner = stratified_kfold(train.labels, cfg.inner_folds, seed);
  double best_param = spec.grid.front(), best_auc = -1.0;
  for (double param : spec.grid) {
    double total = 0.0;
    for (std::size_t f = 0; f < cfg.inner_folds; ++f) {
      Dataset fit = train.subset(inner.train_indices(f));
      if (cfg.use_smote) fit = oversample(fit, cfg.smote_k, seed + 7919 * (f + 1));
      const Dataset held = train.subset(inner.test_indices(f));
      total += metrics::roc_auc(as_predictions(held, FittedModel(spec, fit, param).predict(held.features)).entries);
    }
    if (total > best_auc) {
      best_auc = total;
      best_param = param;
    }
  }
  return best_param;
}

struct FoldOutput {
  Eigen::VectorXd scores;
  double threshold = 0.5;
  double param = 0;
};

inline FoldOutput run_fold(const Dataset& ds, const FoldPlan& plan, std::size_t f, const ModelSpec& spec,
                           const StrategyConfig& cfg, std::uint64_t seed) {
  const Dataset train = ds.subset(plan.train_indices(f));
  const Dataset test = ds.subset(plan.test_indices(f));
  const std::uint64_t fold_seed = seed + 1000003 * (f + 1);
  FoldOutput out;
  out.param = cfg.hyper == HyperMode::kNestedGrid ? grid_search(train, spec, cfg, fold_seed) : spec.param;
  const Dataset fit = cfg.use_smote ? oversample(train, cfg.smote_k, fold_seed) : train;
  const FittedModel model(spec, fit, out.param);
  out.scores = model.predict(test.features);
  if (cfg.threshold_moving) {
    // Original training rows only; synthetic samples do not vote on the cutoff.
    metrics::PredictionSet in_sample = as_predictions(train, model.predict(train.features));
    try {
      out.threshold = metrics::threshold_sweep(in_sample, cfg.threshold_grid, cfg.objective);
    } catch (const DegenerateError&) {
      out.threshold = 0.5;
    }
  }
  return out;
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace detail

/// Outer stratified CV returning pooled out-of-fold scores. Folds run in
/// parallel; each draws its randomness from (seed, fold index) only. The
/// reported threshold is the median of the per-fold thresholds.
inline StrategyOutcome run_strategy(const Dataset& ds, const ModelSpec& spec, const StrategyConfig& cfg,
                                    std::uint64_t seed = kDefaultSeed) {
  ds.validate(true);
  spec.validate();
  cfg.validate();
  const FoldPlan plan = stratified_kfold(ds.labels, cfg.outer_folds, seed);
  std::vector<std::future<detail::FoldOutput>> jobs;
  for (std::size_t f = 0; f < cfg.outer_folds; ++f)
    jobs.push_back(std::async(std::launch::async, [&, f] { return detail::run_fold(ds, plan, f, spec, cfg, seed); }));
  std::vector<detail::FoldOutput> folds;
  for (auto& j : jobs) folds.push_back(j.get());

  Eigen::VectorXd scores(static_cast<Eigen::Index>(ds.size()));
  StrategyOutcome out;
  for (std::size_t f = 0; f < cfg.outer_folds; ++f) {
    const auto idx = plan.test_indices(f);
    for (std::size_t r = 0; r < idx.size(); ++r)
      scores(static_cast<Eigen::Index>(idx[r])) = folds[f].scores(static_cast<Eigen::Index>(r));
    out.fold_thresholds.push_back(folds[f].threshold);
    out.fold_params.push_back(folds[f].param);
  }
  out.predictions = detail::as_predictions(ds, scores);
  out.predictions.model = spec.name();
  out.predictions.strategy = std::to_string(cfg.id);
  out.predictions.threshold = detail::median(out.fold_thresholds);
  std::sort(out.predictions.entries.begin(), out.predictions.entries.end(),
            [](const auto& a, const auto& b) { return a.sample_id < b.sample_id; });
  return out;
}

}  // namespace coughsel::learn
