#pragma once

// Binary-classification criteria and the decision matrix they feed.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "coughsel/common.hpp"

namespace coughsel::metrics {

struct PredictionEntry {
  std::string sample_id;
  int label = 0;  // 1 = positive (COVID-19), 0 = negative
  double score = 0.0;
};

/// Scores of one model under one training strategy.
struct PredictionSet {
  std::string model;
  std::string strategy;
  std::vector<PredictionEntry> entries;
  double threshold = 0.5;

  std::size_t positives() const {
    return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [](const auto& e) { return e.label == 1; }));
  }
  std::size_t negatives() const { return entries.size() - positives(); }

  void validate() const {
    if (entries.empty()) throw InputError("predictions '" + model + "': no entries");
    if (!(threshold > 0.0 && threshold < 1.0))
      throw InputError("predictions '" + model + "': threshold must lie in (0, 1)");
    for (const auto& e : entries) {
      if (e.label != 0 && e.label != 1)
        throw InputError("predictions '" + model + "': label of '" + e.sample_id + "' is not 0/1");
      if (!std::isfinite(e.score) || e.score < 0.0 || e.score > 1.0)
        throw InputError("predictions '" + model + "': score of '" + e.sample_id + "' outside [0, 1]");
    }
  }
};

struct Confusion {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  std::size_t total() const { return tp + fp + tn + fn; }
  friend bool operator==(const Confusion&, const Confusion&) = default;
};

/// Predicted positive iff score >= threshold.
inline Confusion confusion_counts(const PredictionSet& preds) {
  preds.validate();
  Confusion c;
  for (const auto& e : preds.entries) {
    const bool predicted = e.score >= preds.threshold;
    if (e.label == 1) (predicted ? c.tp : c.fn)++;
    else (predicted ? c.fp : c.tn)++;
  }
  return c;
}

enum class Metric { kAcc, kAuc, kPrecision, kRecall, kSpecificity, kF1, kFpr, kFnr };

inline constexpr std::array<Metric, 8> kAllMetrics{Metric::kAcc,         Metric::kAuc, Metric::kPrecision,
                                                   Metric::kRecall,      Metric::kSpecificity, Metric::kF1,
                                                   Metric::kFpr,         Metric::kFnr};

inline std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::kAcc: return "acc";
    case Metric::kAuc: return "auc";
    case Metric::kPrecision: return "precision";
    case Metric::kRecall: return "recall";
    case Metric::kSpecificity: return "specificity";
    case Metric::kF1: return "f1";
    case Metric::kFpr: return "fpr";
    case Metric::kFnr: return "fnr";
  }
  return "?";
}

inline std::optional<Metric> parse_metric(std::string_view name) {
  for (Metric m : kAllMetrics)
    if (metric_name(m) == name) return m;
  return std::nullopt;
}

/// The eight criteria. Ratios with a zero denominator are reported as 0 and
/// listed in `degenerate`.
struct EvaluationReport {
  double acc = 0, auc = 0, precision = 0, recall = 0, specificity = 0, f1 = 0, fpr = 0, fnr = 0;
  Confusion counts;
  std::vector<Metric> degenerate;

  double get(Metric m) const {
    switch (m) {
      case Metric::kAcc: return acc;
      case Metric::kAuc: return auc;
      case Metric::kPrecision: return precision;
      case Metric::kRecall: return recall;
      case Metric::kSpecificity: return specificity;
      case Metric::kF1: return f1;
      case Metric::kFpr: return fpr;
      case Metric::kFnr: return fnr;
    }
    return 0.0;
  }

  bool is_degenerate(Metric m) const { return std::find(degenerate.begin(), degenerate.end(), m) != degenerate.end(); }
};

/// Mann-Whitney estimate of ROC-AUC; tied positive/negative pairs count 1/2.
inline double roc_auc(const std::vector<PredictionEntry>& entries) {
  std::vector<std::size_t> order(entries.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return entries[a].score < entries[b].score; });
  double positive_rank_sum = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && entries[order[j]].score == entries[order[i]].score) ++j;
    const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);  // average of ranks i+1..j
    for (std::size_t k = i; k < j; ++k) {
      if (entries[order[k]].label == 1) {
        positive_rank_sum += mid_rank;
        ++n_pos;
      }
    }
    i = j;
  }
  const std::size_t n_neg = entries.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) throw InputError("roc_auc: both classes must be present");
  const double np = static_cast<double>(n_pos);
  return (positive_rank_sum - np * (np + 1.0) / 2.0) / (np * static_cast<double>(n_neg));
}

inline EvaluationReport evaluate(const PredictionSet& preds) {
  const Confusion c = confusion_counts(preds);
  if (c.tp + c.fn == 0 || c.tn + c.fp == 0)
    throw InputError("evaluate '" + preds.model + "': both classes must be present");
  EvaluationReport r;
  r.counts = c;
  auto ratio = [&r](std::size_t num, std::size_t den, Metric m) {
    if (den == 0) {
      r.degenerate.push_back(m);
      return 0.0;
    }
    return static_cast<double>(num) / static_cast<double>(den);
  };
  r.acc = ratio(c.tp + c.tn, c.total(), Metric::kAcc);
  r.precision = ratio(c.tp, c.tp + c.fp, Metric::kPrecision);
  r.recall = ratio(c.tp, c.tp + c.fn, Metric::kRecall);
  r.specificity = ratio(c.tn, c.tn + c.fp, Metric::kSpecificity);
  r.fpr = 1.0 - r.specificity;
  r.fnr = 1.0 - r.recall;
  if (r.is_degenerate(Metric::kPrecision)) {
    r.f1 = 0.0;
    r.degenerate.push_back(Metric::kF1);
  } else if (r.precision + r.recall == 0.0) {
    r.f1 = 0.0;
    r.degenerate.push_back(Metric::kF1);
  } else {
    r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
  }
  r.auc = roc_auc(preds.entries);
  return r;
}

/// {0.01, 0.02, ..., 0.99}
inline std::vector<double> default_threshold_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 99; ++i) grid.push_back(i / 100.0);
  return grid;
}

/// Grid cutoff maximising `objective`; ties go to the cutoff nearest 0.5,
/// then to the smaller one. Cutoffs where the objective is degenerate are skipped.
inline double threshold_sweep(const PredictionSet& preds, const std::vector<double>& grid, Metric objective = Metric::kF1) {
  if (grid.empty()) throw InputError("threshold_sweep: empty grid");
  std::optional<double> best_cut;
  double best_value = 0.0;
  PredictionSet probe = preds;
  for (double cut : grid) {
    if (!(cut > 0.0 && cut < 1.0)) throw InputError("threshold_sweep: cutoffs must lie in (0, 1)");
    probe.threshold = cut;
    const EvaluationReport r = evaluate(probe);
    if (r.is_degenerate(objective)) continue;
    const double v = r.get(objective);
    bool better = !best_cut || v > best_value;
    if (best_cut && v == best_value) {
      const double d_new = std::abs(cut - 0.5), d_old = std::abs(*best_cut - 0.5);
      better = d_new < d_old || (d_new == d_old && cut < *best_cut);
    }
    if (better) {
      best_cut = cut;
      best_value = v;
    }
  }
  if (!best_cut)
    throw DegenerateError("threshold_sweep: objective '" + std::string(metric_name(objective)) +
                          "' undefined at every cutoff");
  return *best_cut;
}

// ---- Decision matrix ---------------------------------------------------------

enum class Direction { kBenefit, kCost };

inline std::string_view direction_name(Direction d) { return d == Direction::kBenefit ? "benefit" : "cost"; }

inline Direction parse_direction(std::string_view s) {
  if (s == "benefit") return Direction::kBenefit;
  if (s == "cost") return Direction::kCost;
  throw InputError("unknown criterion direction '" + std::string(s) + "' (expected benefit|cost)");
}

struct CriterionSpec {
  std::string name;
  Direction direction = Direction::kBenefit;
  friend bool operator==(const CriterionSpec&, const CriterionSpec&) = default;
};

/// acc, auc, precision, recall, specificity, f1 (benefit); fpr, fnr (cost).
inline std::vector<CriterionSpec> default_criteria() {
  std::vector<CriterionSpec> out;
  for (Metric m : kAllMetrics)
    out.push_back({std::string(metric_name(m)),
                   m == Metric::kFpr || m == Metric::kFnr ? Direction::kCost : Direction::kBenefit});
  return out;
}

/// m alternatives scored on n criteria.
struct DecisionMatrix {
  std::vector<std::string> alternatives;
  std::vector<CriterionSpec> criteria;
  Eigen::MatrixXd values;

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }

  void validate() const {
    if (alternatives.size() < 2) throw InputError("decision matrix: at least two alternatives required");
    if (criteria.empty()) throw InputError("decision matrix: at least one criterion required");
    if (values.rows() != static_cast<Eigen::Index>(alternatives.size()) ||
        values.cols() != static_cast<Eigen::Index>(criteria.size()))
      throw InputError("decision matrix: shape does not match labels");
    if (!values.allFinite()) throw InputError("decision matrix: non-finite value");
    if (std::set<std::string>(alternatives.begin(), alternatives.end()).size() != alternatives.size())
      throw InputError("decision matrix: duplicate alternative name");
    std::set<std::string> names;
    for (const auto& c : criteria)
      if (!names.insert(c.name).second) throw InputError("decision matrix: duplicate criterion '" + c.name + "'");
  }
};

/// Row i = reports[i] projected onto `criteria`, in input order.
inline DecisionMatrix build_decision_matrix(const std::vector<std::pair<std::string, EvaluationReport>>& reports,
                                            const std::vector<CriterionSpec>& criteria = default_criteria()) {
  DecisionMatrix dm;
  dm.criteria = criteria;
  dm.values.resize(static_cast<Eigen::Index>(reports.size()), static_cast<Eigen::Index>(criteria.size()));
  for (std::size_t j = 0; j < criteria.size(); ++j)
    if (!parse_metric(criteria[j].name)) throw InputError("decision matrix: report has no criterion '" + criteria[j].name + "'");
  for (std::size_t i = 0; i < reports.size(); ++i) {
    dm.alternatives.push_back(reports[i].first);
    for (std::size_t j = 0; j < criteria.size(); ++j)
      dm.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = reports[i].second.get(*parse_metric(criteria[j].name));
  }
  dm.validate();
  return dm;
}

}  // namespace coughsel::metrics
