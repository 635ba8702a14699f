#pragma once

// Readers and writers for every CSV/JSON artifact the tool exchanges.

#include <Eigen/Dense>
#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coughsel/ensemble.hpp"
#include "coughsel/io/csv.hpp"
#include "coughsel/learn/dataset.hpp"
#include "coughsel/learn/rfecv.hpp"
#include "coughsel/mcdm.hpp"
#include "coughsel/metrics.hpp"
#include "json.hpp"

namespace coughsel::io {

using Json = nlohmann::ordered_json;

/// JSON number at 9 significant digits, so reports round-trip like the CSVs.
inline Json json_real(double v) { return Json::parse(format_real(v)); }

// ---- features.csv ------------------------------------------------------------

struct FeatureTable {
  std::vector<std::string> ids;
  std::vector<std::optional<int>> labels;
  std::vector<std::string> names;
  Eigen::MatrixXd values;
};

inline std::string label_text(std::optional<int> label) {
  if (!label) return "";
  return *label == 1 ? "covid" : "non_covid";
}

inline std::optional<int> parse_label(std::string_view s, const std::string& where) {
  if (s.empty()) return std::nullopt;
  if (s == "covid" || s == "1") return 1;
  if (s == "non_covid" || s == "0") return 0;
  throw InputError(where + ": label must be covid|non_covid|1|0, got '" + std::string(s) + "'");
}

inline std::string write_features(const FeatureTable& t) {
  std::vector<std::string> header{"sample_id", "label"};
  header.insert(header.end(), t.names.begin(), t.names.end());
  CsvWriter w(header);
  for (std::size_t i = 0; i < t.ids.size(); ++i) {
    std::vector<std::string> row{t.ids[i], label_text(t.labels[i])};
    for (Eigen::Index j = 0; j < t.values.cols(); ++j) row.push_back(format_real(t.values(static_cast<Eigen::Index>(i), j)));
    w.row(row);
  }
  return w.str();
}

inline FeatureTable parse_features(const CsvTable& csv) {
  if (csv.header.size() < 3 || csv.header[0] != "sample_id" || csv.header[1] != "label")
    throw InputError(csv.source + ": features header must start with sample_id,label");
  FeatureTable t;
  t.names.assign(csv.header.begin() + 2, csv.header.end());
  t.values.resize(static_cast<Eigen::Index>(csv.rows.size()), static_cast<Eigen::Index>(t.names.size()));
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    const auto& row = csv.rows[i];
    t.ids.push_back(row[0]);
    t.labels.push_back(parse_label(row[1], where(csv, i)));
    for (std::size_t j = 0; j < t.names.size(); ++j)
      t.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = parse_real(row[j + 2], where(csv, i));
  }
  return t;
}

inline FeatureTable read_features(const std::filesystem::path& path) { return parse_features(read_csv(path)); }

/// Labelled view for training; every row must carry a label.
inline learn::Dataset to_dataset(const FeatureTable& t) {
  learn::Dataset ds;
  ds.features = t.values;
  ds.ids = t.ids;
  ds.feature_names = t.names;
  for (std::size_t i = 0; i < t.labels.size(); ++i) {
    if (!t.labels[i]) throw InputError("features: sample '" + t.ids[i] + "' has no label");
    ds.labels.push_back(*t.labels[i]);
  }
  ds.validate(true);
  return ds;
}

// ---- predictions.csv ---------------------------------------------------------

/// Groups in order of first appearance. An optional trailing `threshold`
/// column carries each group's cutoff; without it the cutoff is 0.5.
inline std::vector<metrics::PredictionSet> parse_predictions(const CsvTable& csv) {
  const std::size_t c_model = csv.column("model"), c_strategy = csv.column("strategy"),
                    c_id = csv.column("sample_id"), c_label = csv.column("true_label"), c_score = csv.column("score");
  const std::optional<std::size_t> c_thr =
      csv.has_column("threshold") ? std::optional(csv.column("threshold")) : std::nullopt;
  std::vector<metrics::PredictionSet> groups;
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    const auto& row = csv.rows[i];
    const auto key = std::make_pair(row[c_model], row[c_strategy]);
    if (key.first.empty() || key.second.empty()) throw InputError(where(csv, i) + ": empty model or strategy");
    auto [it, fresh] = index.emplace(key, groups.size());
    if (fresh) {
      groups.push_back({key.first, key.second, {}, 0.5});
      if (c_thr) groups.back().threshold = parse_real(row[*c_thr], where(csv, i));
    } else if (c_thr && parse_real(row[*c_thr], where(csv, i)) != groups[it->second].threshold) {
      throw InputError(where(csv, i) + ": threshold differs within group " + key.first + "/" + key.second);
    }
    const long label = parse_int(row[c_label], where(csv, i));
    if (label != 0 && label != 1) throw InputError(where(csv, i) + ": true_label must be 0 or 1");
    const double score = parse_real(row[c_score], where(csv, i));
    if (score < 0.0 || score > 1.0) throw InputError(where(csv, i) + ": score outside [0, 1]");
    groups[it->second].entries.push_back({row[c_id], static_cast<int>(label), score});
  }
  if (groups.empty()) throw InputError(csv.source + ": no predictions");
  for (const auto& g : groups) g.validate();
  return groups;
}

inline std::vector<metrics::PredictionSet> read_predictions(const std::filesystem::path& path) {
  return parse_predictions(read_csv(path));
}

inline std::string write_predictions(const std::vector<metrics::PredictionSet>& sets) {
  CsvWriter w({"model", "strategy", "sample_id", "true_label", "score", "threshold"});
  for (const auto& s : sets)
    for (const auto& e : s.entries)
      w.row({s.model, s.strategy, e.sample_id, std::to_string(e.label), format_real(e.score), format_real(s.threshold)});
  return w.str();
}

// ---- criteria.csv / decision_matrix.csv -------------------------------------

inline std::vector<metrics::CriterionSpec> parse_criteria(const CsvTable& csv) {
  const std::size_t c_name = csv.column("name"), c_dir = csv.column("direction");
  std::vector<metrics::CriterionSpec> out;
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    try {
      out.push_back({csv.rows[i][c_name], metrics::parse_direction(csv.rows[i][c_dir])});
    } catch (const InputError& e) {
      throw InputError(where(csv, i) + ": " + e.what());
    }
  }
  if (out.empty()) throw InputError(csv.source + ": no criteria");
  return out;
}

inline std::vector<metrics::CriterionSpec> read_criteria(const std::filesystem::path& path) {
  return parse_criteria(read_csv(path));
}

inline std::string write_criteria(const std::vector<metrics::CriterionSpec>& criteria) {
  CsvWriter w({"name", "direction"});
  for (const auto& c : criteria) w.row({c.name, std::string(metrics::direction_name(c.direction))});
  return w.str();
}

/// Columns are matched to `criteria` by name; extra columns are an error.
inline metrics::DecisionMatrix parse_decision_matrix(const CsvTable& csv,
                                                     const std::vector<metrics::CriterionSpec>& criteria) {
  if (csv.header.empty() || csv.header[0] != "model")
    throw InputError(csv.source + ": decision matrix header must start with 'model'");
  if (csv.header.size() != criteria.size() + 1)
    throw InputError(csv.source + ": " + std::to_string(csv.header.size() - 1) + " criterion columns, criteria file has " +
                     std::to_string(criteria.size()));
  metrics::DecisionMatrix dm;
  dm.criteria = criteria;
  dm.values.resize(static_cast<Eigen::Index>(csv.rows.size()), static_cast<Eigen::Index>(criteria.size()));
  for (std::size_t j = 0; j < criteria.size(); ++j) {
    const std::size_t c = csv.column(criteria[j].name);
    for (std::size_t i = 0; i < csv.rows.size(); ++i)
      dm.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = parse_real(csv.rows[i][c], where(csv, i));
  }
  for (const auto& row : csv.rows) dm.alternatives.push_back(row[0]);
  try {
    dm.validate();
  } catch (const InputError& e) {
    throw InputError(csv.source + ": " + e.what());
  }
  return dm;
}

inline metrics::DecisionMatrix read_decision_matrix(const std::filesystem::path& path,
                                                    const std::vector<metrics::CriterionSpec>& criteria) {
  return parse_decision_matrix(read_csv(path), criteria);
}

inline std::string write_decision_matrix(const metrics::DecisionMatrix& dm) {
  std::vector<std::string> header{"model"};
  for (const auto& c : dm.criteria) header.push_back(c.name);
  CsvWriter w(header);
  for (Eigen::Index i = 0; i < dm.rows(); ++i) {
    std::vector<std::string> row{dm.alternatives[static_cast<std::size_t>(i)]};
    for (Eigen::Index j = 0; j < dm.cols(); ++j) row.push_back(format_real(dm.values(i, j)));
    w.row(row);
  }
  return w.str();
}

// ---- weights.csv / topsis_report.csv ----------------------------------------

inline std::string write_weights(const std::vector<metrics::CriterionSpec>& criteria, const mcdm::WeightVector& w) {
  CsvWriter out({"criterion", "weight"});
  for (std::size_t j = 0; j < criteria.size(); ++j)
    out.row({criteria[j].name, format_real(w.values(static_cast<Eigen::Index>(j)))});
  return out.str();
}

/// Weight override file; rows matched to `criteria` by name.
inline mcdm::WeightVector read_weights(const std::filesystem::path& path,
                                       const std::vector<metrics::CriterionSpec>& criteria) {
  const CsvTable csv = read_csv(path);
  const std::size_t c_name = csv.column("criterion"), c_w = csv.column("weight");
  std::map<std::string, double> by_name;
  for (std::size_t i = 0; i < csv.rows.size(); ++i)
    if (!by_name.emplace(csv.rows[i][c_name], parse_real(csv.rows[i][c_w], where(csv, i))).second)
      throw InputError(where(csv, i) + ": duplicate criterion");
  if (by_name.size() != criteria.size()) throw InputError(csv.source + ": weights do not cover the criteria");
  mcdm::WeightVector w;
  w.values.resize(static_cast<Eigen::Index>(criteria.size()));
  for (std::size_t j = 0; j < criteria.size(); ++j) {
    const auto it = by_name.find(criteria[j].name);
    if (it == by_name.end()) throw InputError(csv.source + ": no weight for criterion '" + criteria[j].name + "'");
    w.values(static_cast<Eigen::Index>(j)) = it->second;
  }
  w.validate(criteria.size());
  return w;
}

inline std::string write_topsis_report(const std::vector<std::string>& models, const mcdm::TopsisResult& r) {
  CsvWriter w({"model", "closeness", "rank", "s_plus", "s_minus"});
  for (std::size_t i = 0; i < models.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    w.row({models[i], format_real(r.closeness(k)), std::to_string(r.ranks[i]), format_real(r.s_plus(k)),
           format_real(r.s_minus(k))});
  }
  return w.str();
}

// ---- closeness.csv / ensemble_report ----------------------------------------

inline ensemble::ClosenessTable parse_closeness(const CsvTable& csv) {
  const std::size_t c_model = csv.column("model"), c_strategy = csv.column("strategy"), c_c = csv.column("closeness");
  ensemble::ClosenessTable ct;
  std::map<std::pair<std::string, std::string>, double> cells;
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    const auto& row = csv.rows[i];
    if (std::find(ct.models.begin(), ct.models.end(), row[c_model]) == ct.models.end()) ct.models.push_back(row[c_model]);
    if (std::find(ct.strategies.begin(), ct.strategies.end(), row[c_strategy]) == ct.strategies.end())
      ct.strategies.push_back(row[c_strategy]);
    if (!cells.emplace(std::make_pair(row[c_model], row[c_strategy]), parse_real(row[c_c], where(csv, i))).second)
      throw InputError(where(csv, i) + ": duplicate (model, strategy) cell");
  }
  ct.closeness.resize(static_cast<Eigen::Index>(ct.models.size()), static_cast<Eigen::Index>(ct.strategies.size()));
  for (std::size_t i = 0; i < ct.models.size(); ++i)
    for (std::size_t j = 0; j < ct.strategies.size(); ++j) {
      const auto it = cells.find({ct.models[i], ct.strategies[j]});
      if (it == cells.end())
        throw InputError(csv.source + ": missing closeness for " + ct.models[i] + " under strategy " + ct.strategies[j]);
      ct.closeness(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = it->second;
    }
  ct.validate();
  return ct;
}

inline ensemble::ClosenessTable read_closeness(const std::filesystem::path& path) {
  return parse_closeness(read_csv(path));
}

inline std::string write_closeness(const ensemble::ClosenessTable& ct) {
  CsvWriter w({"model", "strategy", "closeness"});
  for (std::size_t i = 0; i < ct.models.size(); ++i)
    for (std::size_t j = 0; j < ct.strategies.size(); ++j)
      w.row({ct.models[i], ct.strategies[j],
             format_real(ct.closeness(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)))});
  return w.str();
}

inline std::string write_ensemble_report(const ensemble::EnsembleResult& r) {
  CsvWriter w({"model", "soft_score", "soft_rank", "hard_total", "hard_rank"});
  for (std::size_t i = 0; i < r.models.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    w.row({r.models[i], format_real(r.soft_scores(k)), std::to_string(r.soft_ranks[i]),
           std::to_string(r.hard_totals(k)), std::to_string(r.hard_ranks[i])});
  }
  return w.str();
}

inline Json ensemble_json(const ensemble::EnsembleResult& r) {
  Json models = Json::array();
  for (std::size_t i = 0; i < r.models.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    Json closeness = Json::object(), points = Json::object();
    for (std::size_t j = 0; j < r.strategies.size(); ++j) {
      closeness[r.strategies[j]] = json_real(r.closeness(k, static_cast<Eigen::Index>(j)));
      points[r.strategies[j]] = r.hard_points(k, static_cast<Eigen::Index>(j));
    }
    models.push_back({{"model", r.models[i]},
                      {"closeness", closeness},
                      {"soft_score", json_real(r.soft_scores(k))},
                      {"soft_rank", r.soft_ranks[i]},
                      {"points", points},
                      {"hard_total", r.hard_totals(k)},
                      {"hard_rank", r.hard_ranks[i]}});
  }
  return {{"strategies", r.strategies},
          {"models", models},
          {"soft_best", r.soft_best},
          {"hard_best", r.hard_best},
          {"notes", r.notes}};
}

// ---- rfecv_curve.csv ----------------------------------------------------------

inline std::string write_rfecv_curve(const learn::RfecvResult& r) {
  CsvWriter w({"n_features", "mean_auc"});
  for (const auto& p : r.curve) w.row({std::to_string(p.n_features), format_real(p.mean_auc)});
  return w.str();
}

}  // namespace coughsel::io
