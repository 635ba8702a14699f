#pragma once

// Subcommand bodies. Each writes its artifacts under an output directory
// together with manifest.json, and returns the process exit code: 0, or 3
// when outputs were written but a degenerate case was flagged.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "coughsel/audio/features.hpp"
#include "coughsel/audio/wav.hpp"
#include "coughsel/cli/config.hpp"
#include "coughsel/ensemble.hpp"
#include "coughsel/io/csv.hpp"
#include "coughsel/io/formats.hpp"
#include "coughsel/learn/rfecv.hpp"
#include "coughsel/learn/strategy.hpp"
#include "coughsel/mcdm.hpp"
#include "coughsel/metrics.hpp"

#ifndef COUGHSEL_VERSION
#define COUGHSEL_VERSION "0.0.0"
#endif

namespace coughsel::cli {

namespace fs = std::filesystem;
using io::Json;

/// Inputs, configuration and produced files of one run. No timestamps or
/// host data, so equal runs give equal manifests.
class Manifest {
 public:
  Manifest(std::string command, const Config& cfg) : command_(std::move(command)), config_(cfg.entries()) {}

  void input(const fs::path& path) { inputs_.emplace_back(path.generic_string(), digest(io::read_file(path))); }
  void output(const std::string& name) { outputs_.push_back(name); }

  Json json() const {
    Json inputs = Json::array();
    for (const auto& [p, d] : inputs_) inputs.push_back({{"path", p}, {"fnv1a64", d}});
    Json config = Json::object();
    for (const auto& [k, v] : config_) config[k] = v;
    return {{"tool", "coughsel"},
            {"version", COUGHSEL_VERSION},
            {"command", command_},
            {"seed", std::stoull(config_.at("seed"))},
            {"config", config},
            {"inputs", inputs},
            {"outputs", outputs_}};
  }

  /// 64-bit FNV-1a, hex.
  static std::string digest(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
  }

 private:
  std::string command_;
  std::map<std::string, std::string> config_;
  std::vector<std::pair<std::string, std::string>> inputs_;
  std::vector<std::string> outputs_;
};

/// Writes files under one directory and records them in the manifest.
class OutputDir {
 public:
  OutputDir(fs::path root, Manifest& manifest) : root_(std::move(root)), manifest_(manifest) {
    fs::create_directories(root_);
  }

  void write(const std::string& name, std::string_view content) {
    io::write_file(root_ / name, content);
    manifest_.output(name);
  }

  /// Writes a JSON document that embeds the manifest as it stands,
  /// including this file.
  void write_with_manifest(const std::string& name, Json doc) {
    manifest_.output(name);
    doc["manifest"] = manifest_.json();
    io::write_file(root_ / name, doc.dump(2) + "\n");
  }

  void finish() { io::write_file(root_ / "manifest.json", manifest_.json().dump(2) + "\n"); }

  const fs::path& root() const { return root_; }

 private:
  fs::path root_;
  Manifest& manifest_;
};

/// Carries degenerate-case messages to the exit code.
struct Flags {
  std::vector<std::string> messages;
  void add(const std::string& m) { messages.push_back(m); }
  int exit_code(std::ostream& log) const {
    for (const auto& m : messages) log << "warning: " << m << "\n";
    return messages.empty() ? 0 : 3;
  }
};

/// Runs `fn`, prefixing any tool error with the stage name.
template <typename Fn>
auto staged(const std::string& stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const DegenerateError& e) {
    throw DegenerateError(stage + ": " + e.what());
  } catch (const InputError& e) {
    throw InputError(stage + ": " + e.what());
  }
}

inline void check_identifier(const std::string& s, const std::string& what) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.'; }))
    throw InputError(what + " '" + s + "' must be non-empty and use only letters, digits, '_', '-', '.'");
}

// ---- extract ---------------------------------------------------------------------

struct ExtractArgs {
  fs::path input_dir;
  fs::path out_dir;
  std::optional<fs::path> labels;  // defaults to <input_dir>/labels.csv when present
};

inline std::map<std::string, int> read_labels(const fs::path& path) {
  const io::CsvTable t = io::read_csv(path);
  const std::size_t c_id = t.column("sample_id"), c_label = t.column("label");
  std::map<std::string, int> out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto label = io::parse_label(t.rows[i][c_label], io::where(t, i));
    if (!label) throw InputError(io::where(t, i) + ": empty label");
    if (!out.emplace(t.rows[i][c_id], *label).second) throw InputError(io::where(t, i) + ": duplicate sample_id");
  }
  return out;
}

inline int cmd_extract(const ExtractArgs& args, const Config& cfg, std::ostream& log) {
  if (!fs::is_directory(args.input_dir)) throw InputError("extract: '" + args.input_dir.string() + "' is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(args.input_dir)) {
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (entry.is_regular_file() && ext == ".wav") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw InputError("extract: no .wav files in '" + args.input_dir.string() + "'");

  Manifest manifest("extract", cfg);
  std::map<std::string, int> labels;
  const fs::path label_path = args.labels.value_or(args.input_dir / "labels.csv");
  if (args.labels || fs::exists(label_path)) {
    labels = read_labels(label_path);
    manifest.input(label_path);
  }

  const audio::FeatureConfig fcfg = cfg.features();
  const int rate = cfg.sample_rate();
  std::vector<std::optional<std::vector<double>>> rows(files.size());
  std::vector<std::string> errors(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < files.size();) {
      try {
        rows[i] = audio::extract_features(audio::load_and_resample(files[i], rate), fcfg).flatten();
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const std::size_t n_threads =
      std::min(files.size(), cfg.threads() ? cfg.threads() : std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  io::FeatureTable table;
  table.names = audio::feature_names();
  std::vector<std::vector<double>> kept;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (!rows[i]) {
      log << "skipped " << files[i].filename().string() << ": " << errors[i] << "\n";
      continue;
    }
    manifest.input(files[i]);
    const std::string id = files[i].stem().string();
    table.ids.push_back(id);
    const auto it = labels.find(id);
    table.labels.push_back(it == labels.end() ? std::nullopt : std::optional<int>(it->second));
    kept.push_back(*rows[i]);
  }
  if (kept.empty()) throw InputError("extract: every file failed to decode");
  table.values.resize(static_cast<Eigen::Index>(kept.size()), static_cast<Eigen::Index>(audio::kFeatureDim));
  for (std::size_t i = 0; i < kept.size(); ++i)
    for (std::size_t j = 0; j < audio::kFeatureDim; ++j)
      table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = kept[i][j];

  OutputDir out(args.out_dir, manifest);
  out.write("features.csv", io::write_features(table));
  out.finish();
  log << "extracted " << kept.size() << " of " << files.size() << " files\n";
  return 0;
}

// ---- evaluate --------------------------------------------------------------------

struct EvaluateArgs {
  std::vector<fs::path> predictions;
  std::vector<fs::path> matrices;  // bypass: validate and pass through
  std::optional<fs::path> criteria;
  fs::path out_dir;
};

struct Evaluation {
  std::vector<std::string> strategies;  // sorted
  std::vector<metrics::DecisionMatrix> matrices;
  std::string report_csv;
};

/// One decision matrix per strategy, rows in first-appearance order.
inline Evaluation evaluate_predictions(const std::vector<metrics::PredictionSet>& sets,
                                       const std::vector<metrics::CriterionSpec>& criteria, Flags& flags) {
  std::map<std::string, std::vector<std::pair<std::string, metrics::EvaluationReport>>> by_strategy;
  std::vector<std::string> header{"model", "strategy"};
  for (metrics::Metric m : metrics::kAllMetrics) header.emplace_back(metrics::metric_name(m));
  for (const char* h : {"tp", "fp", "tn", "fn", "threshold", "degenerate"}) header.emplace_back(h);
  io::CsvWriter report(header);
  for (const auto& s : sets) {
    check_identifier(s.strategy, "strategy id");
    auto& group = by_strategy[s.strategy];
    for (const auto& [name, r] : group)
      if (name == s.model) throw InputError("predictions: model '" + s.model + "' repeated in strategy " + s.strategy);
    const auto r = metrics::evaluate(s);
    group.emplace_back(s.model, r);
    std::vector<std::string> row{s.model, s.strategy};
    for (metrics::Metric m : metrics::kAllMetrics) row.push_back(io::format_real(r.get(m)));
    std::string degenerate;
    for (metrics::Metric m : r.degenerate) {
      degenerate += (degenerate.empty() ? "" : ";") + std::string(metrics::metric_name(m));
      flags.add(s.model + " / strategy " + s.strategy + ": " + std::string(metrics::metric_name(m)) +
                " undefined (0/0), reported as 0");
    }
    for (std::size_t v : {r.counts.tp, r.counts.fp, r.counts.tn, r.counts.fn}) row.push_back(std::to_string(v));
    row.push_back(io::format_real(s.threshold));
    row.push_back(degenerate);
    report.row(row);
  }
  Evaluation ev;
  for (const auto& [strategy, reports] : by_strategy) {
    if (reports.size() < 2)
      throw InputError("strategy " + strategy + " has a single model ('" + reports.front().first +
                       "'); ranking needs at least two");
    ev.strategies.push_back(strategy);
    ev.matrices.push_back(metrics::build_decision_matrix(reports, criteria));
  }
  ev.report_csv = report.str();
  return ev;
}

inline std::vector<metrics::CriterionSpec> load_criteria(const std::optional<fs::path>& path, Manifest& manifest) {
  if (!path) return metrics::default_criteria();
  manifest.input(*path);
  return io::read_criteria(*path);
}

inline std::string matrix_file(const std::string& strategy) { return "decision_matrix_" + strategy + ".csv"; }

/// Strategy id of a matrix file: the part after "decision_matrix_", or the stem.
inline std::string strategy_of(const fs::path& matrix) {
  const std::string stem = matrix.stem().string();
  const std::string prefix = "decision_matrix_";
  return stem.rfind(prefix, 0) == 0 ? stem.substr(prefix.size()) : stem;
}

inline int cmd_evaluate(const EvaluateArgs& args, const Config& cfg, std::ostream& log) {
  if (args.predictions.empty() && args.matrices.empty())
    throw InputError("evaluate: give a predictions file or --matrix files");
  Manifest manifest("evaluate", cfg);
  const auto criteria = load_criteria(args.criteria, manifest);
  Flags flags;
  std::vector<std::pair<std::string, metrics::DecisionMatrix>> matrices;
  std::string report;
  if (!args.predictions.empty()) {
    std::vector<metrics::PredictionSet> sets;
    for (const auto& p : args.predictions) {
      manifest.input(p);
      auto more = io::read_predictions(p);
      sets.insert(sets.end(), more.begin(), more.end());
    }
    auto ev = evaluate_predictions(sets, criteria, flags);
    for (std::size_t i = 0; i < ev.strategies.size(); ++i) matrices.emplace_back(ev.strategies[i], ev.matrices[i]);
    report = ev.report_csv;
  }
  for (const auto& m : args.matrices) {
    manifest.input(m);
    const std::string s = strategy_of(m);
    check_identifier(s, "strategy id");
    for (const auto& [have, dm] : matrices)
      if (have == s) throw InputError("evaluate: strategy '" + s + "' given twice");
    matrices.emplace_back(s, io::read_decision_matrix(m, criteria));
  }
  OutputDir out(args.out_dir, manifest);
  out.write("criteria.csv", io::write_criteria(criteria));
  if (!report.empty()) out.write("evaluation.csv", report);
  for (const auto& [s, dm] : matrices) {
    out.write(matrix_file(s), io::write_decision_matrix(dm));
    log << "strategy " << s << ": " << dm.rows() << " models x " << dm.cols() << " criteria\n";
  }
  out.finish();
  return flags.exit_code(log);
}

// ---- rank ------------------------------------------------------------------------

struct RankArgs {
  std::vector<fs::path> matrices;
  std::optional<fs::path> criteria;
  std::optional<fs::path> weights;  // override for every strategy
  fs::path out_dir;
};

struct StrategyRanking {
  std::string strategy;
  metrics::DecisionMatrix matrix;  // rows sorted by model name
  mcdm::EntropyResult entropy;
  mcdm::WeightVector weights;
  mcdm::TopsisResult topsis;
};

struct Ranking {
  std::vector<StrategyRanking> strategies;
  ensemble::EnsembleResult ensemble;
};

/// Rows ordered by model name so results do not depend on input row order.
inline metrics::DecisionMatrix sorted_rows(const metrics::DecisionMatrix& dm) {
  std::vector<std::size_t> order(dm.alternatives.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dm.alternatives[a] < dm.alternatives[b]; });
  metrics::DecisionMatrix out = dm;
  for (std::size_t i = 0; i < order.size(); ++i) {
    out.alternatives[i] = dm.alternatives[order[i]];
    out.values.row(static_cast<Eigen::Index>(i)) = dm.values.row(static_cast<Eigen::Index>(order[i]));
  }
  return out;
}

inline Ranking rank_matrices(const std::vector<std::pair<std::string, metrics::DecisionMatrix>>& inputs,
                             const std::optional<mcdm::WeightVector>& override_weights,
                             const ensemble::TieRule& rule, Flags& flags) {
  if (inputs.empty()) throw InputError("rank: no decision matrices");
  Ranking r;
  for (const auto& [s, dm] : inputs) {
    StrategyRanking sr;
    sr.strategy = s;
    sr.matrix = sorted_rows(dm);
    if (!r.strategies.empty()) {
      const auto& first = r.strategies.front();
      if (sr.matrix.alternatives != first.matrix.alternatives)
        throw InputError("rank: strategy " + s + " has a different model set than strategy " + first.strategy);
      if (sr.matrix.criteria != first.matrix.criteria)
        throw InputError("rank: strategy " + s + " has different criteria than strategy " + first.strategy);
    }
    sr.entropy = staged("entropy weights, strategy " + s, [&] { return mcdm::entropy_analysis(sr.matrix); });
    sr.weights = override_weights ? *override_weights : sr.entropy.weights;
    sr.topsis = mcdm::topsis(sr.matrix, sr.weights);
    for (const auto& f : sr.topsis.flags) flags.add("strategy " + s + ": " + f);
    r.strategies.push_back(std::move(sr));
  }
  ensemble::ClosenessTable ct;
  ct.models = r.strategies.front().matrix.alternatives;
  ct.closeness.resize(static_cast<Eigen::Index>(ct.models.size()), static_cast<Eigen::Index>(r.strategies.size()));
  for (std::size_t j = 0; j < r.strategies.size(); ++j) {
    ct.strategies.push_back(r.strategies[j].strategy);
    ct.closeness.col(static_cast<Eigen::Index>(j)) = r.strategies[j].topsis.closeness;
  }
  r.ensemble = ensemble::fuse(ct, rule);
  return r;
}

inline std::string summary_text(const Ranking& r) {
  std::ostringstream s;
  const auto& e = r.ensemble;
  s << "model";
  for (const auto& st : e.strategies) s << "  C[" << st << "]";
  s << "  soft(rank)  points  hard(rank)\n";
  for (std::size_t i = 0; i < e.models.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    s << e.models[i];
    for (Eigen::Index j = 0; j < e.closeness.cols(); ++j) s << "  " << io::format_real(std::round(e.closeness(k, j) * 1000) / 1000);
    s << "  " << io::format_real(std::round(e.soft_scores(k) * 1000) / 1000) << "(" << e.soft_ranks[i] << ")  ";
    for (Eigen::Index j = 0; j < e.hard_points.cols(); ++j) s << (j ? "+" : "") << e.hard_points(k, j);
    s << "  " << e.hard_totals(k) << "(" << e.hard_ranks[i] << ")\n";
  }
  s << "soft_best: " << e.soft_best << "\n";
  s << "hard_best: " << e.hard_best << "\n";
  for (const auto& n : e.notes) s << "note: " << n << "\n";
  return s.str();
}

/// Writes weights, TOPSIS and ensemble reports plus report.json.
inline void write_ranking(const Ranking& r, OutputDir& out, std::ostream& log) {
  Json weights = Json::object(), topsis = Json::object();
  for (const auto& sr : r.strategies) {
    const std::string dir = "strategy_" + sr.strategy + "/";
    out.write(dir + "weights.csv", io::write_weights(sr.matrix.criteria, sr.weights));
    out.write(dir + "topsis_report.csv", io::write_topsis_report(sr.matrix.alternatives, sr.topsis));
    Json w = Json::object();
    for (std::size_t j = 0; j < sr.matrix.criteria.size(); ++j)
      w[sr.matrix.criteria[j].name] = io::json_real(sr.weights.values(static_cast<Eigen::Index>(j)));
    weights[sr.strategy] = w;
    Json rows = Json::array(), best = Json::object(), worst = Json::object();
    for (std::size_t i = 0; i < sr.matrix.alternatives.size(); ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      rows.push_back({{"model", sr.matrix.alternatives[i]},
                      {"closeness", io::json_real(sr.topsis.closeness(k))},
                      {"rank", sr.topsis.ranks[i]},
                      {"s_plus", io::json_real(sr.topsis.s_plus(k))},
                      {"s_minus", io::json_real(sr.topsis.s_minus(k))}});
    }
    for (std::size_t j = 0; j < sr.matrix.criteria.size(); ++j) {
      best[sr.matrix.criteria[j].name] = io::json_real(sr.topsis.ideal_best(static_cast<Eigen::Index>(j)));
      worst[sr.matrix.criteria[j].name] = io::json_real(sr.topsis.ideal_worst(static_cast<Eigen::Index>(j)));
    }
    topsis[sr.strategy] = {{"ideal_best", best}, {"ideal_worst", worst}, {"alternatives", rows}, {"flags", sr.topsis.flags}};
  }
  ensemble::ClosenessTable ct{r.ensemble.models, r.ensemble.strategies, r.ensemble.closeness};
  out.write("closeness.csv", io::write_closeness(ct));
  out.write("ensemble_report.csv", io::write_ensemble_report(r.ensemble));
  out.write("ensemble.json", io::ensemble_json(r.ensemble).dump(2) + "\n");
  const std::string summary = summary_text(r);
  out.write("summary.txt", summary);
  out.write_with_manifest("report.json",
                          {{"weights", weights}, {"topsis", topsis}, {"ensemble", io::ensemble_json(r.ensemble)}});
  log << summary;
}

inline int cmd_rank(const RankArgs& args, const Config& cfg, std::ostream& log) {
  if (args.matrices.empty()) throw InputError("rank: give at least one decision matrix file");
  Manifest manifest("rank", cfg);
  const auto criteria = load_criteria(args.criteria, manifest);
  std::vector<std::pair<std::string, metrics::DecisionMatrix>> inputs;
  for (const auto& m : args.matrices) {
    manifest.input(m);
    const std::string s = strategy_of(m);
    check_identifier(s, "strategy id");
    for (const auto& [have, dm] : inputs)
      if (have == s) throw InputError("rank: strategy '" + s + "' given twice");
    inputs.emplace_back(s, io::read_decision_matrix(m, criteria));
  }
  std::optional<mcdm::WeightVector> w;
  if (args.weights) {
    manifest.input(*args.weights);
    w = io::read_weights(*args.weights, criteria);
  }
  Flags flags;
  const Ranking r = rank_matrices(inputs, w, cfg.tie_rule(), flags);
  OutputDir out(args.out_dir, manifest);
  write_ranking(r, out, log);
  out.finish();
  return flags.exit_code(log);
}

// ---- pipeline --------------------------------------------------------------------

struct PipelineArgs {
  fs::path features;
  std::vector<fs::path> predictions;  // external models
  std::optional<fs::path> criteria;
  fs::path out_dir;
};

/// Out-of-fold predictions of every configured in-repo model under every
/// configured strategy, in (strategy, model) order.
inline std::vector<metrics::PredictionSet> train_models(const learn::Dataset& ds, const Config& cfg, std::ostream& log) {
  std::vector<metrics::PredictionSet> sets;
  for (int id : cfg.strategies())
    for (const auto& spec : cfg.models()) {
      auto outcome = staged("strategy " + std::to_string(id) + " / " + spec.name(),
                            [&] { return learn::run_strategy(ds, spec, cfg.strategy(id), cfg.seed()); });
      log << "trained " << spec.name() << " under strategy " << id << " (threshold "
          << io::format_real(outcome.predictions.threshold) << ")\n";
      sets.push_back(std::move(outcome.predictions));
    }
  return sets;
}

inline int cmd_pipeline(const PipelineArgs& args, const Config& cfg, std::ostream& log) {
  Manifest manifest("pipeline", cfg);
  manifest.input(args.features);
  const learn::Dataset ds = staged("features", [&] { return io::to_dataset(io::read_features(args.features)); });
  const auto criteria = load_criteria(args.criteria, manifest);
  std::vector<metrics::PredictionSet> sets = train_models(ds, cfg, log);
  for (const auto& p : args.predictions) {
    manifest.input(p);
    auto more = staged("external predictions", [&] { return io::read_predictions(p); });
    sets.insert(sets.end(), more.begin(), more.end());
  }
  Flags flags;
  const Evaluation ev = staged("evaluate", [&] {
    try {
      return evaluate_predictions(sets, criteria, flags);
    } catch (const InputError& e) {
      if (std::string(e.what()).find("single model") == std::string::npos) throw;
      throw InputError(std::string(e.what()) +
                       "; enable both in-repo models (models = knn,lr) or merge external predictions with --predictions");
    }
  });
  std::vector<std::pair<std::string, metrics::DecisionMatrix>> inputs;
  for (std::size_t i = 0; i < ev.strategies.size(); ++i) inputs.emplace_back(ev.strategies[i], ev.matrices[i]);
  const Ranking r = staged("rank", [&] { return rank_matrices(inputs, std::nullopt, cfg.tie_rule(), flags); });

  OutputDir out(args.out_dir, manifest);
  out.write("predictions.csv", io::write_predictions(sets));
  out.write("evaluation.csv", ev.report_csv);
  out.write("criteria.csv", io::write_criteria(criteria));
  for (const auto& [s, dm] : inputs) out.write(matrix_file(s), io::write_decision_matrix(dm));
  write_ranking(r, out, log);
  out.finish();
  return flags.exit_code(log);
}

// ---- rfecv -----------------------------------------------------------------------

struct RfecvArgs {
  fs::path features;
  fs::path out_dir;
};

inline int cmd_rfecv(const RfecvArgs& args, const Config& cfg, std::ostream& log) {
  Manifest manifest("rfecv", cfg);
  manifest.input(args.features);
  const learn::Dataset ds = staged("features", [&] { return io::to_dataset(io::read_features(args.features)); });
  const auto r = learn::rfecv(ds, cfg.rfecv_step(), cfg.rfecv_folds(), cfg.seed(), cfg.rfecv_l2());
  io::CsvWriter sel({"feature", "selected"});
  for (std::size_t j = 0; j < ds.dim(); ++j) sel.row({ds.feature_names[j], r.mask[j] ? "1" : "0"});
  OutputDir out(args.out_dir, manifest);
  out.write("rfecv_curve.csv", io::write_rfecv_curve(r));
  out.write("selected_features.csv", sel.str());
  out.finish();
  log << "selected " << r.selected.size() << " of " << ds.dim() << " features\n";
  return 0;
}

}  // namespace coughsel::cli
