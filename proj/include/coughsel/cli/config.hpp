#pragma once

// Key-value run configuration. One `key = value` per line, '#' starts a
// comment. Lists are comma separated; a numeric range may be written
// start:step:stop.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "coughsel/audio/features.hpp"
#include "coughsel/ensemble.hpp"
#include "coughsel/io/csv.hpp"
#include "coughsel/learn/strategy.hpp"
#include "coughsel/metrics.hpp"

namespace coughsel::cli {

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace detail

class Config {
 public:
  Config() {
    values_ = {
        {"seed", "42"},
        {"sample_rate", "22050"},
        {"n_fft", "2048"},
        {"hop", "512"},
        {"contrast_alpha", "0.02"},
        {"threads", "0"},
        {"strategies", "1,2,3"},
        {"models", "knn,lr"},
        {"knn_neighbors", "5"},
        {"knn_grid", "5,6,7,8"},
        {"logreg_l2", "1"},
        {"logreg_grid", "0.01,0.1,1,10"},
        {"logreg_max_iter", "1000"},
        {"logreg_tol", "1e-6"},
        {"smote_k", "5"},
        {"outer_folds", "10"},
        {"inner_folds", "5"},
        {"threshold_grid", "0.01:0.01:0.99"},
        {"objective", "f1"},
        {"tie_mode", "relative"},
        {"tie_eps", "0.002"},
        {"tie_decimals", "2"},
        {"rfecv_step", "1"},
        {"rfecv_folds", "5"},
        {"rfecv_l2", "1"},
    };
  }

  static Config parse(std::string_view text, const std::string& source) {
    Config c;
    std::size_t line_no = 0;
    std::stringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      line = detail::trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw InputError(source + ":" + std::to_string(line_no) + ": expected key = value");
      try {
        c.set(detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
      } catch (const InputError& e) {
        throw InputError(source + ":" + std::to_string(line_no) + ": " + e.what());
      }
    }
    return c;
  }

  static Config load(const std::filesystem::path& path) { return parse(io::read_file(path), path.string()); }

  /// Sets a known key; the value is checked by the matching typed accessor.
  void set(const std::string& key, const std::string& value) {
    const auto it = values_.find(key);
    if (it == values_.end()) throw InputError("unknown config key '" + key + "'");
    const std::string old = it->second;
    it->second = value;
    try {
      validate();
    } catch (...) {
      it->second = old;
      throw;
    }
  }

  const std::map<std::string, std::string>& entries() const { return values_; }

  std::uint64_t seed() const { return static_cast<std::uint64_t>(integer("seed")); }
  std::size_t threads() const { return static_cast<std::size_t>(integer("threads")); }

  audio::FeatureConfig features() const {
    audio::FeatureConfig f;
    f.stft.n_fft = static_cast<std::size_t>(integer("n_fft", 1));
    f.stft.hop = static_cast<std::size_t>(integer("hop", 1));
    f.contrast.alpha = real("contrast_alpha");
    return f;
  }
  int sample_rate() const { return static_cast<int>(integer("sample_rate", 1)); }

  std::vector<int> strategies() const {
    std::vector<int> out;
    for (const auto& s : detail::split_list(get("strategies"))) {
      const long id = io::parse_int(s, "strategies");
      if (id < 1 || id > 3) throw InputError("strategies: ids must be 1, 2 or 3");
      out.push_back(static_cast<int>(id));
    }
    if (out.empty()) throw InputError("strategies: empty list");
    return out;
  }

  std::vector<learn::ModelSpec> models() const {
    std::vector<learn::ModelSpec> out;
    for (const auto& name : detail::split_list(get("models"))) {
      learn::ModelSpec spec;
      if (name == "knn") {
        spec = learn::ModelSpec::knn();
        spec.param = static_cast<double>(integer("knn_neighbors", 1));
        spec.grid = list("knn_grid");
      } else if (name == "lr") {
        spec = learn::ModelSpec::logreg();
        spec.param = real("logreg_l2");
        spec.grid = list("logreg_grid");
        spec.max_iter = static_cast<std::size_t>(integer("logreg_max_iter"));
        spec.tol = real("logreg_tol");
      } else {
        throw InputError("models: unknown model '" + name + "' (expected knn|lr)");
      }
      spec.validate();
      out.push_back(spec);
    }
    return out;
  }

  learn::StrategyConfig strategy(int id) const {
    auto s = learn::StrategyConfig::strategy(id);
    s.smote_k = static_cast<std::size_t>(integer("smote_k", 1));
    s.outer_folds = static_cast<std::size_t>(integer("outer_folds", 2));
    s.inner_folds = static_cast<std::size_t>(integer("inner_folds", 2));
    s.threshold_grid = list("threshold_grid");
    const auto objective = metrics::parse_metric(get("objective"));
    if (!objective) throw InputError("objective: unknown metric '" + get("objective") + "'");
    s.objective = *objective;
    for (double t : s.threshold_grid)
      if (!(t > 0.0 && t < 1.0)) throw InputError("threshold_grid: cutoffs must lie in (0, 1)");
    return s;
  }

  ensemble::TieRule tie_rule() const {
    const std::string mode = get("tie_mode");
    ensemble::TieRule rule;
    if (mode == "relative") rule = ensemble::TieRule::relative(real("tie_eps"));
    else if (mode == "absolute") rule = ensemble::TieRule::absolute(real("tie_eps"));
    else if (mode == "decimals") rule = ensemble::TieRule::rounded(static_cast<int>(integer("tie_decimals")));
    else throw InputError("tie_mode: expected relative|absolute|decimals, got '" + mode + "'");
    rule.validate();
    return rule;
  }

  std::size_t rfecv_step() const { return static_cast<std::size_t>(integer("rfecv_step", 1)); }
  std::size_t rfecv_folds() const { return static_cast<std::size_t>(integer("rfecv_folds", 2)); }
  double rfecv_l2() const { return real("rfecv_l2"); }

  void validate() const {
    (void)seed();
    (void)threads();
    features().stft.validate();
    features().contrast.validate();
    (void)sample_rate();
    (void)strategies();
    (void)models();
    (void)strategy(1);
    (void)tie_rule();
    (void)rfecv_step();
    (void)rfecv_folds();
    if (rfecv_l2() < 0) throw InputError("rfecv_l2 must be >= 0");
  }

 private:
  const std::string& get(const std::string& key) const { return values_.at(key); }

  long integer(const std::string& key, long min = 0) const {
    const long v = io::parse_int(get(key), key);
    if (v < min) throw InputError(key + " must be >= " + std::to_string(min));
    return v;
  }

  double real(const std::string& key) const { return io::parse_real(get(key), key); }

  std::vector<double> list(const std::string& key) const {
    const std::string& v = get(key);
    std::vector<double> out;
    if (v.find(':') != std::string::npos) {
      std::vector<double> parts;
      std::stringstream in(v);
      std::string item;
      while (std::getline(in, item, ':')) parts.push_back(io::parse_real(detail::trim(item), key));
      if (parts.size() != 3 || !(parts[1] > 0) || parts[2] < parts[0])
        throw InputError(key + ": range must be start:step:stop with step > 0");
      const auto n = static_cast<long>(std::floor((parts[2] - parts[0]) / parts[1] + 1e-9));
      // start + i*step, rounded to 12 decimals so 0.01:0.01:0.99 gives exact 0.07 etc.
      for (long i = 0; i <= n; ++i) out.push_back(std::round((parts[0] + i * parts[1]) * 1e12) / 1e12);
    } else {
      for (const auto& s : detail::split_list(v)) out.push_back(io::parse_real(s, key));
    }
    if (out.empty()) throw InputError(key + ": empty list");
    return out;
  }

  std::map<std::string, std::string> values_;
};

}  // namespace coughsel::cli
