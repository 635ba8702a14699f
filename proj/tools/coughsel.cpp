#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "coughsel/cli/commands.hpp"

namespace {

using coughsel::cli::Config;
namespace fs = std::filesystem;

struct Common {
  std::optional<fs::path> config;
  std::optional<std::uint64_t> seed;
  fs::path out;
  std::vector<std::pair<std::string, std::string>> overrides;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "key = value configuration file (default: $COUGHSEL_CONFIG)");
  cmd->add_option("--seed", c.seed, "random seed (overrides config)");
  cmd->add_option("--out", c.out, "output directory")->required();
}

Config resolve(const Common& c) {
  Config cfg;
  std::optional<fs::path> path = c.config;
  if (!path)
    if (const char* env = std::getenv("COUGHSEL_CONFIG"); env && *env) path = fs::path(env);
  if (path) cfg = Config::load(*path);
  if (c.seed) cfg.set("seed", std::to_string(*c.seed));
  for (const auto& [k, v] : c.overrides) cfg.set(k, v);
  return cfg;
}

/// Adds `--name` that, when given, overrides config key `key`.
CLI::Option* add_override(CLI::App* cmd, Common& c, const std::string& name, const std::string& key,
                          const std::string& help) {
  return cmd->add_option_function<std::string>(
      name, [&c, key](const std::string& v) { c.overrides.emplace_back(key, v); }, help);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cough-feature extraction and entropy-TOPSIS model selection"};
  app.set_version_flag("--version", COUGHSEL_VERSION);
  app.require_subcommand(1);

  Common common;

  coughsel::cli::ExtractArgs extract;
  auto* c_extract = app.add_subcommand("extract", "WAV directory -> features.csv");
  c_extract->add_option("input_dir", extract.input_dir, "directory of .wav files")->required();
  c_extract->add_option("--labels", extract.labels, "sample_id,label CSV (default: <input_dir>/labels.csv)");
  add_override(c_extract, common, "--threads", "threads", "worker threads, 0 = all cores");
  add_common(c_extract, common);

  coughsel::cli::EvaluateArgs evaluate;
  auto* c_evaluate = app.add_subcommand("evaluate", "predictions.csv -> one decision matrix per strategy");
  c_evaluate->add_option("predictions", evaluate.predictions, "predictions CSV files");
  c_evaluate->add_option("--matrix", evaluate.matrices, "decision matrix files to validate and pass through");
  c_evaluate->add_option("--criteria", evaluate.criteria, "criteria CSV (default: the eight standard criteria)");
  add_common(c_evaluate, common);

  coughsel::cli::RankArgs rank;
  auto* c_rank = app.add_subcommand("rank", "decision matrices -> entropy-TOPSIS and ensemble reports");
  c_rank->add_option("matrices", rank.matrices, "one decision matrix per strategy")->required();
  c_rank->add_option("--criteria", rank.criteria, "criteria CSV (default: the eight standard criteria)");
  c_rank->add_option("--weights", rank.weights, "criterion,weight CSV replacing the entropy weights");
  add_override(c_rank, common, "--tie-mode", "tie_mode", "relative | absolute | decimals");
  add_override(c_rank, common, "--tie-eps", "tie_eps", "tie tolerance for relative/absolute modes");
  add_override(c_rank, common, "--tie-decimals", "tie_decimals", "rounding places for decimals mode");
  add_common(c_rank, common);

  coughsel::cli::PipelineArgs pipeline;
  auto* c_pipeline = app.add_subcommand("pipeline", "features -> train, evaluate, rank, ensemble");
  c_pipeline->add_option("features", pipeline.features, "labelled features.csv")->required();
  c_pipeline->add_option("--predictions", pipeline.predictions, "external model predictions to merge");
  c_pipeline->add_option("--criteria", pipeline.criteria, "criteria CSV (default: the eight standard criteria)");
  add_override(c_pipeline, common, "--tie-mode", "tie_mode", "relative | absolute | decimals");
  add_override(c_pipeline, common, "--tie-eps", "tie_eps", "tie tolerance for relative/absolute modes");
  add_common(c_pipeline, common);

  coughsel::cli::RfecvArgs rfecv;
  auto* c_rfecv = app.add_subcommand("rfecv", "recursive feature elimination with CV");
  c_rfecv->add_option("features", rfecv.features, "labelled features.csv")->required();
  add_override(c_rfecv, common, "--step", "rfecv_step", "features dropped per iteration");
  add_override(c_rfecv, common, "--folds", "rfecv_folds", "CV folds");
  add_common(c_rfecv, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const Config cfg = resolve(common);
    std::cerr << "seed " << cfg.seed() << "\n";
    if (*c_extract) {
      extract.out_dir = common.out;
      return coughsel::cli::cmd_extract(extract, cfg, std::cerr);
    }
    if (*c_evaluate) {
      evaluate.out_dir = common.out;
      return coughsel::cli::cmd_evaluate(evaluate, cfg, std::cerr);
    }
    if (*c_rank) {
      rank.out_dir = common.out;
      return coughsel::cli::cmd_rank(rank, cfg, std::cout);
    }
    if (*c_pipeline) {
      pipeline.out_dir = common.out;
      return coughsel::cli::cmd_pipeline(pipeline, cfg, std::cout);
    }
    rfecv.out_dir = common.out;
    return coughsel::cli::cmd_rfecv(rfecv, cfg, std::cerr);
  } catch (const coughsel::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
