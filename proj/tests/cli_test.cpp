#include <gtest/gtest.h>
#include <sys/wait.h>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "coughsel/cli/commands.hpp"
#include "paper_fixtures.hpp"
#include "synthetic.hpp"

using namespace coughsel;
namespace fx = coughsel::testing;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  const fs::path p = fs::temp_directory_path() / "coughsel_cli" / (std::string(info->test_suite_name()) + "." + info->name());
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run(const std::string& args) {
  const int status = std::system((std::string(COUGHSEL_CLI) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

std::string paper_matrices(const std::string& category) {
  std::string s;
  for (int k = 1; k <= 3; ++k) s += q(fx::matrix_path(category, k)) + " ";
  return s + "--criteria " + q(fx::paper_dir() / "criteria.csv");
}

io::Json read_json(const fs::path& p) { return io::Json::parse(io::read_file(p)); }

void write_predictions(const fs::path& p, const std::vector<metrics::PredictionSet>& sets) {
  io::write_file(p, io::write_predictions(sets));
}

metrics::PredictionSet toy(const std::string& model, const std::string& strategy, double shift) {
  metrics::PredictionSet s{model, strategy, {}, 0.5};
  for (int i = 0; i < 6; ++i) s.entries.push_back({"x" + std::to_string(i), i % 2, std::clamp(0.2 + 0.1 * i + shift, 0.0, 1.0)});
  return s;
}

}  // namespace

TEST(RankCommand, PaperFixturesSelectPublishedModels) {
  const fs::path dir = scratch();
  const std::pair<const char*, const char*> expected[] = {{"asymptomatic", "HGBoost"}, {"symptomatic", "Extra-Trees"}};
  for (const auto& [category, hard] : expected) {
    ASSERT_EQ(run("rank " + paper_matrices(category) + " --out " + q(dir / category)), 0);
    const auto report = read_json(dir / category / "report.json");
    EXPECT_EQ(report["ensemble"]["soft_best"], "Extra-Trees") << category;
    EXPECT_EQ(report["ensemble"]["hard_best"], hard) << category;
    EXPECT_TRUE(report.contains("weights"));
    EXPECT_TRUE(report.contains("topsis"));
    EXPECT_TRUE(report.contains("manifest"));
    EXPECT_TRUE(fs::exists(dir / category / "strategy_asymptomatic_strategy1/weights.csv") ||
                fs::exists(dir / category / "strategy_symptomatic_strategy1/weights.csv"));
    const auto summary = io::read_file(dir / category / "summary.txt");
    EXPECT_NE(summary.find(std::string("hard_best: ") + hard), std::string::npos);
  }
}

TEST(RankCommand, RowOrderDoesNotMatter) {
  const fs::path dir = scratch();
  const auto criteria = io::read_criteria(fx::paper_dir() / "criteria.csv");
  std::string permuted;
  for (int k = 1; k <= 3; ++k) {
    auto dm = fx::paper_matrix("asymptomatic", k);
    std::reverse(dm.alternatives.begin(), dm.alternatives.end());
    dm.values = dm.values.colwise().reverse().eval();
    const fs::path p = dir / "in" / ("decision_matrix_" + std::to_string(k) + ".csv");
    io::write_file(p, io::write_decision_matrix(dm));
    io::write_file(dir / "orig" / ("decision_matrix_" + std::to_string(k) + ".csv"),
                   io::write_decision_matrix(fx::paper_matrix("asymptomatic", k)));
    permuted += q(p) + " ";
  }
  std::string original;
  for (int k = 1; k <= 3; ++k) original += q(dir / "orig" / ("decision_matrix_" + std::to_string(k) + ".csv")) + " ";
  ASSERT_EQ(run("rank " + permuted + "--out " + q(dir / "a")), 0);
  ASSERT_EQ(run("rank " + original + "--out " + q(dir / "b")), 0);
  for (const char* f : {"ensemble_report.csv", "closeness.csv", "ensemble.json", "summary.txt", "strategy_2/topsis_report.csv",
                        "strategy_3/weights.csv"})
    EXPECT_EQ(io::read_file(dir / "a" / f), io::read_file(dir / "b" / f)) << f;
}

TEST(RankCommand, SingleMatrixMatchesTopsis) {
  const fs::path dir = scratch();
  ASSERT_EQ(run("rank " + q(fx::matrix_path("symptomatic", 2)) + " --out " + q(dir)), 0);
  const auto report = read_json(dir / "report.json");
  const auto& topsis = report["topsis"]["symptomatic_strategy2"]["alternatives"];
  const auto& models = report["ensemble"]["models"];
  ASSERT_EQ(topsis.size(), models.size());
  for (std::size_t i = 0; i < models.size(); ++i) {
    EXPECT_EQ(models[i]["soft_rank"], topsis[i]["rank"]);
    EXPECT_EQ(models[i]["hard_rank"], topsis[i]["rank"]);
  }
}

TEST(RankCommand, InconsistentModelSets) {
  const fs::path dir = scratch();
  auto dm = fx::paper_matrix("asymptomatic", 2);
  dm.alternatives[0] = "Other";
  io::write_file(dir / "decision_matrix_2.csv", io::write_decision_matrix(dm));
  EXPECT_EQ(run("rank " + q(fx::matrix_path("asymptomatic", 1)) + " " + q(dir / "decision_matrix_2.csv") + " --out " +
                q(dir / "out")),
            2);
}

TEST(RankCommand, TieModeOption) {
  const fs::path dir = scratch();
  ASSERT_EQ(run("rank " + paper_matrices("asymptomatic") + " --tie-mode decimals --out " + q(dir)), 0);
  EXPECT_EQ(read_json(dir / "manifest.json")["config"]["tie_mode"], "decimals");
  EXPECT_EQ(run("rank " + paper_matrices("asymptomatic") + " --tie-mode bogus --out " + q(dir / "x")), 2);
}

TEST(RankCommand, AllConstantMatrixIsDegenerate) {
  const fs::path dir = scratch();
  io::write_file(dir / "m.csv", "model,acc,fpr\na,0.5,0.1\nb,0.5,0.1\n");
  io::write_file(dir / "c.csv", "name,direction\nacc,benefit\nfpr,cost\n");
  EXPECT_EQ(run("rank " + q(dir / "m.csv") + " --criteria " + q(dir / "c.csv") + " --out " + q(dir / "out")), 3);
}

TEST(EvaluateCommand, TwoModelsOneStrategy) {
  const fs::path dir = scratch();
  write_predictions(dir / "p.csv", {toy("a", "1", 0.0), toy("b", "1", 0.1)});
  ASSERT_EQ(run("evaluate " + q(dir / "p.csv") + " --out " + q(dir / "out")), 0);
  const auto dm = io::read_decision_matrix(dir / "out" / "decision_matrix_1.csv", metrics::default_criteria());
  EXPECT_EQ(dm.rows(), 2);
  EXPECT_EQ(dm.cols(), 8);
  EXPECT_TRUE(fs::exists(dir / "out" / "evaluation.csv"));
  EXPECT_TRUE(fs::exists(dir / "out" / "manifest.json"));
}

TEST(EvaluateCommand, MixedStrategies) {
  const fs::path dir = scratch();
  write_predictions(dir / "p.csv", {toy("a", "3", 0.0), toy("b", "1", 0.1), toy("a", "1", 0.0), toy("b", "3", 0.05),
                                    toy("a", "2", 0.0), toy("b", "2", 0.02)});
  std::ostringstream log;
  cli::EvaluateArgs args{{dir / "p.csv"}, {}, std::nullopt, dir / "out"};
  ASSERT_EQ(cli::cmd_evaluate(args, cli::Config{}, log), 0);
  EXPECT_EQ(log.str(), "strategy 1: 2 models x 8 criteria\nstrategy 2: 2 models x 8 criteria\nstrategy 3: 2 models x 8 criteria\n");
}

TEST(EvaluateCommand, MalformedRowReportsLine) {
  const fs::path dir = scratch();
  io::write_file(dir / "p.csv", "model,strategy,sample_id,true_label,score\na,1,x,1,0.4\na,1,y,0,oops\n");
  cli::EvaluateArgs args{{dir / "p.csv"}, {}, std::nullopt, dir / "out"};
  std::ostringstream log;
  try {
    cli::cmd_evaluate(args, cli::Config{}, log);
    FAIL() << "expected an error";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("p.csv:3"), std::string::npos) << e.what();
  }
}

TEST(EvaluateCommand, SingletonGroupRejected) {
  const fs::path dir = scratch();
  write_predictions(dir / "p.csv", {toy("a", "1", 0.0), toy("b", "1", 0.1), toy("a", "2", 0.0)});
  EXPECT_EQ(run("evaluate " + q(dir / "p.csv") + " --out " + q(dir / "out")), 2);
}

TEST(EvaluateCommand, DegenerateMetricExitsThree) {
  const fs::path dir = scratch();
  // model b never predicts positive: precision 0/0
  write_predictions(dir / "p.csv", {toy("a", "1", 0.0), toy("b", "1", -0.6)});
  EXPECT_EQ(run("evaluate " + q(dir / "p.csv") + " --out " + q(dir / "out")), 3);
  EXPECT_TRUE(fs::exists(dir / "out" / "decision_matrix_1.csv"));
}

TEST(EvaluateCommand, MatrixPassthrough) {
  const fs::path dir = scratch();
  ASSERT_EQ(run("evaluate --matrix " + q(fx::matrix_path("asymptomatic", 1)) + " --criteria " +
                q(fx::paper_dir() / "criteria.csv") + " --out " + q(dir)),
            0);
  const auto criteria = io::read_criteria(fx::paper_dir() / "criteria.csv");
  const auto dm = io::read_decision_matrix(dir / "decision_matrix_asymptomatic_strategy1.csv", criteria);
  EXPECT_EQ(dm.values, fx::paper_matrix("asymptomatic", 1).values);
}

TEST(ExtractCommand, RowsColumnsAndDeterminism) {
  const fs::path dir = scratch();
  fx::write_wavs(dir / "wav", 3, 5);
  io::write_file(dir / "wav" / "labels.csv", "sample_id,label\nclip_0,covid\nclip_1,non_covid\n");
  ASSERT_EQ(run("extract " + q(dir / "wav") + " --out " + q(dir / "a")), 0);
  ASSERT_EQ(run("extract " + q(dir / "wav") + " --threads 1 --out " + q(dir / "b")), 0);
  const auto t = io::read_csv(dir / "a" / "features.csv");
  EXPECT_EQ(t.rows.size(), 3u);
  EXPECT_EQ(t.header.size(), 195u);
  EXPECT_EQ(t.rows[0][0], "clip_0");
  EXPECT_EQ(t.rows[0][1], "covid");
  EXPECT_EQ(t.rows[1][1], "non_covid");
  EXPECT_EQ(t.rows[2][1], "");
  EXPECT_EQ(io::read_file(dir / "a" / "features.csv"), io::read_file(dir / "b" / "features.csv"));
}

TEST(ExtractCommand, EmptyDirectory) {
  const fs::path dir = scratch();
  fs::create_directories(dir / "empty");
  EXPECT_EQ(run("extract " + q(dir / "empty") + " --out " + q(dir / "out")), 2);
  cli::ExtractArgs args{dir / "empty", dir / "out", std::nullopt};
  std::ostringstream log;
  EXPECT_THROW(cli::cmd_extract(args, cli::Config{}, log), InputError);
}

TEST(ExtractCommand, BadFilesSkipped) {
  const fs::path dir = scratch();
  fx::write_wavs(dir / "wav", 2, 1);
  io::write_file(dir / "wav" / "broken.wav", "not a wav");
  ASSERT_EQ(run("extract " + q(dir / "wav") + " --out " + q(dir / "out")), 0);
  EXPECT_EQ(io::read_csv(dir / "out" / "features.csv").rows.size(), 2u);
  fs::remove(dir / "wav" / "clip_0.wav");
  fs::remove(dir / "wav" / "clip_1.wav");
  EXPECT_EQ(run("extract " + q(dir / "wav") + " --out " + q(dir / "out2")), 2);
}

TEST(PipelineCommand, InRepoModelsOnly) {
  const fs::path dir = scratch();
  io::write_file(dir / "features.csv", io::write_features(fx::cluster_features(60, 20, 1.0, 3, 6)));
  ASSERT_EQ(run("pipeline " + q(dir / "features.csv") + " --out " + q(dir / "out")), 0);
  const auto report = read_json(dir / "out" / "report.json");
  EXPECT_EQ(report["ensemble"]["models"].size(), 2u);
  EXPECT_EQ(report["ensemble"]["strategies"].size(), 3u);
  EXPECT_EQ(report["manifest"]["seed"], 42);
}

TEST(PipelineCommand, SingleModelNeedsExternalPredictions) {
  const fs::path dir = scratch();
  io::write_file(dir / "features.csv", io::write_features(fx::cluster_features(60, 20, 6.0, 3, 6)));
  io::write_file(dir / "cfg.txt", "models = knn\n");
  cli::PipelineArgs args{dir / "features.csv", {}, std::nullopt, dir / "out"};
  std::ostringstream log;
  try {
    cli::cmd_pipeline(args, cli::Config::load(dir / "cfg.txt"), log);
    FAIL() << "expected an error";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("--predictions"), std::string::npos) << e.what();
  }
}

TEST(PipelineCommand, ExternalModelsAndRerunIdentical) {
  const fs::path dir = scratch();
  const auto table = fx::cluster_features(60, 20, 6.0, 4, 6);
  io::write_file(dir / "features.csv", io::write_features(table));
  write_predictions(dir / "external.csv", fx::external_predictions(table, 9));
  const std::string cmd = "pipeline " + q(dir / "features.csv") + " --predictions " + q(dir / "external.csv");
  ASSERT_EQ(run(cmd + " --out " + q(dir / "a")), 0);
  ASSERT_EQ(run(cmd + " --out " + q(dir / "a2")), 0);
  EXPECT_EQ(read_json(dir / "a" / "report.json")["ensemble"]["models"].size(), 10u);
  // Same output directory name gives equal manifests, hence byte-identical files.
  fs::rename(dir / "a", dir / "first");
  ASSERT_EQ(run(cmd + " --out " + q(dir / "a")), 0);
  for (const auto& entry : fs::recursive_directory_iterator(dir / "first")) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), dir / "first");
    EXPECT_EQ(io::read_file(entry.path()), io::read_file(dir / "a" / rel)) << rel;
  }
}

TEST(PipelineCommand, SeedOverrideRecorded) {
  const fs::path dir = scratch();
  io::write_file(dir / "features.csv", io::write_features(fx::cluster_features(40, 20, 1.0, 3, 4)));
  ASSERT_EQ(run("pipeline " + q(dir / "features.csv") + " --seed 7 --out " + q(dir / "out")), 0);
  EXPECT_EQ(read_json(dir / "out" / "manifest.json")["seed"], 7);
}

TEST(PipelineCommand, IndistinguishableModelsAreDegenerate) {
  // both in-repo models are perfect on well separated clusters, so every
  // criterion column is constant and entropy weights are undefined
  const fs::path dir = scratch();
  io::write_file(dir / "features.csv", io::write_features(fx::cluster_features(60, 20, 8.0, 3, 6)));
  EXPECT_EQ(run("pipeline " + q(dir / "features.csv") + " --out " + q(dir / "out")), 3);
}

TEST(RfecvCommand, WritesCurve) {
  const fs::path dir = scratch();
  const auto ds = fx::planted(80, 2, 4, 1);
  io::FeatureTable t{ds.ids, {}, ds.feature_names, ds.features};
  for (int l : ds.labels) t.labels.emplace_back(l);
  io::write_file(dir / "features.csv", io::write_features(t));
  ASSERT_EQ(run("rfecv " + q(dir / "features.csv") + " --out " + q(dir / "out")), 0);
  const auto curve = io::read_csv(dir / "out" / "rfecv_curve.csv");
  EXPECT_EQ(curve.header, (std::vector<std::string>{"n_features", "mean_auc"}));
  EXPECT_EQ(curve.rows.size(), 6u);
  EXPECT_EQ(run("rfecv " + q(dir / "features.csv") + " --step 6 --out " + q(dir / "bad")), 2);
}

TEST(Config, ParsesAndRejects) {
  const auto c = cli::Config::parse("# comment\nseed = 9\nknn_grid = 5, 7\n\ntie_mode = absolute  # inline\n", "cfg");
  EXPECT_EQ(c.seed(), 9u);
  EXPECT_EQ(c.models()[0].grid, (std::vector<double>{5, 7}));
  EXPECT_EQ(c.tie_rule().kind, ensemble::TieRule::Kind::kAbsolute);
  EXPECT_EQ(cli::Config{}.strategy(1).threshold_grid, metrics::default_threshold_grid());
  EXPECT_THROW(cli::Config::parse("colour = red\n", "cfg"), InputError);
  EXPECT_THROW(cli::Config::parse("seed\n", "cfg"), InputError);
  EXPECT_THROW(cli::Config::parse("n_fft = 0\n", "cfg"), InputError);
  EXPECT_THROW(cli::Config::parse("strategies = 4\n", "cfg"), InputError);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("rank"), 2);
  EXPECT_EQ(run("--version"), 0);
}

TEST(Formats, RoundTripAtNineDigits) {
  const fs::path dir = scratch();
  const fs::path out = dir / "out";
  ASSERT_EQ(run("rank " + paper_matrices("asymptomatic") + " --out " + q(out)), 0);
  for (const char* f : {"ensemble_report.csv", "closeness.csv", "strategy_asymptomatic_strategy1/topsis_report.csv",
                        "strategy_asymptomatic_strategy1/weights.csv"}) {
    const auto t = io::read_csv(out / f);
    for (std::size_t i = 0; i < t.rows.size(); ++i)
      for (const auto& cell : t.rows[i]) {
        double v = 0;
        auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (ec == std::errc() && p == cell.data() + cell.size()) {
          EXPECT_EQ(io::format_real(v), cell) << f;
        }
      }
  }
}
