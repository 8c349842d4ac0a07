// Copyright 2026 The gnssio Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Runs the gnssio executable end to end on a small generated dataset.

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <gtest/gtest.h>

#include "gnssio/error.hpp"
#include "gnssio/ingest.hpp"
#include "json.hpp"
#include "test_support.hpp"

namespace gnssio {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> ReadCsv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) rows.push_back(SplitCsvLine(line));
  }
  return rows;
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new testing::TempDir("gnssio_cli");
    std::ofstream(dir_->path() / "small.json")
        << R"({"n_sessions_per_class": 3, "n_group_b_sessions_per_class": 2,)"
        << R"( "session_minutes": 4, "near_window_session_fraction": 0.34})";
    const auto r = Exec("synth --config " + Q(dir_->path() / "small.json") + " --seed 5 --out-dir " +
                        Q(dir_->path() / "data"));
    ASSERT_EQ(r.exit_code, 0) << r.err;
  }
  static void TearDownTestSuite() {
    delete dir_;
    dir_ = nullptr;
  }

  static std::string Q(const fs::path& p) { return "'" + p.string() + "'"; }
  static fs::path Dir() { return dir_->path(); }
  static std::string Manifest() { return Q(Dir() / "data" / "manifest.csv"); }

  static CliRun Exec(const std::string& args) {
    static int counter = 0;
    const auto out = dir_->path() / ("stdout_" + std::to_string(counter));
    const auto err = dir_->path() / ("stderr_" + std::to_string(counter));
    ++counter;
    const std::string cmd = std::string("'") + GNSSIO_CLI_PATH + "' " + args + " >" + Q(out) +
                            " 2>" + Q(err);
    const int status = std::system(cmd.c_str());
    CliRun r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = Slurp(out);
    r.err = Slurp(err);
    return r;
  }

  static int ExitFor(ErrorCode c) { return 10 + static_cast<int>(c); }

  static CliRun Train(const std::string& method, const fs::path& out, const std::string& extra = "") {
    return Exec("train --manifest " + Manifest() + " --method " + method + " --out-dir " + Q(out) +
                " " + extra);
  }

 private:
  static testing::TempDir* dir_;
};

testing::TempDir* CliTest::dir_ = nullptr;

TEST_F(CliTest, IngestSummary) {
  const auto r = Exec("ingest --manifest " + Manifest());
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto rows = ReadCsv(r.out);
  ASSERT_EQ(rows.size(), 1u + 10u);
  EXPECT_EQ(rows[0][0], "path");
  EXPECT_TRUE(r.err.empty());
}

TEST_F(CliTest, TrainThresholdWritesModelReportAndConfig) {
  const auto out = Dir() / "thr";
  const auto r = Train("threshold", out, "--scenario S2");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto model = nlohmann::json::parse(Slurp(out / "model.json"));
  EXPECT_EQ(model.at("method"), "threshold");
  EXPECT_GT(model.at("threshold_table").at("entries").size(), 0u);
  const auto report = nlohmann::json::parse(Slurp(out / "train_report.json"));
  EXPECT_EQ(report.at("table_entries"), model.at("threshold_table").at("entries").size());
  const auto cfg = nlohmann::json::parse(Slurp(out / "run_config.json"));
  EXPECT_EQ(cfg.at("command"), "train");
  EXPECT_EQ(cfg.at("scenario"), "S2");
  EXPECT_TRUE(r.out.empty());
}

TEST_F(CliTest, RandomForestRetrainIsByteIdentical) {
  ASSERT_EQ(Train("rf", Dir() / "rf1", "--seed 9").exit_code, 0);
  ASSERT_EQ(Train("rf", Dir() / "rf2", "--seed 9").exit_code, 0);
  EXPECT_EQ(Slurp(Dir() / "rf1" / "model.json"), Slurp(Dir() / "rf2" / "model.json"));
  const auto report = nlohmann::json::parse(Slurp(Dir() / "rf1" / "train_report.json"));
  EXPECT_EQ(report.at("trees"), 100);
}

TEST_F(CliTest, HyperparameterOverrides) {
  std::ofstream(Dir() / "hyper.json") << R"({"forest": {"n_trees": 7}, "svm": {"epochs": 3}})";
  ASSERT_EQ(Train("rf", Dir() / "rf7", "--config " + Q(Dir() / "hyper.json")).exit_code, 0);
  const auto report = nlohmann::json::parse(Slurp(Dir() / "rf7" / "train_report.json"));
  EXPECT_EQ(report.at("trees"), 7);
  const auto cfg = nlohmann::json::parse(Slurp(Dir() / "rf7" / "run_config.json"));
  EXPECT_EQ(cfg.at("hyperparameters").at("forest").at("n_trees"), 7);
}

TEST_F(CliTest, MissingGroupExit) {
  auto entries = ReadManifest(Dir() / "data" / "manifest.csv");
  std::erase_if(entries, [](const auto& e) { return e.group == Group::kB; });
  WriteManifest(Dir() / "a_only.csv", entries);
  const auto r = Exec("train --manifest " + Q(Dir() / "a_only.csv") +
                      " --method threshold --scenario S2 --out-dir " + Q(Dir() / "nogroup"));
  EXPECT_EQ(r.exit_code, ExitFor(ErrorCode::kMissingGroup));
  EXPECT_NE(r.err.find("MissingGroup"), std::string::npos);
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
}

fs::path FirstSession(const fs::path& data, Label label, Group group) {
  for (const auto& e : ReadManifest(data / "manifest.csv")) {
    if (e.label == label && e.group == group && e.sublabel != Sublabel::kNearWindowIndoor) {
      return e.file_path;
    }
  }
  return {};
}

TEST_F(CliTest, PredictEpochAndWindowRows) {
  ASSERT_EQ(Train("threshold", Dir() / "thr_p", "--scenario S2").exit_code, 0);
  const auto session = FirstSession(Dir() / "data", Label::kIndoor, Group::kB);
  const auto r = Exec("predict --model " + Q(Dir() / "thr_p" / "model.json") + " --session " +
                      Q(session) + " --window-seconds 5");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto rows = ReadCsv(r.out);
  ASSERT_GT(rows.size(), 2u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"kind", "timestamp_ms", "window_index",
                                               "epoch_label", "window_label", "indoor_votes",
                                               "outdoor_votes", "prior_applied", "fallback_used"}));
  std::size_t epochs = 0, windows = 0, indoor = 0;
  std::map<std::string, std::string> epoch_label_at;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i][0] == "epoch") {
      ++epochs;
      indoor += rows[i][3] == "indoor" ? 1 : 0;
      EXPECT_EQ(rows[i][3], rows[i][4]);
      epoch_label_at[rows[i][1]] = rows[i][3];
    } else {
      ++windows;
      EXPECT_EQ(epoch_label_at.at(rows[i][1]), rows[i][4]);
    }
  }
  EXPECT_EQ(epochs, windows);
  EXPECT_GE(static_cast<double>(indoor), 0.95 * static_cast<double>(epochs));

  const auto w30 = Exec("predict --model " + Q(Dir() / "thr_p" / "model.json") + " --session " +
                        Q(session) + " --window-seconds 30 --out-dir " + Q(Dir() / "pred30"));
  ASSERT_EQ(w30.exit_code, 0) << w30.err;
  EXPECT_TRUE(fs::exists(Dir() / "pred30" / "predictions.csv"));
  EXPECT_TRUE(fs::exists(Dir() / "pred30" / "run_config.json"));
}

TEST_F(CliTest, CorruptedModelExit) {
  std::ofstream(Dir() / "bad_model.json") << "{\"format\": \"gnssio-model\", \"format_ver";
  const auto session = FirstSession(Dir() / "data", Label::kIndoor, Group::kA);
  const auto r = Exec("predict --model " + Q(Dir() / "bad_model.json") + " --session " + Q(session));
  EXPECT_EQ(r.exit_code, ExitFor(ErrorCode::kModelSchemaMismatch));
  EXPECT_TRUE(r.out.empty());
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(Exec("").exit_code, 2);
  EXPECT_EQ(Exec("frobnicate").exit_code, 2);
  EXPECT_EQ(Exec("train --manifest " + Manifest() + " --method knn --out-dir x").exit_code, 2);
  EXPECT_EQ(Exec("predict --model m.json --session s.csv --window-seconds 7").exit_code,
            ExitFor(ErrorCode::kInvalidConfig));
  EXPECT_EQ(Exec("--help").exit_code, 0);
}

TEST_F(CliTest, EvaluateEmitsOneCellWithInteriorBreakdown) {
  ASSERT_EQ(Train("dt", Dir() / "dt", "--scenario S1 --seed 3").exit_code, 0);
  const auto r = Exec("evaluate --manifest " + Manifest() + " --model " +
                      Q(Dir() / "dt" / "model.json") + " --window-seconds 30 --out-dir " +
                      Q(Dir() / "dt_eval"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto rows = ReadCsv(Slurp(Dir() / "dt_eval" / "metrics.csv"));
  int overall = 0;
  bool interior = false;
  for (const auto& row : rows) {
    overall += row.size() > 4 && row[4] == "overall" ? 1 : 0;
    interior = interior || (row.size() > 4 && row[4] == "sublabel_interior");
  }
  EXPECT_EQ(overall, 1);
  EXPECT_TRUE(interior);
  EXPECT_EQ(rows[1][0], "dt");
  EXPECT_EQ(rows[1][1], "S1");  // scenario taken from model metadata
  const auto cfg = nlohmann::json::parse(Slurp(Dir() / "dt_eval" / "run_config.json"));
  EXPECT_EQ(cfg.at("seed"), 3);
  EXPECT_TRUE(fs::exists(Dir() / "dt_eval" / "metrics.txt"));
}

TEST_F(CliTest, EvaluateFeatureModeMismatchExit) {
  ASSERT_EQ(Train("threshold", Dir() / "thr_m").exit_code, 0);
  const auto r = Exec("evaluate --manifest " + Manifest() + " --model " +
                      Q(Dir() / "thr_m" / "model.json") + " --feature-mode fused");
  EXPECT_EQ(r.exit_code, ExitFor(ErrorCode::kFeatureModeMismatch));
}

double IndoorAccuracy(const std::string& metrics_csv) {
  for (const auto& row : ReadCsv(metrics_csv)) {
    if (row.size() > 12 && row[4] == "overall") return std::stod(row[11]);
  }
  return -1.0;
}

TEST_F(CliTest, FusedIndoorAccuracyAtLeastGnssOnly) {
  for (const std::string mode : {"gnss", "fused"}) {
    ASSERT_EQ(Train("rf", Dir() / ("rf_" + mode), "--scenario S2 --feature-mode " + mode).exit_code, 0);
    const auto r = Exec("evaluate --manifest " + Manifest() + " --model " +
                        Q(Dir() / ("rf_" + mode) / "model.json") + " --feature-mode " + mode +
                        " --out-dir " + Q(Dir() / ("rf_eval_" + mode)));
    ASSERT_EQ(r.exit_code, 0) << r.err;
  }
  const double gnss = IndoorAccuracy(Slurp(Dir() / "rf_eval_gnss" / "metrics.csv"));
  const double fused = IndoorAccuracy(Slurp(Dir() / "rf_eval_fused" / "metrics.csv"));
  ASSERT_GE(gnss, 0.0);
  EXPECT_GE(fused, gnss);
}

TEST_F(CliTest, MatrixSweepCardinality) {
  std::ofstream(Dir() / "fast.json") << R"({"forest": {"n_trees": 5}, "svm": {"epochs": 3}})";
  int cells = 0;
  for (const std::string method : {"threshold", "svm", "dt", "rf"}) {
    for (const std::string scenario : {"S1", "S2"}) {
      const auto model_dir = Dir() / ("sweep_" + method + "_" + scenario);
      ASSERT_EQ(Train(method, model_dir, "--scenario " + scenario + " --config " +
                                             Q(Dir() / "fast.json"))
                    .exit_code,
                0);
      for (int window : {5, 30, 60}) {
        const auto r = Exec("evaluate --manifest " + Manifest() + " --model " +
                            Q(model_dir / "model.json") + " --window-seconds " +
                            std::to_string(window));
        ASSERT_EQ(r.exit_code, 0) << r.err;
        for (const auto& row : ReadCsv(r.out)) cells += row.size() > 4 && row[4] == "overall";
      }
    }
  }
  EXPECT_EQ(cells, 4 * 2 * 3);
}

TEST_F(CliTest, Exports) {
  const auto roc = Exec("export-roc --manifest " + Manifest() + " --feature sat-count");
  ASSERT_EQ(roc.exit_code, 0) << roc.err;
  const auto roc_rows = ReadCsv(roc.out);
  EXPECT_EQ(roc_rows[0][0], "threshold");
  EXPECT_EQ(roc_rows[1][1], "0.000000");

  const auto scatter = Exec("export-scatter --manifest " + Manifest() + " --label outdoor");
  ASSERT_EQ(scatter.exit_code, 0) << scatter.err;
  const auto rows = ReadCsv(scatter.out);
  ASSERT_GT(rows.size(), 1u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i][0], "outdoor");

  EXPECT_EQ(Exec("export-roc --manifest " + Manifest() + " --feature sat:GPS:999:1575.42").exit_code,
            ExitFor(ErrorCode::kOneClassOnly));
}

TEST_F(CliTest, ContainmentReport) {
  ASSERT_EQ(Train("threshold", Dir() / "thr_c").exit_code, 0);
  const auto r = Exec("containment-report --model " + Q(Dir() / "thr_c" / "model.json") +
                      " --scenario under-bridge --out-dir " + Q(Dir() / "cont"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto rows = ReadCsv(Slurp(Dir() / "cont" / "containment.csv"));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0][0], "segment");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_NEAR(std::stod(rows[i][5]) + std::stod(rows[i][6]), 100.0, 0.11);
  }
}

TEST_F(CliTest, SynthIsReproducible) {
  const auto a = Dir() / "syn_a";
  const auto b = Dir() / "syn_b";
  for (const auto& d : {a, b}) {
    ASSERT_EQ(Exec("synth --config " + Q(Dir() / "small.json") + " --seed 77 --out-dir " + Q(d))
                  .exit_code,
              0);
  }
  EXPECT_EQ(Slurp(a / "sessions" / "A_indoor_00.csv"), Slurp(b / "sessions" / "A_indoor_00.csv"));
  EXPECT_EQ(Slurp(a / "run_config.json"), Slurp(b / "run_config.json"));
  const auto cfg = nlohmann::json::parse(Slurp(a / "run_config.json"));
  EXPECT_EQ(cfg.at("config").at("seed"), 77);
}

}  // namespace
}  // namespace gnssio
