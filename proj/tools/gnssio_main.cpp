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

// gnssio command-line tool.
//
//   gnssio synth              --out-dir DIR [--config synth.json] [--seed N]
//   gnssio ingest             --manifest M [--out-dir DIR]
//   gnssio train              --manifest M --method {threshold,svm,dt,rf}
//                             [--feature-mode {gnss,wifi,fused}] [--scenario {S1,S2}]
//                             [--seed N] [--config hyper.json] --out-dir DIR
//   gnssio predict            --model F --session CSV [--wifi CSV]
//                             [--window-seconds W] [--out-dir DIR]
//   gnssio evaluate           --manifest M --model F [--scenario S] [--seed N]
//                             [--window-seconds W] [--feature-mode X] [--out-dir DIR]
//   gnssio export-roc         --manifest M --feature {mean-cnr,sat-count,sat:C:SVID:MHZ}
//   gnssio export-scatter     --manifest M [--label {indoor,outdoor,all}]
//   gnssio containment-report --model F --scenario {under-bridge,near-window}
//                             [--config synth.json] [--seed N]
//
// Data goes to files under --out-dir (or standard output when no directory
// is given); diagnostics go to standard error. Exit status is 0 on success,
// 2 on usage errors and 10 + error code for library errors.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "gnssio/classifier.hpp"
#include "gnssio/error.hpp"
#include "gnssio/eval.hpp"
#include "gnssio/ingest.hpp"
#include "gnssio/model_io.hpp"
#include "gnssio/synth.hpp"
#include "gnssio/temporal.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace gnssio {
namespace {

struct Options {
  std::string manifest;
  std::string method = "threshold";
  std::string feature_mode = "gnss";
  std::string scenario;
  std::uint64_t seed = 1;
  bool seed_given = false;
  std::string model;
  std::string out_dir;
  std::string config;
  std::string session;
  std::string wifi;
  int window_seconds = 5;
  std::string feature = "mean-cnr";
  std::string label = "all";
  std::string containment = "under-bridge";
};

[[noreturn]] void Usage(const std::string& what) {
  throw Error(ErrorCode::kInvalidArgument, what);
}

Method RequireMethod(const std::string& s) {
  const auto m = ParseMethod(s);
  if (!m) Usage("unknown method '" + s + "'");
  return *m;
}

FeatureMode RequireMode(const std::string& s) {
  const auto m = ParseFeatureMode(s);
  if (!m) Usage("unknown feature mode '" + s + "'");
  return *m;
}

Scenario RequireScenario(const std::string& s) {
  const auto sc = ParseScenario(s);
  if (!sc) Usage("unknown scenario '" + s + "'");
  return *sc;
}

json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, path + ": " + e.what());
  }
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  out << text;
}

fs::path PrepareOutDir(const std::string& dir) {
  fs::create_directories(dir);
  return fs::path(dir);
}

// Records the resolved parameters of a run next to its outputs.
void WriteRunConfig(const fs::path& dir, const std::string& command, json params) {
  params["command"] = command;
  WriteText(dir / "run_config.json", params.dump(2) + "\n");
}

// Writes to <out-dir>/<name> when an output directory was given, else to
// standard output.
template <typename Fn>
void EmitTable(const Options& o, const std::string& name, Fn&& write) {
  if (o.out_dir.empty()) {
    write(std::cout);
    return;
  }
  const auto dir = PrepareOutDir(o.out_dir);
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + (dir / name).string() + "'");
  write(out);
}

std::vector<Session> LoadManifestSessions(const std::string& manifest) {
  if (manifest.empty()) Usage("--manifest is required");
  return LoadSessions(ReadManifest(manifest));
}

TrainOptions HyperparametersFrom(const json& j, TrainOptions opts) {
  auto get = [&](const char* section, const char* key, auto& field) {
    if (j.contains(section) && j.at(section).contains(key)) j.at(section).at(key).get_to(field);
  };
  try {
    get("threshold", "sat_count_prior", opts.threshold.sat_count_prior);
    get("threshold", "min_samples_per_key", opts.threshold.min_samples_per_key);
    get("tree", "max_depth", opts.tree.max_depth);
    get("tree", "min_leaf_size", opts.tree.min_leaf_size);
    get("forest", "n_trees", opts.forest.n_trees);
    get("forest", "features_per_split", opts.forest.features_per_split);
    get("forest", "bootstrap", opts.forest.bootstrap);
    get("forest", "max_depth", opts.forest.max_depth);
    get("forest", "min_leaf_size", opts.forest.min_leaf_size);
    get("forest", "threads", opts.forest.threads);
    get("svm", "lambda", opts.svm.lambda);
    get("svm", "epochs", opts.svm.epochs);
    get("svm", "eta0", opts.svm.eta0);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("bad hyperparameter config: ") + e.what());
  }
  return opts;
}

json HyperparametersJson(const TrainOptions& o) {
  return {{"threshold",
           {{"sat_count_prior", o.threshold.sat_count_prior},
            {"min_samples_per_key", o.threshold.min_samples_per_key}}},
          {"tree", {{"max_depth", o.tree.max_depth}, {"min_leaf_size", o.tree.min_leaf_size},
                    {"seed", o.tree.seed}}},
          {"forest",
           {{"n_trees", o.forest.n_trees},
            {"features_per_split", o.forest.features_per_split},
            {"bootstrap", o.forest.bootstrap},
            {"max_depth", o.forest.max_depth},
            {"min_leaf_size", o.forest.min_leaf_size},
            {"seed", o.forest.seed}}},
          {"svm",
           {{"lambda", o.svm.lambda}, {"epochs", o.svm.epochs}, {"eta0", o.svm.eta0},
            {"seed", o.svm.seed}}}};
}

int CmdSynth(const Options& o) {
  if (o.out_dir.empty()) Usage("--out-dir is required");
  SynthConfig cfg = o.config.empty() ? SynthConfig{} : LoadSynthConfig(o.config);
  if (o.seed_given) cfg.seed = o.seed;
  const auto dir = PrepareOutDir(o.out_dir);
  const auto sessions = GenerateSessions(cfg);
  const auto manifest = WriteSynthDataset(sessions, dir);
  WriteText(dir / "synth_config.json", SynthConfigToJson(cfg));
  WriteRunConfig(dir, "synth", {{"config", json::parse(SynthConfigToJson(cfg))}});
  std::cerr << "gnssio: wrote " << sessions.size() << " sessions, manifest " << manifest.string()
            << '\n';
  return 0;
}

int CmdIngest(const Options& o) {
  const auto entries = ReadManifest(o.manifest.empty() ? (Usage("--manifest is required"), "")
                                                       : o.manifest);
  std::ostringstream table;
  table << "path,label,group,sublabel,epochs,records_kept,removed_zero_cnr,removed_missing_cnr,"
           "removed_missing_frequency,removed_warmup,parse_errors\n";
  for (const auto& e : entries) {
    const auto s = LoadSession(e);
    std::size_t kept = 0;
    for (const auto& ep : s.epochs) kept += ep.observations.size();
    table << e.file_path << ',' << LabelName(e.label) << ',' << GroupName(e.group) << ','
          << SublabelName(e.sublabel) << ',' << s.epochs.size() << ',' << kept << ','
          << s.cleaning.removed_zero_cnr << ',' << s.cleaning.removed_missing_cnr << ','
          << s.cleaning.removed_missing_frequency << ',' << s.cleaning.removed_warmup << ','
          << s.parse_errors << '\n';
  }
  EmitTable(o, "ingest_summary.csv", [&](std::ostream& out) { out << table.str(); });
  if (!o.out_dir.empty()) WriteRunConfig(o.out_dir, "ingest", {{"manifest", o.manifest}});
  return 0;
}

int CmdTrain(const Options& o) {
  if (o.out_dir.empty()) Usage("--out-dir is required");
  TrainOptions opts;
  opts.method = RequireMethod(o.method);
  opts.mode = RequireMode(o.feature_mode);
  opts.tree.seed = o.seed;
  opts.forest.seed = o.seed;
  opts.svm.seed = o.seed;
  if (!o.config.empty()) opts = HyperparametersFrom(ReadJsonFile(o.config), opts);
  const Scenario scenario = RequireScenario(o.scenario.empty() ? "S1" : o.scenario);

  const auto entries = ReadManifest(o.manifest.empty() ? (Usage("--manifest is required"), "")
                                                       : o.manifest);
  const auto split = MakeSplit(entries, scenario, o.seed);
  const auto train_entries = SelectByIndex<SessionManifestEntry>(entries, split.train);
  const auto sessions = LoadSessions(train_entries);

  TrainingReport report;
  const auto classifier = TrainClassifier(sessions, opts, &report);

  const auto dir = PrepareOutDir(o.out_dir);
  const fs::path model_path = o.model.empty() ? dir / "model.json" : fs::path(o.model);
  const ModelMetadata metadata = {{"scenario", std::string(ScenarioName(scenario))},
                                  {"split_seed", std::to_string(o.seed)},
                                  {"train_sessions", std::to_string(split.train.size())}};
  SaveModel(model_path, classifier, metadata);

  json rep = {{"method", MethodName(report.method)},
              {"feature_mode", FeatureModeName(report.mode)},
              {"scenario", ScenarioName(scenario)},
              {"sessions", report.sessions},
              {"rows", report.rows},
              {"indoor_rows", report.indoor_rows},
              {"outdoor_rows", report.outdoor_rows}};
  if (const auto* table = classifier.threshold_table()) {
    rep["keys_seen"] = report.threshold.keys_seen;
    rep["keys_one_class"] = report.threshold.keys_one_class;
    rep["keys_insufficient"] = report.threshold.keys_insufficient;
    rep["table_entries"] = table->entries.size();
    rep["mean_cnr_fallback_threshold"] = table->mean_cnr_fallback_threshold;
    json keys = json::array();
    for (const auto& [key, e] : table->entries) {
      keys.push_back({{"key", key.ToString()},
                      {"threshold", e.threshold},
                      {"train_accuracy", e.train_accuracy},
                      {"n_indoor", e.n_indoor},
                      {"n_outdoor", e.n_outdoor}});
    }
    rep["entries"] = keys;
  } else {
    rep["trees"] = report.trees;
    rep["total_nodes"] = report.total_nodes;
    rep["max_tree_depth"] = report.max_tree_depth;
    rep["oob_accuracy"] = report.oob_accuracy ? json(*report.oob_accuracy) : json(nullptr);
    rep["svm_loss_history"] = report.svm_loss_history;
  }
  WriteText(dir / "train_report.json", rep.dump(2) + "\n");
  WriteRunConfig(dir, "train",
                 {{"manifest", o.manifest},
                  {"method", MethodName(opts.method)},
                  {"feature_mode", FeatureModeName(opts.mode)},
                  {"scenario", ScenarioName(scenario)},
                  {"seed", o.seed},
                  {"model", model_path.string()},
                  {"hyperparameters", HyperparametersJson(opts)}});
  std::cerr << "gnssio: trained " << MethodName(opts.method) << " on " << sessions.size()
            << " sessions, model " << model_path.string() << '\n';
  return 0;
}

int CmdPredict(const Options& o) {
  if (o.model.empty() || o.session.empty()) Usage("--model and --session are required");
  const WindowConfig window{o.window_seconds};
  ValidateWindowConfig(window);
  const auto model = LoadModel(o.model);

  SessionManifestEntry entry;
  entry.file_path = o.session;
  entry.wifi_path = o.wifi;
  const auto session = LoadSession(entry);
  if (model.classifier.feature_mode() != FeatureMode::kGnssOnly && o.wifi.empty()) {
    std::cerr << "gnssio: warning: model uses Wi-Fi features but no --wifi file was given\n";
  }
  const auto pred = PredictSession(model.classifier, session, window);

  const std::int64_t width_ms = static_cast<std::int64_t>(window.window_seconds) * 1000;
  std::ostringstream table;
  table << "kind,timestamp_ms,window_index,epoch_label,window_label,indoor_votes,outdoor_votes,"
           "prior_applied,fallback_used\n";
  std::size_t w = 0;
  for (const auto& t : pred.epochs) {
    const auto index = (t.epoch_timestamp - session.start_time) / width_ms;
    while (w < pred.windows.size() && pred.windows[w].window_index < index) ++w;
    table << "epoch," << t.epoch_timestamp << ',' << index << ',' << LabelName(t.final_label)
          << ',' << LabelName(pred.windows[w].label) << ',' << t.indoor_votes() << ','
          << t.outdoor_votes() << ',' << (t.prior_applied ? 1 : 0) << ','
          << (t.fallback_used ? 1 : 0) << '\n';
  }
  for (const auto& win : pred.windows) {
    table << "window," << win.window_start << ',' << win.window_index << ",," << LabelName(win.label)
          << ',' << win.n_indoor << ',' << (win.n_epochs - win.n_indoor) << ",,\n";
  }
  EmitTable(o, "predictions.csv", [&](std::ostream& out) { out << table.str(); });
  if (!o.out_dir.empty()) {
    WriteRunConfig(o.out_dir, "predict",
                   {{"model", o.model},
                    {"session", o.session},
                    {"wifi", o.wifi},
                    {"window_seconds", window.window_seconds}});
  }
  return 0;
}

int CmdEvaluate(const Options& o) {
  if (o.model.empty()) Usage("--model is required");
  const auto model = LoadModel(o.model);
  const auto meta = [&](const char* key, const std::string& fallback) {
    const auto it = model.metadata.find(key);
    return it == model.metadata.end() ? fallback : it->second;
  };
  const Scenario scenario = RequireScenario(o.scenario.empty() ? meta("scenario", "S1") : o.scenario);
  const std::uint64_t seed = o.seed_given ? o.seed : std::stoull(meta("split_seed", "1"));
  const FeatureMode mode = RequireMode(o.feature_mode);
  const WindowConfig window{o.window_seconds};
  ValidateWindowConfig(window);

  const auto entries = ReadManifest(o.manifest.empty() ? (Usage("--manifest is required"), "")
                                                       : o.manifest);
  const auto split = MakeSplit(entries, scenario, seed);
  const auto test = LoadSessions(SelectByIndex<SessionManifestEntry>(entries, split.test));
  const auto result = Evaluate(model.classifier, test, window, mode);

  const MetricsCell cell{model.classifier.method(), scenario, window.window_seconds, mode};
  std::ostringstream text;
  WriteMetricsText(text, cell, result);
  if (o.out_dir.empty()) {
    WriteMetricsCsv(std::cout, cell, result);
  } else {
    const auto dir = PrepareOutDir(o.out_dir);
    std::ofstream csv(dir / "metrics.csv", std::ios::binary);
    WriteMetricsCsv(csv, cell, result);
    WriteText(dir / "metrics.txt", text.str());
    WriteRunConfig(dir, "evaluate",
                   {{"manifest", o.manifest},
                    {"model", o.model},
                    {"scenario", ScenarioName(scenario)},
                    {"seed", seed},
                    {"window_seconds", window.window_seconds},
                    {"feature_mode", FeatureModeName(mode)}});
  }
  std::cerr << text.str();
  return 0;
}

int CmdExportRoc(const Options& o) {
  const auto feature = ParseRocFeature(o.feature);
  if (!feature) Usage("unknown ROC feature '" + o.feature + "'");
  const auto sessions = LoadManifestSessions(o.manifest);
  const auto roc = ExportRoc(*feature, sessions);
  EmitTable(o, "roc.csv", [&](std::ostream& out) { WriteRocCsv(out, roc); });
  if (!o.out_dir.empty()) {
    WriteRunConfig(o.out_dir, "export-roc", {{"manifest", o.manifest}, {"feature", o.feature}});
  }
  return 0;
}

int CmdExportScatter(const Options& o) {
  std::optional<Label> filter;
  if (o.label != "all") {
    filter = ParseLabel(o.label);
    if (!filter) Usage("unknown label '" + o.label + "'");
  }
  const auto sessions = LoadManifestSessions(o.manifest);
  const auto points = ExportCnrElevation(sessions, filter);
  EmitTable(o, "cnr_elevation.csv", [&](std::ostream& out) { WriteScatterCsv(out, points); });
  if (!o.out_dir.empty()) {
    WriteRunConfig(o.out_dir, "export-scatter", {{"manifest", o.manifest}, {"label", o.label}});
  }
  return 0;
}

int CmdContainment(const Options& o) {
  if (o.model.empty()) Usage("--model is required");
  const auto scenario = ParseContainmentScenario(o.containment);
  if (!scenario) Usage("unknown containment scenario '" + o.containment + "'");
  SynthConfig cfg = o.config.empty() ? SynthConfig{} : LoadSynthConfig(o.config);
  if (o.seed_given) cfg.seed = o.seed;
  const auto model = LoadModel(o.model);
  const auto segments = GenerateContainmentScenario(cfg, *scenario);
  const auto stats = ContainmentReport(
      [&](const Epoch& e) { return model.classifier.PredictEpoch(e).final_label; }, segments);
  EmitTable(o, "containment.csv", [&](std::ostream& out) { WriteContainmentCsv(out, stats); });
  if (!o.out_dir.empty()) {
    WriteRunConfig(o.out_dir, "containment-report",
                   {{"model", o.model},
                    {"scenario", o.containment},
                    {"synth_config", json::parse(SynthConfigToJson(cfg))}});
  }
  return 0;
}

}  // namespace
}  // namespace gnssio

int main(int argc, char** argv) {
  using namespace gnssio;
  CLI::App app{"GNSS-based indoor/outdoor environment classification"};
  app.require_subcommand(1);
  Options o;

  auto add_manifest = [&](CLI::App* c) {
    c->add_option("--manifest", o.manifest, "Session manifest CSV");
  };
  auto add_seed = [&](CLI::App* c) {
    c->add_option("--seed", o.seed, "Random seed")->each([&](const std::string&) {
      o.seed_given = true;
    });
  };
  auto add_out = [&](CLI::App* c) {
    c->add_option("--out-dir", o.out_dir, "Output directory");
  };

  auto* synth = app.add_subcommand("synth", "Generate a labeled synthetic dataset");
  synth->add_option("--config", o.config, "Synthetic generator config (JSON)");
  add_seed(synth);
  add_out(synth);

  auto* ingest = app.add_subcommand("ingest", "Parse and clean sessions, report counts");
  add_manifest(ingest);
  add_out(ingest);

  auto* train = app.add_subcommand("train", "Train a classifier");
  add_manifest(train);
  train->add_option("--method", o.method, "threshold | svm | dt | rf");
  train->add_option("--feature-mode", o.feature_mode, "gnss | wifi | fused");
  train->add_option("--scenario", o.scenario, "S1 | S2 (default S1)");
  train->add_option("--config", o.config, "Hyperparameter overrides (JSON)");
  train->add_option("--model", o.model, "Model output path (default <out-dir>/model.json)");
  add_seed(train);
  add_out(train);

  auto* predict = app.add_subcommand("predict", "Predict one session");
  predict->add_option("--model", o.model, "Model file");
  predict->add_option("--session", o.session, "Session CSV");
  predict->add_option("--wifi", o.wifi, "Wi-Fi scan CSV for the session");
  predict->add_option("--window-seconds", o.window_seconds, "Aggregation window (multiple of 5)");
  add_out(predict);

  auto* evaluate = app.add_subcommand("evaluate", "Evaluate a model on a scenario split");
  add_manifest(evaluate);
  evaluate->add_option("--model", o.model, "Model file");
  evaluate->add_option("--scenario", o.scenario, "S1 | S2 (default: from model)");
  evaluate->add_option("--window-seconds", o.window_seconds, "Aggregation window (multiple of 5)");
  evaluate->add_option("--feature-mode", o.feature_mode, "gnss | wifi | fused");
  add_seed(evaluate);
  add_out(evaluate);

  auto* roc = app.add_subcommand("export-roc", "Export a ROC table as CSV");
  add_manifest(roc);
  roc->add_option("--feature", o.feature, "mean-cnr | sat-count | sat:<const>:<svid>:<MHz>");
  add_out(roc);

  auto* scatter = app.add_subcommand("export-scatter", "Export CNR vs elevation as CSV");
  add_manifest(scatter);
  scatter->add_option("--label", o.label, "indoor | outdoor | all");
  add_out(scatter);

  auto* containment =
      app.add_subcommand("containment-report", "Per-segment containment statistics");
  containment->add_option("--model", o.model, "Model file");
  containment->add_option("--scenario", o.containment, "under-bridge | near-window");
  containment->add_option("--config", o.config, "Synthetic generator config (JSON)");
  add_seed(containment);
  add_out(containment);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (synth->parsed()) return CmdSynth(o);
    if (ingest->parsed()) return CmdIngest(o);
    if (train->parsed()) return CmdTrain(o);
    if (predict->parsed()) return CmdPredict(o);
    if (evaluate->parsed()) return CmdEvaluate(o);
    if (roc->parsed()) return CmdExportRoc(o);
    if (scatter->parsed()) return CmdExportScatter(o);
    if (containment->parsed()) return CmdContainment(o);
  } catch (const Error& e) {
    std::cerr << "gnssio: " << e.what() << '\n';
    return e.code() == ErrorCode::kInvalidArgument ? 2 : 10 + static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "gnssio: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
