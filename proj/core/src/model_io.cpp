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

#include "gnssio/model_io.hpp"

#include <fstream>
#include <sstream>

#include "gnssio/error.hpp"
#include "json.hpp"

namespace gnssio {
namespace {

using nlohmann::json;

constexpr const char* kFormatName = "gnssio-model";

[[noreturn]] void Mismatch(const std::string& what) {
  throw Error(ErrorCode::kModelSchemaMismatch, what);
}

json TreeToJson(const DecisionTreeModel& tree) {
  json feature = json::array(), split = json::array(), left = json::array(),
       right = json::array(), label = json::array(), n_in = json::array(),
       n_out = json::array();
  for (const auto& node : tree.nodes()) {
    feature.push_back(node.feature);
    split.push_back(node.split_value);
    left.push_back(node.left);
    right.push_back(node.right);
    label.push_back(LabelName(node.label));
    n_in.push_back(node.n_indoor);
    n_out.push_back(node.n_outdoor);
  }
  return {{"max_depth", tree.max_depth()},
          {"min_leaf_size", tree.min_leaf_size()},
          {"feature", feature},
          {"split", split},
          {"left", left},
          {"right", right},
          {"label", label},
          {"n_indoor", n_in},
          {"n_outdoor", n_out}};
}

Label LabelFromJson(const json& j) {
  const auto label = ParseLabel(j.get<std::string>());
  if (!label) Mismatch("bad label '" + j.get<std::string>() + "'");
  return *label;
}

DecisionTreeModel TreeFromJson(const json& j, std::size_t n_features) {
  const auto& feature = j.at("feature");
  const std::size_t n = feature.size();
  for (const char* field : {"split", "left", "right", "label", "n_indoor", "n_outdoor"}) {
    if (j.at(field).size() != n) Mismatch(std::string("tree field '") + field + "' length");
  }
  std::vector<TreeNode> nodes(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& node = nodes[i];
    node.feature = feature[i].get<int>();
    if (node.feature >= static_cast<int>(n_features)) Mismatch("tree feature index out of range");
    node.split_value = j.at("split")[i].get<double>();
    node.left = j.at("left")[i].get<int>();
    node.right = j.at("right")[i].get<int>();
    node.label = LabelFromJson(j.at("label")[i]);
    node.n_indoor = j.at("n_indoor")[i].get<std::uint32_t>();
    node.n_outdoor = j.at("n_outdoor")[i].get<std::uint32_t>();
  }
  try {
    return {std::move(nodes), j.at("max_depth").get<int>(),
            j.at("min_leaf_size").get<std::size_t>()};
  } catch (const Error& e) {
    Mismatch(e.what());
  }
}

json TableToJson(const ThresholdTable& table) {
  json entries = json::array();
  for (const auto& [key, e] : table.entries) {
    entries.push_back({{"constellation", ConstellationName(key.constellation)},
                       {"svid", key.svid},
                       {"frequency_decimhz", key.frequency_decimhz},
                       {"threshold", e.threshold},
                       {"train_accuracy", e.train_accuracy},
                       {"n_train_samples", e.n_train_samples},
                       {"n_indoor", e.n_indoor},
                       {"n_outdoor", e.n_outdoor}});
  }
  return {{"grid_policy", table.grid_policy},
          {"sat_count_prior", table.sat_count_prior},
          {"mean_cnr_fallback_threshold", table.mean_cnr_fallback_threshold},
          {"min_samples_per_key", table.min_samples_per_key},
          {"entries", entries}};
}

ThresholdTable TableFromJson(const json& j) {
  ThresholdTable table;
  table.grid_policy = j.at("grid_policy").get<std::string>();
  if (table.grid_policy != kGridPolicy) Mismatch("unknown grid policy '" + table.grid_policy + "'");
  table.sat_count_prior = j.at("sat_count_prior").get<int>();
  table.mean_cnr_fallback_threshold = j.at("mean_cnr_fallback_threshold").get<double>();
  table.min_samples_per_key = j.at("min_samples_per_key").get<std::size_t>();
  for (const auto& item : j.at("entries")) {
    ThresholdEntry e;
    e.key.constellation = ParseConstellation(item.at("constellation").get<std::string>());
    e.key.svid = item.at("svid").get<int>();
    e.key.frequency_decimhz = item.at("frequency_decimhz").get<std::int64_t>();
    e.threshold = item.at("threshold").get<double>();
    e.train_accuracy = item.at("train_accuracy").get<double>();
    e.n_train_samples = item.at("n_train_samples").get<std::size_t>();
    e.n_indoor = item.at("n_indoor").get<std::size_t>();
    e.n_outdoor = item.at("n_outdoor").get<std::size_t>();
    if (!table.entries.emplace(e.key, e).second) Mismatch("duplicate key " + e.key.ToString());
  }
  return table;
}

json MlToJson(const MlModel& model) {
  json body = {{"normalizer", {{"min", model.normalizer.mins()}, {"max", model.normalizer.maxs()}}}};
  if (const auto* tree = std::get_if<DecisionTreeModel>(&model.body)) {
    body["tree"] = TreeToJson(*tree);
  } else if (const auto* forest = std::get_if<RandomForestModel>(&model.body)) {
    const auto& p = forest->params();
    json trees = json::array();
    for (const auto& t : forest->trees()) trees.push_back(TreeToJson(t));
    body["forest"] = {{"n_trees", p.n_trees},
                      {"features_per_split", p.features_per_split},
                      {"bootstrap", p.bootstrap},
                      {"max_depth", p.max_depth},
                      {"min_leaf_size", p.min_leaf_size},
                      {"seed", p.seed},
                      {"oob_accuracy", forest->oob_accuracy() ? json(*forest->oob_accuracy())
                                                              : json(nullptr)},
                      {"trees", trees}};
  } else {
    const auto& svm = std::get<LinearSvmModel>(model.body);
    body["svm"] = {{"weights", svm.weights()},
                   {"bias", svm.bias()},
                   {"lambda", svm.params().lambda},
                   {"epochs", svm.params().epochs},
                   {"eta0", svm.params().eta0},
                   {"seed", svm.params().seed}};
  }
  return body;
}

MlModel MlFromJson(const json& j, Method method, FeatureMode mode,
                   std::vector<std::string> names) {
  MlModel model;
  model.method = method;
  model.mode = mode;
  model.feature_names = std::move(names);
  const std::size_t d = model.feature_names.size();
  const auto& norm = j.at("normalizer");
  auto mins = norm.at("min").get<std::vector<double>>();
  auto maxs = norm.at("max").get<std::vector<double>>();
  if (mins.size() != d || maxs.size() != d) Mismatch("normalizer width differs from feature list");
  model.normalizer = Normalizer(std::move(mins), std::move(maxs));

  switch (method) {
    case Method::kDecisionTree:
      model.body = TreeFromJson(j.at("tree"), d);
      break;
    case Method::kRandomForest: {
      const auto& f = j.at("forest");
      ForestParams p;
      p.n_trees = f.at("n_trees").get<std::size_t>();
      p.features_per_split = f.at("features_per_split").get<std::size_t>();
      p.bootstrap = f.at("bootstrap").get<bool>();
      p.max_depth = f.at("max_depth").get<int>();
      p.min_leaf_size = f.at("min_leaf_size").get<std::size_t>();
      p.seed = f.at("seed").get<std::uint64_t>();
      std::optional<double> oob;
      if (!f.at("oob_accuracy").is_null()) oob = f.at("oob_accuracy").get<double>();
      std::vector<DecisionTreeModel> trees;
      for (const auto& t : f.at("trees")) trees.push_back(TreeFromJson(t, d));
      if (trees.size() != p.n_trees) Mismatch("forest tree count differs from n_trees");
      model.body = RandomForestModel(std::move(trees), p, oob);
      break;
    }
    case Method::kSvm: {
      const auto& s = j.at("svm");
      SvmParams p;
      p.lambda = s.at("lambda").get<double>();
      p.epochs = s.at("epochs").get<int>();
      p.eta0 = s.at("eta0").get<double>();
      p.seed = s.at("seed").get<std::uint64_t>();
      auto w = s.at("weights").get<std::vector<double>>();
      if (w.size() != d) Mismatch("SVM weight count differs from feature list");
      model.body = LinearSvmModel(std::move(w), s.at("bias").get<double>(), p);
      break;
    }
    case Method::kThreshold:
      Mismatch("threshold method stored as ML body");
  }
  return model;
}

}  // namespace

std::string SerializeModel(const Classifier& classifier, const ModelMetadata& metadata) {
  json doc;
  doc["format"] = kFormatName;
  doc["format_version"] = kModelFormatVersion;
  doc["method"] = MethodName(classifier.method());
  doc["feature_mode"] = FeatureModeName(classifier.feature_mode());
  doc["metadata"] = metadata;
  if (const auto* table = classifier.threshold_table()) {
    doc["feature_names"] = std::vector<std::string>{"cnr_dbhz"};
    doc["threshold_table"] = TableToJson(*table);
  } else {
    const auto& ml = *classifier.ml_model();
    doc["feature_names"] = ml.feature_names;
    doc["ml"] = MlToJson(ml);
  }
  // Threshold tables stay human-readable; ML bodies are written compactly.
  return doc.dump(classifier.threshold_table() != nullptr ? 1 : -1) + "\n";
}

ModelFile ParseModel(const std::string& text) {
  try {
    const json doc = json::parse(text);
    if (doc.at("format").get<std::string>() != kFormatName) Mismatch("not a gnssio model file");
    const int version = doc.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      Mismatch("unsupported model format version " + std::to_string(version));
    }
    const auto method = ParseMethod(doc.at("method").get<std::string>());
    const auto mode = ParseFeatureMode(doc.at("feature_mode").get<std::string>());
    if (!method || !mode) Mismatch("unknown method or feature mode");
    auto names = doc.at("feature_names").get<std::vector<std::string>>();
    ModelMetadata metadata;
    if (doc.contains("metadata")) metadata = doc.at("metadata").get<ModelMetadata>();

    if (*method == Method::kThreshold) {
      if (*mode != FeatureMode::kGnssOnly || names != std::vector<std::string>{"cnr_dbhz"}) {
        Mismatch("threshold model feature list mismatch");
      }
      return {Classifier(TableFromJson(doc.at("threshold_table"))), std::move(metadata)};
    }
    if (names != FeatureNames(*mode)) {
      Mismatch("feature order in model file differs from this build's feature layout");
    }
    return {Classifier(MlFromJson(doc.at("ml"), *method, *mode, std::move(names))),
            std::move(metadata)};
  } catch (const json::exception& e) {
    Mismatch(std::string("malformed model file: ") + e.what());
  }
}

void SaveModel(const std::filesystem::path& path, const Classifier& classifier,
               const ModelMetadata& metadata) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  out << SerializeModel(classifier, metadata);
  if (!out) throw Error(ErrorCode::kIo, "write failed for '" + path.string() + "'");
}

ModelFile LoadModel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseModel(buf.str());
}

}  // namespace gnssio
