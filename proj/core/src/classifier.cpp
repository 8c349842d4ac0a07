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

#include "gnssio/classifier.hpp"

#include <algorithm>

#include "gnssio/error.hpp"

namespace gnssio {

Label MlModel::PredictRow(std::span<const double> x) const {
  return std::visit([&](const auto& m) { return m.Predict(x); }, body);
}

PredictionTrace PredictEpochMl(const MlModel& model, const Epoch& epoch,
                               const std::optional<WifiEpochFeatures>& wifi) {
  PredictionTrace trace;
  trace.epoch_timestamp = epoch.timestamp;
  trace.method = model.method;

  FeatureMatrix rows;
  if (wifi) {
    Epoch copy = epoch;
    copy.wifi = wifi;
    rows = BuildEpochMatrix(copy, model.mode);
  } else {
    rows = BuildEpochMatrix(epoch, model.mode);
  }
  if (rows.cols() != model.normalizer.size()) {
    throw Error(ErrorCode::kModelSchemaMismatch, "feature width differs from model");
  }
  trace.votes.reserve(rows.rows());
  for (std::size_t r = 0; r < rows.rows(); ++r) {
    auto row = rows.row(r);
    model.normalizer.ApplyRow(row);
    trace.votes.push_back(model.PredictRow(row));
  }
  trace.final_label = MajorityLabel(trace.votes);
  return trace;
}

Method Classifier::method() const {
  if (const auto* ml = ml_model()) return ml->method;
  return Method::kThreshold;
}

FeatureMode Classifier::feature_mode() const {
  if (const auto* ml = ml_model()) return ml->mode;
  return FeatureMode::kGnssOnly;
}

PredictionTrace Classifier::PredictEpoch(const Epoch& epoch) const {
  if (const auto* table = threshold_table()) return PredictEpochThreshold(*table, epoch);
  return PredictEpochMl(*ml_model(), epoch);
}

LabeledRows BuildTrainingRows(std::span<const Session> sessions, FeatureMode mode) {
  LabeledRows out{FeatureMatrix(FeatureNames(mode).size()), {}};
  for (const auto& session : sessions) {
    for (const auto& epoch : session.epochs) {
      if (epoch.observations.empty()) continue;
      const auto m = BuildEpochMatrix(epoch, mode);
      out.x.Append(m);
      out.y.insert(out.y.end(), m.rows(), session.entry.label);
    }
  }
  return out;
}

Classifier TrainClassifier(std::span<const Session> sessions, const TrainOptions& options,
                           TrainingReport* report) {
  TrainingReport local;
  local.method = options.method;
  local.mode = options.mode;
  local.sessions = sessions.size();

  if (options.method == Method::kThreshold) {
    if (options.mode != FeatureMode::kGnssOnly) {
      throw Error(ErrorCode::kFeatureModeMismatch,
                  "the threshold method only supports GNSS features");
    }
    auto table = TrainThresholdTable(sessions, options.threshold, &local.threshold);
    local.rows = local.threshold.observations;
    local.table_entries = table.entries.size();
    for (const auto& s : sessions) {
      std::size_t n = 0;
      for (const auto& e : s.epochs) n += e.observations.size();
      (s.entry.label == Label::kIndoor ? local.indoor_rows : local.outdoor_rows) += n;
    }
    if (report != nullptr) *report = local;
    return Classifier(std::move(table));
  }

  auto data = BuildTrainingRows(sessions, options.mode);
  if (data.x.rows() == 0) throw Error(ErrorCode::kEmptyTrainingSet, "no training rows");
  local.rows = data.x.rows();
  local.indoor_rows = static_cast<std::size_t>(std::count(data.y.begin(), data.y.end(), Label::kIndoor));
  local.outdoor_rows = local.rows - local.indoor_rows;

  MlModel model;
  model.method = options.method;
  model.mode = options.mode;
  model.feature_names = FeatureNames(options.mode);
  model.normalizer = Normalizer::Fit(data.x);
  model.normalizer.Apply(data.x);

  switch (options.method) {
    case Method::kDecisionTree: {
      auto tree = TrainTree(data.x, data.y, options.tree);
      local.trees = 1;
      local.total_nodes = tree.nodes().size();
      local.max_tree_depth = tree.depth();
      model.body = std::move(tree);
      break;
    }
    case Method::kRandomForest: {
      auto forest = TrainForest(data.x, data.y, options.forest);
      local.trees = forest.trees().size();
      for (const auto& t : forest.trees()) {
        local.total_nodes += t.nodes().size();
        local.max_tree_depth = std::max(local.max_tree_depth, t.depth());
      }
      local.oob_accuracy = forest.oob_accuracy();
      model.body = std::move(forest);
      break;
    }
    case Method::kSvm: {
      auto svm = TrainSvm(data.x, data.y, options.svm);
      local.svm_loss_history = svm.loss_history();
      model.body = std::move(svm);
      break;
    }
    case Method::kThreshold:
      break;
  }
  if (report != nullptr) *report = local;
  return Classifier(std::move(model));
}

}  // namespace gnssio
