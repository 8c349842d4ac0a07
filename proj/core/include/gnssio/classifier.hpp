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

#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gnssio/features.hpp"
#include "gnssio/ml.hpp"
#include "gnssio/threshold.hpp"
#include "gnssio/types.hpp"

namespace gnssio {

using MlBody = std::variant<DecisionTreeModel, RandomForestModel, LinearSvmModel>;

// A trained ML model together with everything needed to score an epoch.
struct MlModel {
  Method method = Method::kRandomForest;
  FeatureMode mode = FeatureMode::kGnssOnly;
  std::vector<std::string> feature_names;
  Normalizer normalizer;
  MlBody body;

  // `x` must already be normalized.
  Label PredictRow(std::span<const double> x) const;
};

// Per-observation votes then majority; ties go to Indoor. `wifi` overrides
// the epoch's own Wi-Fi features when given. Throws Error{kEmptyEpoch} for
// an epoch without observations in GNSS and fused modes.
PredictionTrace PredictEpochMl(const MlModel& model, const Epoch& epoch,
                               const std::optional<WifiEpochFeatures>& wifi = std::nullopt);

class Classifier {
 public:
  explicit Classifier(ThresholdTable table) : model_(std::move(table)) {}
  explicit Classifier(MlModel model) : model_(std::move(model)) {}

  Method method() const;
  FeatureMode feature_mode() const;
  PredictionTrace PredictEpoch(const Epoch& epoch) const;

  const ThresholdTable* threshold_table() const { return std::get_if<ThresholdTable>(&model_); }
  const MlModel* ml_model() const { return std::get_if<MlModel>(&model_); }

 private:
  std::variant<ThresholdTable, MlModel> model_;
};

struct TrainOptions {
  Method method = Method::kThreshold;
  FeatureMode mode = FeatureMode::kGnssOnly;
  ThresholdTrainOptions threshold;
  TreeParams tree;
  ForestParams forest;
  SvmParams svm;
};

struct TrainingReport {
  Method method = Method::kThreshold;
  FeatureMode mode = FeatureMode::kGnssOnly;
  std::size_t sessions = 0;
  std::size_t rows = 0;
  std::size_t indoor_rows = 0;
  std::size_t outdoor_rows = 0;
  ThresholdTrainingReport threshold;
  std::size_t table_entries = 0;
  // Tree and forest statistics.
  std::size_t trees = 0;
  std::size_t total_nodes = 0;
  int max_tree_depth = 0;
  std::optional<double> oob_accuracy;
  std::vector<double> svm_loss_history;
};

// Feature rows (unnormalized) and labels over all epochs of `sessions`.
struct LabeledRows {
  FeatureMatrix x;
  std::vector<Label> y;
};
LabeledRows BuildTrainingRows(std::span<const Session> sessions, FeatureMode mode);

// Throws Error{kFeatureModeMismatch} for the threshold method with a
// non-GNSS feature mode.
Classifier TrainClassifier(std::span<const Session> sessions, const TrainOptions& options,
                           TrainingReport* report = nullptr);

}  // namespace gnssio
