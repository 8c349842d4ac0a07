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

// Per-satellite CNR threshold classifier.
//
// For every satellite key the training CNR samples are swept over a grid of
// thresholds. A sample is called Indoor when cnr <= threshold, so
//   PD = P(cnr <= t | indoor)   and   PF = P(cnr <= t | outdoor).
// The threshold maximizing total accuracy
//   PD * N_indoor / N + (1 - PF) * N_outdoor / N
// is stored per key. Prediction votes per satellite and takes the majority,
// except that epochs with few visible satellites are called Indoor outright.

#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gnssio/features.hpp"
#include "gnssio/types.hpp"

namespace gnssio {

struct LabeledValue {
  double value = 0.0;
  Label label = Label::kIndoor;
};

struct RocPoint {
  double threshold = 0.0;
  double pd = 0.0;
  double pf = 0.0;
  std::size_t n_indoor = 0;
  std::size_t n_outdoor = 0;
};

// Number of correctly classified training samples at this operating point.
// pd/pf are exact ratios of counts, so rounding recovers the integers.
std::size_t CorrectCount(const RocPoint& p);

// Grid: one point strictly below every sample, every distinct sample value,
// and the midpoint between each pair of consecutive distinct values. Points
// are ordered by increasing threshold. Throws Error{kOneClassOnly} unless
// both classes are present.
std::vector<RocPoint> SweepRoc(std::span<const LabeledValue> samples);

// Throws Error{kZeroTotal} when both counts are zero.
double TotalAccuracy(double pd, double pf, std::size_t n_indoor, std::size_t n_outdoor);

struct ThresholdEntry {
  SatelliteKey key;
  double threshold = 0.0;
  double train_accuracy = 0.0;
  std::size_t n_train_samples = 0;
  std::size_t n_indoor = 0;
  std::size_t n_outdoor = 0;

  bool operator==(const ThresholdEntry&) const = default;
};

// Maximal total accuracy; ties go to the smallest threshold. Throws
// Error{kInvalidArgument} on an empty table.
ThresholdEntry SelectThreshold(std::span<const RocPoint> roc);

inline constexpr const char* kGridPolicy = "observed-values-and-midpoints";

struct ThresholdTable {
  std::map<SatelliteKey, ThresholdEntry> entries;
  double mean_cnr_fallback_threshold = 0.0;
  int sat_count_prior = 10;
  std::size_t min_samples_per_key = 30;
  std::string grid_policy = kGridPolicy;

  bool operator==(const ThresholdTable&) const = default;
};

struct ThresholdTrainOptions {
  int sat_count_prior = 10;
  // Minimum labeled observations of each class before a key gets a threshold.
  std::size_t min_samples_per_key = 30;
};

struct ThresholdTrainingReport {
  std::size_t keys_seen = 0;
  std::size_t keys_one_class = 0;
  std::size_t keys_insufficient = 0;
  std::size_t observations = 0;
  std::size_t epochs = 0;
};

// Collects per-key labeled CNR samples (one per observation) from sessions.
std::map<SatelliteKey, std::vector<LabeledValue>> CollectKeySamples(
    std::span<const Session> sessions);

// Throws Error{kEmptyTrainingSet} for no data and Error{kOneClassOnly} if
// either label is missing from the training sessions.
ThresholdTable TrainThresholdTable(std::span<const Session> sessions,
                                   const ThresholdTrainOptions& options = {},
                                   ThresholdTrainingReport* report = nullptr);

PredictionTrace PredictEpochThreshold(const ThresholdTable& table, const Epoch& epoch);

}  // namespace gnssio
