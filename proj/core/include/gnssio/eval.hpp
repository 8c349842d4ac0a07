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

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gnssio/classifier.hpp"
#include "gnssio/temporal.hpp"
#include "gnssio/threshold.hpp"
#include "gnssio/types.hpp"

namespace gnssio {

enum class Scenario { kS1, kS2 };

std::string_view ScenarioName(Scenario s);
std::optional<Scenario> ParseScenario(std::string_view text);

// Session indices into the manifest the split was made from.
struct ScenarioSplit {
  Scenario scenario = Scenario::kS1;
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  std::uint64_t seed = 0;
};

// S1: Group A is split 80/20 by session (stratified by label, seeded); the
// test side also receives every Group B session. S2: train on all of Group
// A, test on all of Group B. Throws Error{kMissingGroup} when a required
// group is absent.
ScenarioSplit MakeSplit(std::span<const SessionManifestEntry> manifest, Scenario scenario,
                        std::uint64_t seed);

template <typename T>
std::vector<T> SelectByIndex(std::span<const T> items, std::span<const std::size_t> indices) {
  std::vector<T> out;
  out.reserve(indices.size());
  for (const auto i : indices) out.push_back(items[i]);
  return out;
}

// Confusion counts with Indoor as the positive class.
struct ClassMetrics {
  std::size_t true_indoor = 0;    // indoor called indoor
  std::size_t false_outdoor = 0;  // indoor called outdoor
  std::size_t true_outdoor = 0;   // outdoor called outdoor
  std::size_t false_indoor = 0;   // outdoor called indoor

  std::size_t n_indoor() const { return true_indoor + false_outdoor; }
  std::size_t n_outdoor() const { return true_outdoor + false_indoor; }
  std::size_t total() const { return n_indoor() + n_outdoor(); }
  // NaN when the class has no evaluated units.
  double indoor_accuracy() const;
  double outdoor_accuracy() const;

  void Add(Label truth, Label predicted);
  ClassMetrics& operator+=(const ClassMetrics& o);
  bool operator==(const ClassMetrics&) const = default;
};

struct EvaluationResult {
  ClassMetrics overall;
  std::map<Sublabel, ClassMetrics> by_sublabel;
  std::map<Group, ClassMetrics> by_group;
  std::size_t sessions = 0;
};

struct SessionPrediction {
  std::vector<PredictionTrace> epochs;
  std::vector<WindowLabel> windows;
};

SessionPrediction PredictSession(const Classifier& classifier, const Session& session,
                                 const WindowConfig& window);

// Scores windowed predictions on `sessions` against each session's label.
// Throws Error{kFeatureModeMismatch} when the classifier was trained for a
// different feature mode.
EvaluationResult Evaluate(const Classifier& classifier, std::span<const Session> sessions,
                          const WindowConfig& window, FeatureMode mode);

// Convenience: evaluate on split.test drawn from `all_sessions`.
EvaluationResult Evaluate(const Classifier& classifier, std::span<const Session> all_sessions,
                          const ScenarioSplit& split, const WindowConfig& window,
                          FeatureMode mode);

enum class RocFeatureKind { kPerSatelliteCnr, kMeanCnr, kSatelliteCount };

struct RocFeature {
  RocFeatureKind kind = RocFeatureKind::kMeanCnr;
  SatelliteKey key;  // only for kPerSatelliteCnr
};

// Parses "mean-cnr", "sat-count" or "sat:<constellation>:<svid>:<freq MHz>".
std::optional<RocFeature> ParseRocFeature(std::string_view text);

// Throws Error{kOneClassOnly} when the data lacks either label.
std::vector<RocPoint> ExportRoc(const RocFeature& feature, std::span<const Session> sessions);
void WriteRocCsv(std::ostream& out, std::span<const RocPoint> roc);

struct ScatterPoint {
  Label label = Label::kIndoor;
  SatelliteKey key;
  double elevation_deg = 0.0;
  double cnr_dbhz = 0.0;
};

// Observations with valid elevation whose session label matches `filter`
// (all labels when empty).
std::vector<ScatterPoint> ExportCnrElevation(std::span<const Session> sessions,
                                             std::optional<Label> filter);
void WriteScatterCsv(std::ostream& out, std::span<const ScatterPoint> points);

struct Segment {
  std::string tag;
  Label physical_label = Label::kOutdoor;
  std::vector<Epoch> epochs;
};

struct ContainmentSegmentStats {
  std::string segment_tag;
  Label physical_label = Label::kOutdoor;
  std::size_t n_samples = 0;
  double avg_cnr = 0.0;
  double avg_satellite_count = 0.0;
  double pct_predicted_indoor = 0.0;
  double pct_predicted_outdoor = 0.0;
};

using EpochPredictor = std::function<Label(const Epoch&)>;

// Throws Error{kInvalidArgument} for an empty segment list or a segment
// without epochs.
std::vector<ContainmentSegmentStats> ContainmentReport(const EpochPredictor& predict,
                                                       std::span<const Segment> segments);
void WriteContainmentCsv(std::ostream& out, std::span<const ContainmentSegmentStats> stats);

struct MetricsCell {
  Method method = Method::kThreshold;
  Scenario scenario = Scenario::kS1;
  int window_seconds = 5;
  FeatureMode mode = FeatureMode::kGnssOnly;
};

// One header line plus one row per breakdown (overall, per group, per
// sublabel) for a single (method, scenario, window, feature mode) cell.
void WriteMetricsCsv(std::ostream& out, const MetricsCell& cell, const EvaluationResult& result);
void WriteMetricsText(std::ostream& out, const MetricsCell& cell, const EvaluationResult& result);

}  // namespace gnssio
