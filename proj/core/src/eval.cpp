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

#include "gnssio/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

#include "gnssio/error.hpp"

namespace gnssio {
namespace {

std::string Percent(double fraction) {
  if (std::isnan(fraction)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * fraction);
  return buf;
}

}  // namespace

std::string_view ScenarioName(Scenario s) { return s == Scenario::kS1 ? "S1" : "S2"; }

std::optional<Scenario> ParseScenario(std::string_view text) {
  if (text == "S1" || text == "s1" || text == "1") return Scenario::kS1;
  if (text == "S2" || text == "s2" || text == "2") return Scenario::kS2;
  return std::nullopt;
}

ScenarioSplit MakeSplit(std::span<const SessionManifestEntry> manifest, Scenario scenario,
                        std::uint64_t seed) {
  std::vector<std::size_t> indoor_a, outdoor_a, group_b;
  for (std::size_t i = 0; i < manifest.size(); ++i) {
    if (manifest[i].group == Group::kB) {
      group_b.push_back(i);
    } else {
      (manifest[i].label == Label::kIndoor ? indoor_a : outdoor_a).push_back(i);
    }
  }
  if (indoor_a.empty() && outdoor_a.empty()) {
    throw Error(ErrorCode::kMissingGroup, "manifest has no Group A sessions");
  }

  ScenarioSplit split;
  split.scenario = scenario;
  split.seed = seed;
  if (scenario == Scenario::kS2) {
    if (group_b.empty()) throw Error(ErrorCode::kMissingGroup, "scenario S2 needs Group B sessions");
    split.train = indoor_a;
    split.train.insert(split.train.end(), outdoor_a.begin(), outdoor_a.end());
    split.test = group_b;
  } else {
    std::mt19937_64 rng(seed);
    for (auto* pool : {&indoor_a, &outdoor_a}) {
      std::shuffle(pool->begin(), pool->end(), rng);
      const auto n_test = static_cast<std::size_t>(std::llround(0.2 * static_cast<double>(pool->size())));
      split.test.insert(split.test.end(), pool->begin(), pool->begin() + static_cast<std::ptrdiff_t>(n_test));
      split.train.insert(split.train.end(), pool->begin() + static_cast<std::ptrdiff_t>(n_test), pool->end());
    }
    split.test.insert(split.test.end(), group_b.begin(), group_b.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

double ClassMetrics::indoor_accuracy() const {
  if (n_indoor() == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(true_indoor) / static_cast<double>(n_indoor());
}

double ClassMetrics::outdoor_accuracy() const {
  if (n_outdoor() == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(true_outdoor) / static_cast<double>(n_outdoor());
}

void ClassMetrics::Add(Label truth, Label predicted) {
  if (truth == Label::kIndoor) {
    (predicted == Label::kIndoor ? true_indoor : false_outdoor) += 1;
  } else {
    (predicted == Label::kOutdoor ? true_outdoor : false_indoor) += 1;
  }
}

ClassMetrics& ClassMetrics::operator+=(const ClassMetrics& o) {
  true_indoor += o.true_indoor;
  false_outdoor += o.false_outdoor;
  true_outdoor += o.true_outdoor;
  false_indoor += o.false_indoor;
  return *this;
}

SessionPrediction PredictSession(const Classifier& classifier, const Session& session,
                                 const WindowConfig& window) {
  SessionPrediction out;
  out.epochs.reserve(session.epochs.size());
  for (const auto& epoch : session.epochs) {
    if (epoch.observations.empty()) continue;
    out.epochs.push_back(classifier.PredictEpoch(epoch));
  }
  out.windows = AggregateWindows(out.epochs, window, session.start_time);
  return out;
}

EvaluationResult Evaluate(const Classifier& classifier, std::span<const Session> sessions,
                          const WindowConfig& window, FeatureMode mode) {
  if (classifier.feature_mode() != mode) {
    throw Error(ErrorCode::kFeatureModeMismatch,
                "model trained for '" + std::string(FeatureModeName(classifier.feature_mode())) +
                    "' features, evaluation requested '" + std::string(FeatureModeName(mode)) + "'");
  }
  ValidateWindowConfig(window);
  EvaluationResult result;
  for (const auto& session : sessions) {
    const auto prediction = PredictSession(classifier, session, window);
    ClassMetrics m;
    for (const auto& w : prediction.windows) m.Add(session.entry.label, w.label);
    result.overall += m;
    result.by_group[session.entry.group] += m;
    if (session.entry.sublabel != Sublabel::kNone) result.by_sublabel[session.entry.sublabel] += m;
    ++result.sessions;
  }
  return result;
}

EvaluationResult Evaluate(const Classifier& classifier, std::span<const Session> all_sessions,
                          const ScenarioSplit& split, const WindowConfig& window,
                          FeatureMode mode) {
  const auto test = SelectByIndex<Session>(all_sessions, split.test);
  return Evaluate(classifier, test, window, mode);
}

std::optional<RocFeature> ParseRocFeature(std::string_view text) {
  if (text == "mean-cnr" || text == "mean_cnr") return RocFeature{RocFeatureKind::kMeanCnr, {}};
  if (text == "sat-count" || text == "sat_count" || text == "satellite-count") {
    return RocFeature{RocFeatureKind::kSatelliteCount, {}};
  }
  if (!text.starts_with("sat:")) return std::nullopt;
  text.remove_prefix(4);
  const auto c1 = text.find(':');
  if (c1 == std::string_view::npos) return std::nullopt;
  const auto c2 = text.find(':', c1 + 1);
  if (c2 == std::string_view::npos) return std::nullopt;
  RocFeature f{RocFeatureKind::kPerSatelliteCnr, {}};
  f.key.constellation = ParseConstellation(text.substr(0, c1));
  const auto svid_text = text.substr(c1 + 1, c2 - c1 - 1);
  if (std::from_chars(svid_text.data(), svid_text.data() + svid_text.size(), f.key.svid).ec !=
      std::errc()) {
    return std::nullopt;
  }
  const auto freq_text = std::string(text.substr(c2 + 1));
  double freq = 0;
  if (std::from_chars(freq_text.data(), freq_text.data() + freq_text.size(), freq).ec !=
      std::errc()) {
    return std::nullopt;
  }
  f.key.frequency_decimhz = FrequencyBucket(freq);
  return f;
}

std::vector<RocPoint> ExportRoc(const RocFeature& feature, std::span<const Session> sessions) {
  std::vector<LabeledValue> samples;
  switch (feature.kind) {
    case RocFeatureKind::kPerSatelliteCnr: {
      auto by_key = CollectKeySamples(sessions);
      const auto it = by_key.find(feature.key);
      if (it == by_key.end()) {
        throw Error(ErrorCode::kOneClassOnly, "no samples for satellite " + feature.key.ToString());
      }
      samples = std::move(it->second);
      break;
    }
    case RocFeatureKind::kMeanCnr:
    case RocFeatureKind::kSatelliteCount:
      for (const auto& s : sessions) {
        for (const auto& e : s.epochs) {
          if (e.observations.empty()) continue;
          const double v = feature.kind == RocFeatureKind::kMeanCnr
                               ? e.mean_cnr
                               : static_cast<double>(e.satellite_count);
          samples.push_back({v, s.entry.label});
        }
      }
      break;
  }
  return SweepRoc(samples);
}

void WriteRocCsv(std::ostream& out, std::span<const RocPoint> roc) {
  out << "threshold,pd,pf,n_indoor,n_outdoor,total_accuracy\n";
  char buf[160];
  for (const auto& p : roc) {
    std::snprintf(buf, sizeof(buf), "%.6g,%.6f,%.6f,%zu,%zu,%.6f\n", p.threshold, p.pd, p.pf,
                  p.n_indoor, p.n_outdoor, TotalAccuracy(p.pd, p.pf, p.n_indoor, p.n_outdoor));
    out << buf;
  }
}

std::vector<ScatterPoint> ExportCnrElevation(std::span<const Session> sessions,
                                             std::optional<Label> filter) {
  std::vector<ScatterPoint> points;
  for (const auto& s : sessions) {
    if (filter && s.entry.label != *filter) continue;
    for (const auto& e : s.epochs) {
      for (const auto& obs : e.observations) {
        if (!obs.elevation_deg || !obs.cnr_dbhz || !obs.carrier_frequency_mhz) continue;
        points.push_back({s.entry.label, MakeKey(obs), *obs.elevation_deg, *obs.cnr_dbhz});
      }
    }
  }
  return points;
}

void WriteScatterCsv(std::ostream& out, std::span<const ScatterPoint> points) {
  out << "label,constellation,svid,frequency_mhz,elevation_deg,cnr_dbhz\n";
  char buf[160];
  for (const auto& p : points) {
    std::snprintf(buf, sizeof(buf), "%s,%s,%d,%.1f,%.4g,%.4g\n",
                  std::string(LabelName(p.label)).c_str(),
                  std::string(ConstellationName(p.key.constellation)).c_str(), p.key.svid,
                  p.key.frequency_bucket_mhz(), p.elevation_deg, p.cnr_dbhz);
    out << buf;
  }
}

std::vector<ContainmentSegmentStats> ContainmentReport(const EpochPredictor& predict,
                                                       std::span<const Segment> segments) {
  if (segments.empty()) throw Error(ErrorCode::kInvalidArgument, "no containment segments");
  std::vector<ContainmentSegmentStats> stats;
  for (const auto& seg : segments) {
    if (seg.epochs.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "segment '" + seg.tag + "' has no epochs");
    }
    ContainmentSegmentStats st;
    st.segment_tag = seg.tag;
    st.physical_label = seg.physical_label;
    st.n_samples = seg.epochs.size();
    double cnr = 0, sats = 0;
    std::size_t indoor = 0;
    for (const auto& e : seg.epochs) {
      cnr += e.mean_cnr;
      sats += e.satellite_count;
      indoor += predict(e) == Label::kIndoor ? 1 : 0;
    }
    const double n = static_cast<double>(st.n_samples);
    st.avg_cnr = cnr / n;
    st.avg_satellite_count = sats / n;
    st.pct_predicted_indoor = 100.0 * static_cast<double>(indoor) / n;
    st.pct_predicted_outdoor = 100.0 - st.pct_predicted_indoor;
    stats.push_back(st);
  }
  return stats;
}

void WriteContainmentCsv(std::ostream& out, std::span<const ContainmentSegmentStats> stats) {
  out << "segment,physical_label,n_samples,avg_cnr_dbhz,avg_satellite_count,pct_predicted_indoor,"
         "pct_predicted_outdoor\n";
  char buf[256];
  for (const auto& s : stats) {
    std::snprintf(buf, sizeof(buf), "%s,%s,%zu,%.1f,%.1f,%.1f,%.1f\n", s.segment_tag.c_str(),
                  std::string(LabelName(s.physical_label)).c_str(), s.n_samples, s.avg_cnr,
                  s.avg_satellite_count, s.pct_predicted_indoor, s.pct_predicted_outdoor);
    out << buf;
  }
}

namespace {

void WriteMetricsRow(std::ostream& out, const MetricsCell& cell, const std::string& breakdown,
                     const ClassMetrics& m) {
  out << MethodName(cell.method) << ',' << ScenarioName(cell.scenario) << ','
      << cell.window_seconds << ',' << FeatureModeName(cell.mode) << ',' << breakdown << ','
      << m.n_indoor() << ',' << m.n_outdoor() << ',' << m.true_indoor << ',' << m.false_outdoor
      << ',' << m.true_outdoor << ',' << m.false_indoor << ',' << Percent(m.indoor_accuracy())
      << ',' << Percent(m.outdoor_accuracy()) << '\n';
}

}  // namespace

void WriteMetricsCsv(std::ostream& out, const MetricsCell& cell, const EvaluationResult& result) {
  out << "method,scenario,window_seconds,feature_mode,breakdown,n_indoor,n_outdoor,true_indoor,"
         "false_outdoor,true_outdoor,false_indoor,indoor_accuracy_pct,outdoor_accuracy_pct\n";
  WriteMetricsRow(out, cell, "overall", result.overall);
  for (const auto& [g, m] : result.by_group) {
    WriteMetricsRow(out, cell, "group_" + std::string(GroupName(g)), m);
  }
  for (const auto& [s, m] : result.by_sublabel) {
    WriteMetricsRow(out, cell, "sublabel_" + std::string(SublabelName(s)), m);
  }
}

void WriteMetricsText(std::ostream& out, const MetricsCell& cell, const EvaluationResult& result) {
  out << "method: " << MethodName(cell.method) << '\n'
      << "scenario: " << ScenarioName(cell.scenario) << '\n'
      << "window_seconds: " << cell.window_seconds << '\n'
      << "feature_mode: " << FeatureModeName(cell.mode) << '\n'
      << "sessions: " << result.sessions << '\n'
      << "windows: " << result.overall.total() << '\n'
      << "accuracy_pct: I=" << Percent(result.overall.indoor_accuracy())
      << " O=" << Percent(result.overall.outdoor_accuracy()) << '\n';
  for (const auto& [s, m] : result.by_sublabel) {
    out << "accuracy_pct[" << SublabelName(s) << "]: I=" << Percent(m.indoor_accuracy())
        << " O=" << Percent(m.outdoor_accuracy()) << '\n';
  }
}

}  // namespace gnssio
