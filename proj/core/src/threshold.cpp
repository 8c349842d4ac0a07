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

#include "gnssio/threshold.hpp"

#include <algorithm>
#include <cmath>

#include "gnssio/error.hpp"

namespace gnssio {

std::size_t CorrectCount(const RocPoint& p) {
  const auto hits_indoor = std::llround(p.pd * static_cast<double>(p.n_indoor));
  const auto rejects_outdoor = std::llround((1.0 - p.pf) * static_cast<double>(p.n_outdoor));
  return static_cast<std::size_t>(hits_indoor + rejects_outdoor);
}

std::vector<RocPoint> SweepRoc(std::span<const LabeledValue> samples) {
  std::vector<LabeledValue> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const LabeledValue& a, const LabeledValue& b) { return a.value < b.value; });
  std::size_t n_in = 0;
  for (const auto& s : sorted) n_in += s.label == Label::kIndoor ? 1 : 0;
  const std::size_t n_out = sorted.size() - n_in;
  if (n_in == 0 || n_out == 0) {
    throw Error(ErrorCode::kOneClassOnly, "ROC sweep needs both indoor and outdoor samples");
  }

  const double din = static_cast<double>(n_in);
  const double dout = static_cast<double>(n_out);
  auto point = [&](double t, std::size_t in_le, std::size_t out_le) {
    return RocPoint{t, static_cast<double>(in_le) / din, static_cast<double>(out_le) / dout, n_in,
                    n_out};
  };

  std::vector<RocPoint> roc;
  roc.reserve(2 * sorted.size() + 1);
  const double lowest = sorted.front().value;
  roc.push_back(point(lowest - std::max(1.0, std::abs(lowest) * 1e-6), 0, 0));

  std::size_t in_le = 0, out_le = 0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    const double v = sorted[i].value;
    while (i < sorted.size() && sorted[i].value == v) {
      (sorted[i].label == Label::kIndoor ? in_le : out_le) += 1;
      ++i;
    }
    roc.push_back(point(v, in_le, out_le));
    if (i < sorted.size()) {
      const double mid = v + (sorted[i].value - v) / 2.0;
      // Adjacent doubles have no representable midpoint.
      if (mid > v && mid < sorted[i].value) roc.push_back(point(mid, in_le, out_le));
    }
  }
  return roc;
}

double TotalAccuracy(double pd, double pf, std::size_t n_indoor, std::size_t n_outdoor) {
  const std::size_t n_total = n_indoor + n_outdoor;
  if (n_total == 0) throw Error(ErrorCode::kZeroTotal, "total accuracy with no samples");
  const double total = static_cast<double>(n_total);
  return (pd * static_cast<double>(n_indoor)) / total +
         ((1.0 - pf) * static_cast<double>(n_outdoor)) / total;
}

ThresholdEntry SelectThreshold(std::span<const RocPoint> roc) {
  if (roc.empty()) throw Error(ErrorCode::kInvalidArgument, "empty ROC table");
  // Integer correct counts make ties exact; the smallest threshold wins.
  const RocPoint* best = nullptr;
  std::size_t best_correct = 0;
  for (const auto& p : roc) {
    const std::size_t correct = CorrectCount(p);
    if (best == nullptr || correct > best_correct ||
        (correct == best_correct && p.threshold < best->threshold)) {
      best = &p;
      best_correct = correct;
    }
  }
  ThresholdEntry entry;
  entry.threshold = best->threshold;
  entry.n_indoor = best->n_indoor;
  entry.n_outdoor = best->n_outdoor;
  entry.n_train_samples = best->n_indoor + best->n_outdoor;
  entry.train_accuracy = TotalAccuracy(best->pd, best->pf, best->n_indoor, best->n_outdoor);
  return entry;
}

std::map<SatelliteKey, std::vector<LabeledValue>> CollectKeySamples(
    std::span<const Session> sessions) {
  std::map<SatelliteKey, std::vector<LabeledValue>> samples;
  for (const auto& session : sessions) {
    for (const auto& epoch : session.epochs) {
      for (const auto& obs : epoch.observations) {
        if (!obs.carrier_frequency_mhz || !obs.cnr_dbhz) continue;
        samples[MakeKey(obs)].push_back({*obs.cnr_dbhz, session.entry.label});
      }
    }
  }
  return samples;
}

ThresholdTable TrainThresholdTable(std::span<const Session> sessions,
                                   const ThresholdTrainOptions& options,
                                   ThresholdTrainingReport* report) {
  bool has_indoor = false, has_outdoor = false;
  std::vector<LabeledValue> epoch_means;
  ThresholdTrainingReport local;
  for (const auto& session : sessions) {
    for (const auto& epoch : session.epochs) {
      if (epoch.observations.empty()) continue;
      epoch_means.push_back({epoch.mean_cnr, session.entry.label});
      local.observations += epoch.observations.size();
      (session.entry.label == Label::kIndoor ? has_indoor : has_outdoor) = true;
    }
  }
  local.epochs = epoch_means.size();
  if (epoch_means.empty()) {
    throw Error(ErrorCode::kEmptyTrainingSet, "no epochs in threshold training set");
  }
  if (!has_indoor || !has_outdoor) {
    throw Error(ErrorCode::kOneClassOnly, "threshold training needs indoor and outdoor sessions");
  }

  ThresholdTable table;
  table.sat_count_prior = options.sat_count_prior;
  table.min_samples_per_key = options.min_samples_per_key;

  for (const auto& [key, values] : CollectKeySamples(sessions)) {
    ++local.keys_seen;
    std::size_t n_in = 0;
    for (const auto& v : values) n_in += v.label == Label::kIndoor ? 1 : 0;
    const std::size_t n_out = values.size() - n_in;
    if (n_in == 0 || n_out == 0) {
      ++local.keys_one_class;
      continue;
    }
    if (n_in < options.min_samples_per_key || n_out < options.min_samples_per_key) {
      ++local.keys_insufficient;
      continue;
    }
    const auto roc = SweepRoc(values);
    auto entry = SelectThreshold(roc);
    entry.key = key;
    table.entries.emplace(key, entry);
  }

  table.mean_cnr_fallback_threshold = SelectThreshold(SweepRoc(epoch_means)).threshold;
  if (report != nullptr) *report = local;
  return table;
}

PredictionTrace PredictEpochThreshold(const ThresholdTable& table, const Epoch& epoch) {
  PredictionTrace trace;
  trace.epoch_timestamp = epoch.timestamp;
  trace.method = Method::kThreshold;
  for (const auto& obs : epoch.observations) {
    if (!obs.carrier_frequency_mhz || !obs.cnr_dbhz) continue;
    const auto it = table.entries.find(MakeKey(obs));
    if (it == table.entries.end()) continue;
    trace.votes.push_back(*obs.cnr_dbhz > it->second.threshold ? Label::kOutdoor : Label::kIndoor);
  }

  if (epoch.satellite_count <= table.sat_count_prior) {
    trace.prior_applied = true;
    trace.final_label = Label::kIndoor;
  } else if (trace.votes.empty()) {
    trace.fallback_used = true;
    trace.final_label =
        epoch.mean_cnr > table.mean_cnr_fallback_threshold ? Label::kOutdoor : Label::kIndoor;
  } else {
    trace.final_label = MajorityLabel(trace.votes);
  }
  return trace;
}

}  // namespace gnssio
