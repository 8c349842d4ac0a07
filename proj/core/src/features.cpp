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

#include "gnssio/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "gnssio/error.hpp"

namespace gnssio {

std::int64_t FrequencyBucket(double frequency_mhz) {
  return std::llround(frequency_mhz * 10.0);
}

std::string SatelliteKey::ToString() const {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%s:%d:%lld.%lld", std::string(ConstellationName(constellation)).c_str(),
                svid, static_cast<long long>(frequency_decimhz / 10),
                static_cast<long long>(frequency_decimhz % 10));
  return buf;
}

SatelliteKey MakeKey(const GnssObservation& obs) {
  if (!obs.carrier_frequency_mhz) {
    throw Error(ErrorCode::kMissingFrequency,
                "observation svid " + std::to_string(obs.svid) + " has no carrier frequency");
  }
  return {obs.constellation, obs.svid, FrequencyBucket(*obs.carrier_frequency_mhz)};
}

void FeatureMatrix::AppendRow(std::span<const double> values) {
  if (cols_ == 0 && data_.empty()) cols_ = values.size();
  if (values.size() != cols_) {
    throw Error(ErrorCode::kInvalidArgument, "row width mismatch");
  }
  data_.insert(data_.end(), values.begin(), values.end());
}

void FeatureMatrix::Append(const FeatureMatrix& other) {
  if (other.empty()) return;
  if (cols_ == 0 && data_.empty()) cols_ = other.cols_;
  if (other.cols_ != cols_) throw Error(ErrorCode::kInvalidArgument, "column count mismatch");
  data_.insert(data_.end(), other.data_.begin(), other.data_.end());
}

std::vector<std::string> FeatureNames(FeatureMode mode) {
  static const std::vector<std::string> kGnss = {
      "constellation_code", "svid", "azimuth_deg", "elevation_deg", "carrier_frequency_mhz",
      "cnr_dbhz", "used_in_fix", "epoch_mean_cnr", "epoch_satellite_count"};
  static const std::vector<std::string> kWifi = {"n_ap_24ghz",  "n_ap_5ghz",   "mean_rssi_24",
                                                 "mean_rssi_5", "max_rssi_24", "max_rssi_5"};
  switch (mode) {
    case FeatureMode::kGnssOnly: return kGnss;
    case FeatureMode::kWifiOnly: return kWifi;
    case FeatureMode::kFused: {
      auto names = kGnss;
      names.insert(names.end(), kWifi.begin(), kWifi.end());
      return names;
    }
  }
  return kGnss;
}

std::vector<ObservationFeatures> BuildObservationFeatures(
    const Epoch& epoch, const std::optional<WifiEpochFeatures>& wifi, bool fusion) {
  if (epoch.observations.empty()) {
    throw Error(ErrorCode::kEmptyEpoch, "epoch at " + std::to_string(epoch.timestamp) + " is empty");
  }
  std::optional<WifiEpochFeatures> w = wifi;
  if (fusion && !w) w = WifiEpochFeatures{};

  std::vector<ObservationFeatures> out;
  out.reserve(epoch.observations.size());
  for (const auto& obs : epoch.observations) {
    ObservationFeatures f;
    f.constellation_code = static_cast<int>(obs.constellation);
    f.svid = obs.svid;
    if (obs.has_angles()) {
      f.azimuth_deg = *obs.azimuth_deg;
      f.elevation_deg = *obs.elevation_deg;
    }
    f.carrier_frequency_mhz = obs.carrier_frequency_mhz.value_or(0.0);
    f.cnr_dbhz = obs.cnr_dbhz.value_or(0.0);
    f.used_in_fix = obs.used_in_fix ? 1 : 0;
    f.epoch_mean_cnr = epoch.mean_cnr;
    f.epoch_satellite_count = epoch.satellite_count;
    f.wifi = w;
    out.push_back(f);
  }
  return out;
}

std::vector<double> ToVector(const WifiEpochFeatures& w) {
  return {static_cast<double>(w.n_ap_24ghz), static_cast<double>(w.n_ap_5ghz), w.mean_rssi_24,
          w.mean_rssi_5, w.max_rssi_24, w.max_rssi_5};
}

std::vector<double> ToVector(const ObservationFeatures& f, FeatureMode mode) {
  if (mode == FeatureMode::kWifiOnly) return ToVector(f.wifi.value_or(WifiEpochFeatures{}));
  std::vector<double> v = {static_cast<double>(f.constellation_code),
                           static_cast<double>(f.svid),
                           f.azimuth_deg,
                           f.elevation_deg,
                           f.carrier_frequency_mhz,
                           f.cnr_dbhz,
                           static_cast<double>(f.used_in_fix),
                           f.epoch_mean_cnr,
                           static_cast<double>(f.epoch_satellite_count)};
  if (mode == FeatureMode::kFused) {
    const auto w = ToVector(f.wifi.value_or(WifiEpochFeatures{}));
    v.insert(v.end(), w.begin(), w.end());
  }
  return v;
}

FeatureMatrix BuildEpochMatrix(const Epoch& epoch, FeatureMode mode) {
  FeatureMatrix m(FeatureNames(mode).size());
  if (mode == FeatureMode::kWifiOnly) {
    m.AppendRow(ToVector(epoch.wifi.value_or(WifiEpochFeatures{})));
    return m;
  }
  const auto feats = BuildObservationFeatures(epoch, epoch.wifi, mode == FeatureMode::kFused);
  m.Reserve(feats.size());
  for (const auto& f : feats) m.AppendRow(ToVector(f, mode));
  return m;
}

WifiEpochFeatures ComputeWifiEpochFeatures(const std::vector<WifiScan>& scans) {
  WifiEpochFeatures w;
  double sum24 = 0, sum5 = 0;
  double max24 = -std::numeric_limits<double>::infinity(), max5 = max24;
  for (const auto& s : scans) {
    if (s.band == WifiBand::k24GHz) {
      ++w.n_ap_24ghz;
      sum24 += s.rssi_dbm;
      max24 = std::max(max24, s.rssi_dbm);
    } else {
      ++w.n_ap_5ghz;
      sum5 += s.rssi_dbm;
      max5 = std::max(max5, s.rssi_dbm);
    }
  }
  if (w.n_ap_24ghz > 0) {
    w.mean_rssi_24 = sum24 / w.n_ap_24ghz;
    w.max_rssi_24 = max24;
  }
  if (w.n_ap_5ghz > 0) {
    w.mean_rssi_5 = sum5 / w.n_ap_5ghz;
    w.max_rssi_5 = max5;
  }
  return w;
}

Normalizer::Normalizer(std::vector<double> mins, std::vector<double> maxs)
    : mins_(std::move(mins)), maxs_(std::move(maxs)) {
  if (mins_.size() != maxs_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "normalizer min/max size mismatch");
  }
}

Normalizer Normalizer::Fit(const FeatureMatrix& train) {
  if (train.rows() == 0) throw Error(ErrorCode::kEmptyTrainingSet, "cannot fit normalizer on 0 rows");
  std::vector<double> mins(train.cols(), std::numeric_limits<double>::infinity());
  std::vector<double> maxs(train.cols(), -std::numeric_limits<double>::infinity());
  for (std::size_t r = 0; r < train.rows(); ++r) {
    const auto row = train.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      mins[c] = std::min(mins[c], row[c]);
      maxs[c] = std::max(maxs[c], row[c]);
    }
  }
  return {std::move(mins), std::move(maxs)};
}

void Normalizer::ApplyRow(std::span<double> row) const {
  if (row.size() != mins_.size()) throw Error(ErrorCode::kInvalidArgument, "normalizer width mismatch");
  for (std::size_t c = 0; c < row.size(); ++c) {
    const double range = maxs_[c] - mins_[c];
    if (!(range > 0.0)) {
      row[c] = 0.0;
      continue;
    }
    row[c] = std::clamp((row[c] - mins_[c]) / range, 0.0, 1.0);
  }
}

void Normalizer::InvertRow(std::span<double> row) const {
  for (std::size_t c = 0; c < row.size(); ++c) {
    row[c] = mins_[c] + row[c] * (maxs_[c] - mins_[c]);
  }
}

void Normalizer::Apply(FeatureMatrix& m) const {
  for (std::size_t r = 0; r < m.rows(); ++r) ApplyRow(m.row(r));
}

}  // namespace gnssio
