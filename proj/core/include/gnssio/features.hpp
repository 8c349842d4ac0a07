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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gnssio/types.hpp"

namespace gnssio {

// Per-satellite identity. Carrier frequency is bucketed to 0.1 MHz and kept
// as an integer count of tenths so equality is exact.
struct SatelliteKey {
  Constellation constellation = Constellation::kOther;
  int svid = 0;
  std::int64_t frequency_decimhz = 0;

  double frequency_bucket_mhz() const { return static_cast<double>(frequency_decimhz) / 10.0; }
  std::string ToString() const;

  auto operator<=>(const SatelliteKey&) const = default;
};

std::int64_t FrequencyBucket(double frequency_mhz);

// Throws Error{kMissingFrequency} when the observation has no frequency.
SatelliteKey MakeKey(const GnssObservation& obs);

// Angle placeholder written into feature vectors for rows without angles.
inline constexpr double kMissingAngle = -1.0;

struct ObservationFeatures {
  int constellation_code = 0;
  int svid = 0;
  double azimuth_deg = kMissingAngle;
  double elevation_deg = kMissingAngle;
  double carrier_frequency_mhz = 0.0;
  double cnr_dbhz = 0.0;
  int used_in_fix = 0;
  double epoch_mean_cnr = 0.0;
  int epoch_satellite_count = 0;
  std::optional<WifiEpochFeatures> wifi;
};

// Row-major dense matrix of feature vectors.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  explicit FeatureMatrix(std::size_t cols) : cols_(cols) {}

  std::size_t rows() const { return cols_ == 0 ? 0 : data_.size() / cols_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  void AppendRow(std::span<const double> values);
  void Append(const FeatureMatrix& other);
  void Reserve(std::size_t rows) { data_.reserve(rows * cols_); }

  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Column names, in feature-vector order, for a feature mode.
std::vector<std::string> FeatureNames(FeatureMode mode);

// Throws Error{kEmptyEpoch} for an epoch without observations. When
// `fusion` is set and `wifi` is empty the Wi-Fi fields carry the sentinel
// (0, 0, -100, -100, -100, -100).
std::vector<ObservationFeatures> BuildObservationFeatures(
    const Epoch& epoch, const std::optional<WifiEpochFeatures>& wifi, bool fusion = false);

std::vector<double> ToVector(const ObservationFeatures& f, FeatureMode mode);
std::vector<double> ToVector(const WifiEpochFeatures& w);

// Unnormalized feature rows for one epoch under `mode`: one row per
// observation for GNSS and fused modes, one row per epoch for Wi-Fi only.
FeatureMatrix BuildEpochMatrix(const Epoch& epoch, FeatureMode mode);

WifiEpochFeatures ComputeWifiEpochFeatures(const std::vector<WifiScan>& scans);

// Min-Max scaling learned on training rows. Constant columns map to 0 and
// values outside the training range are clamped into [0, 1].
class Normalizer {
 public:
  Normalizer() = default;
  Normalizer(std::vector<double> mins, std::vector<double> maxs);

  static Normalizer Fit(const FeatureMatrix& train);

  void Apply(FeatureMatrix& m) const;
  void ApplyRow(std::span<double> row) const;
  // Inverse of ApplyRow on non-constant columns (used by tests and exports).
  void InvertRow(std::span<double> row) const;

  const std::vector<double>& mins() const { return mins_; }
  const std::vector<double>& maxs() const { return maxs_; }
  std::size_t size() const { return mins_.size(); }

  bool operator==(const Normalizer&) const = default;

 private:
  std::vector<double> mins_;
  std::vector<double> maxs_;
};

}  // namespace gnssio

template <>
struct std::hash<gnssio::SatelliteKey> {
  std::size_t operator()(const gnssio::SatelliteKey& k) const noexcept {
    std::size_t h = static_cast<std::size_t>(k.constellation);
    h = h * 1000003u ^ static_cast<std::size_t>(k.svid);
    h = h * 1000003u ^ static_cast<std::size_t>(k.frequency_decimhz);
    return h;
  }
};
