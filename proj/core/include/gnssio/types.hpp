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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gnssio {

using TimestampMs = std::int64_t;

// Ordinal values are the numeric encoding used in ML feature vectors.
enum class Constellation : int {
  kGps = 0,
  kGlonass = 1,
  kGalileo = 2,
  kBeiDou = 3,
  kQzss = 4,
  kSbas = 5,
  kIrnss = 6,
  kOther = 7,
};

// Case-insensitive; accepts common aliases ("BDS", "NAVIC", ...). Unknown
// strings map to kOther.
Constellation ParseConstellation(std::string_view text);
std::string_view ConstellationName(Constellation c);

enum class Label { kIndoor, kOutdoor };

std::string_view LabelName(Label label);
std::optional<Label> ParseLabel(std::string_view text);

enum class Group { kA, kB };

std::string_view GroupName(Group group);
std::optional<Group> ParseGroup(std::string_view text);

enum class Sublabel { kNone, kInteriorIndoor, kNearWindowIndoor };

std::string_view SublabelName(Sublabel s);
std::optional<Sublabel> ParseSublabel(std::string_view text);

// One CSV row: a single satellite sighting at one timestamp.
struct RawRecord {
  TimestampMs timestamp = 0;
  int svid = 0;
  Constellation constellation = Constellation::kOther;
  // Angles are absent when the export leaves them blank. Such rows are kept
  // for CNR features and skipped by angle-based exports.
  std::optional<double> azimuth_deg;
  std::optional<double> elevation_deg;
  std::optional<double> carrier_frequency_mhz;
  std::optional<double> cnr_dbhz;
  bool used_in_fix = false;
  int line = 0;  // 1-based source line, 0 when synthesized in memory

  bool has_angles() const {
    return azimuth_deg.has_value() && elevation_deg.has_value();
  }
};

// After cleaning, cnr and carrier frequency are always present.
using GnssObservation = RawRecord;

enum class WifiBand { k24GHz, k5GHz };

struct WifiScan {
  TimestampMs timestamp = 0;
  std::string bssid;
  WifiBand band = WifiBand::k24GHz;
  double rssi_dbm = -100.0;
};

inline constexpr double kWifiRssiSentinelDbm = -100.0;

struct WifiEpochFeatures {
  int n_ap_24ghz = 0;
  int n_ap_5ghz = 0;
  double mean_rssi_24 = kWifiRssiSentinelDbm;
  double mean_rssi_5 = kWifiRssiSentinelDbm;
  double max_rssi_24 = kWifiRssiSentinelDbm;
  double max_rssi_5 = kWifiRssiSentinelDbm;

  bool operator==(const WifiEpochFeatures&) const = default;
};

struct Epoch {
  TimestampMs timestamp = 0;
  std::vector<GnssObservation> observations;
  double mean_cnr = 0.0;
  int satellite_count = 0;
  std::optional<WifiEpochFeatures> wifi;
};

struct SessionManifestEntry {
  std::string file_path;
  Label label = Label::kIndoor;
  Group group = Group::kA;
  std::string location_tag;
  Sublabel sublabel = Sublabel::kNone;
  std::string wifi_path;  // empty when the session has no Wi-Fi scan file
};

struct CleaningStats {
  std::size_t input = 0;
  std::size_t removed_zero_cnr = 0;
  std::size_t removed_missing_cnr = 0;
  std::size_t removed_missing_frequency = 0;
  std::size_t removed_warmup = 0;

  std::size_t removed() const {
    return removed_zero_cnr + removed_missing_cnr + removed_missing_frequency +
           removed_warmup;
  }
};

struct Session {
  SessionManifestEntry entry;
  std::vector<Epoch> epochs;
  TimestampMs start_time = 0;
  CleaningStats cleaning;
  std::size_t parse_errors = 0;
};

enum class Method { kThreshold, kSvm, kDecisionTree, kRandomForest };

std::string_view MethodName(Method m);
std::optional<Method> ParseMethod(std::string_view text);

enum class FeatureMode { kGnssOnly, kWifiOnly, kFused };

std::string_view FeatureModeName(FeatureMode m);
std::optional<FeatureMode> ParseFeatureMode(std::string_view text);

struct PredictionTrace {
  TimestampMs epoch_timestamp = 0;
  std::vector<Label> votes;
  Label final_label = Label::kIndoor;
  bool prior_applied = false;
  bool fallback_used = false;  // threshold method: no table key matched
  Method method = Method::kThreshold;

  int indoor_votes() const;
  int outdoor_votes() const;

  bool operator==(const PredictionTrace&) const = default;
};

// Majority over labels; an empty list or a tie resolves to Indoor.
Label MajorityLabel(const std::vector<Label>& labels);
Label MajorityLabel(int indoor, int outdoor);

}  // namespace gnssio
