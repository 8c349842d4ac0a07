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

// Labeled synthetic GNSS / Wi-Fi sessions.
//
// Each session sees a random subset of a fixed satellite catalogue with
// static geometry. Per-epoch CNR is
//
//   base_cnr + elevation_gain * sin(elevation) - attenuation + noise
//
// where attenuation is drawn once per satellite per session for indoor
// environments (zero outdoors). Observations below the 10 dB-Hz receiver
// sensitivity are not reported.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gnssio/eval.hpp"
#include "gnssio/types.hpp"

namespace gnssio {

inline constexpr double kReceiverSensitivityDbHz = 10.0;

struct SynthConfig {
  int n_sessions_per_class = 6;          // Group A, per label
  int n_group_b_sessions_per_class = 6;  // Group B, per label
  double session_minutes = 10.0;
  int epoch_period_s = 5;
  std::vector<Constellation> constellations_active = {
      Constellation::kGps, Constellation::kGlonass, Constellation::kGalileo,
      Constellation::kBeiDou};
  double base_cnr_dbhz = 30.0;
  double elevation_gain_db = 15.0;  // per unit sin(elevation)
  double indoor_attenuation_mean_db = 15.0;
  double indoor_attenuation_std_db = 4.0;
  double indoor_dropout_prob = 0.25;
  double outdoor_visible_sats_mean = 30.0;
  double indoor_visible_sats_mean = 18.0;
  double visible_sats_std = 3.0;
  // Strength of the window effect for near-window indoor environments:
  // 0 is plain interior, 1 is indistinguishable from outdoors.
  double near_window_mix = 0.6;
  // Fraction of generated indoor sessions recorded near windows.
  double near_window_session_fraction = 0.0;
  double noise_std_db = 2.0;
  bool wifi_enabled = true;
  double wifi_indoor_ap24_mean = 12.0;
  double wifi_indoor_ap5_mean = 8.0;
  double wifi_outdoor_ap24_mean = 4.0;
  double wifi_outdoor_ap5_mean = 1.0;
  double wifi_indoor_rssi_mean_dbm = -62.0;
  double wifi_outdoor_rssi_mean_dbm = -80.0;
  std::uint64_t seed = 1;
  TimestampMs start_time_ms = 1'700'000'000'000;
};

// Throws Error{kInvalidConfig} describing the first invalid field.
void ValidateSynthConfig(const SynthConfig& cfg);

SynthConfig LoadSynthConfig(const std::filesystem::path& path);
// Missing keys keep their defaults; unknown keys are rejected.
SynthConfig SynthConfigFromJson(const std::string& text);
std::string SynthConfigToJson(const SynthConfig& cfg);

struct SynthSession {
  SessionManifestEntry entry;  // paths relative to the dataset root
  std::string gnss_csv;
  std::string wifi_csv;        // empty when Wi-Fi generation is disabled
};

// Group A and Group B sessions for both labels. Every session has its own
// seed derived from cfg.seed, group, label and index.
std::vector<SynthSession> GenerateSessions(const SynthConfig& cfg);

// Writes sessions/ and manifest.csv under `out_dir`; returns the manifest
// path.
std::filesystem::path WriteSynthDataset(const std::vector<SynthSession>& sessions,
                                        const std::filesystem::path& out_dir);

// Parses generated CSV text through the regular ingest path.
std::vector<Session> LoadSynthSessions(const std::vector<SynthSession>& sessions);

enum class ContainmentScenario { kUnderBridge, kNearWindow };

std::optional<ContainmentScenario> ParseContainmentScenario(std::string_view text);

// UnderBridge: outdoor-labeled "open_road" and high-attenuation
// "under_bridge" segments. NearWindow: indoor-labeled "interior" and
// lightly attenuated "near_window" segments.
std::vector<Segment> GenerateContainmentScenario(const SynthConfig& cfg,
                                                 ContainmentScenario scenario);

}  // namespace gnssio
