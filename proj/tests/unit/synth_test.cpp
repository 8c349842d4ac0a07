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

#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "gnssio/classifier.hpp"
#include "gnssio/ingest.hpp"
#include "gnssio/synth.hpp"
#include "test_support.hpp"

namespace gnssio {
namespace {

using testing::CodeOf;

SynthConfig Small() {
  SynthConfig cfg;
  cfg.n_sessions_per_class = 2;
  cfg.n_group_b_sessions_per_class = 1;
  cfg.session_minutes = 4;
  return cfg;
}

struct Stats {
  double mean_cnr = 0.0;
  double mean_count = 0.0;
  std::size_t observations = 0;
  std::size_t epochs = 0;
  int max_count = 0;
};

Stats StatsFor(const std::vector<Session>& sessions, Label label) {
  Stats s;
  double sum = 0.0;
  for (const auto& session : sessions) {
    if (session.entry.label != label) continue;
    for (const auto& e : session.epochs) {
      ++s.epochs;
      s.mean_count += e.satellite_count;
      s.max_count = std::max(s.max_count, e.satellite_count);
      for (const auto& o : e.observations) {
        sum += *o.cnr_dbhz;
        ++s.observations;
      }
    }
  }
  if (s.observations) s.mean_cnr = sum / static_cast<double>(s.observations);
  if (s.epochs) s.mean_count /= static_cast<double>(s.epochs);
  return s;
}

TEST(Synth, ManifestShape) {
  const auto sessions = GenerateSessions(Small());
  ASSERT_EQ(sessions.size(), 6u);
  int a = 0, b = 0, indoor = 0;
  for (const auto& s : sessions) {
    (s.entry.group == Group::kA ? a : b) += 1;
    indoor += s.entry.label == Label::kIndoor ? 1 : 0;
    EXPECT_FALSE(s.wifi_csv.empty());
    EXPECT_EQ(s.gnss_csv.rfind("timestamp,svid,constellation", 0), 0u);
  }
  EXPECT_EQ(a, 4);
  EXPECT_EQ(b, 2);
  EXPECT_EQ(indoor, 3);
}

TEST(Synth, FixedSeedIsByteIdentical) {
  testing::TempDir d1("gnssio_synth1"), d2("gnssio_synth2");
  WriteSynthDataset(GenerateSessions(Small()), d1.path());
  WriteSynthDataset(GenerateSessions(Small()), d2.path());
  std::size_t files = 0;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(d1.path())) {
    if (!entry.is_regular_file()) continue;
    const auto rel = std::filesystem::relative(entry.path(), d1.path());
    auto slurp = [](const std::filesystem::path& p) {
      std::ifstream in(p, std::ios::binary);
      std::ostringstream ss;
      ss << in.rdbuf();
      return ss.str();
    };
    EXPECT_EQ(slurp(entry.path()), slurp(d2.path() / rel)) << rel;
    ++files;
  }
  EXPECT_EQ(files, 13u);  // 6 GNSS + 6 Wi-Fi + manifest

  auto other = Small();
  other.seed = 2;
  EXPECT_NE(GenerateSessions(other)[0].gnss_csv, GenerateSessions(Small())[0].gnss_csv);
}

TEST(Synth, RoundTripsThroughIngest) {
  testing::TempDir dir("gnssio_synth_rt");
  const auto manifest = WriteSynthDataset(GenerateSessions(Small()), dir.path());
  for (const auto& s : LoadSessions(ReadManifest(manifest))) {
    EXPECT_EQ(s.parse_errors, 0u);
    EXPECT_EQ(s.cleaning.removed_zero_cnr, 0u);
    EXPECT_EQ(s.cleaning.removed_missing_cnr, 0u);
    EXPECT_EQ(s.cleaning.removed_missing_frequency, 0u);
    // Only the warm-up interval after the first row is dropped.
    EXPECT_EQ(s.epochs.size(), static_cast<std::size_t>(4 * 12 - 4));
    for (const auto& e : s.epochs) {
      ASSERT_TRUE(e.wifi.has_value());
      for (const auto& o : e.observations) EXPECT_GE(*o.cnr_dbhz, kReceiverSensitivityDbHz);
    }
  }
}

TEST(Synth, IndoorIsWeakerThanOutdoor) {
  const auto sessions = LoadSynthSessions(GenerateSessions(Small()));
  const auto in = StatsFor(sessions, Label::kIndoor);
  const auto out = StatsFor(sessions, Label::kOutdoor);
  EXPECT_LT(in.mean_cnr, out.mean_cnr);
  EXPECT_LT(in.mean_count, out.mean_count);
}

TEST(Synth, AttenuationMonotonicity) {
  double previous = 1e9;
  for (double att : {0.0, 5.0, 10.0, 15.0, 20.0}) {
    auto cfg = Small();
    cfg.indoor_attenuation_mean_db = att;
    cfg.n_sessions_per_class = 6;
    cfg.session_minutes = 15;
    const auto in = StatsFor(LoadSynthSessions(GenerateSessions(cfg)), Label::kIndoor);
    ASSERT_GE(in.observations, 10'000u) << att;
    EXPECT_LT(in.mean_cnr, previous) << att;
    previous = in.mean_cnr;
  }
}

TEST(Synth, TotalDropoutTriggersPrior) {
  auto cfg = Small();
  cfg.indoor_dropout_prob = 0.9;
  cfg.indoor_attenuation_mean_db = 25.0;
  const auto in = StatsFor(LoadSynthSessions(GenerateSessions(cfg)), Label::kIndoor);
  EXPECT_LE(in.max_count, 10);

  cfg.indoor_dropout_prob = 1.0;
  EXPECT_EQ(StatsFor(LoadSynthSessions(GenerateSessions(cfg)), Label::kIndoor).observations, 0u);
}

TEST(Synth, NullSeparationIsChance) {
  auto cfg = Small();
  cfg.indoor_attenuation_mean_db = 0.0;
  cfg.indoor_attenuation_std_db = 0.0;
  cfg.indoor_dropout_prob = 0.0;
  cfg.indoor_visible_sats_mean = cfg.outdoor_visible_sats_mean;
  cfg.wifi_enabled = false;
  cfg.n_sessions_per_class = 6;
  const auto sessions = LoadSynthSessions(GenerateSessions(cfg));
  const auto in = StatsFor(sessions, Label::kIndoor);
  const auto out = StatsFor(sessions, Label::kOutdoor);
  EXPECT_NEAR(in.mean_cnr, out.mean_cnr, 1.5);

  // Train on Group A, test on Group B: pooled accuracy stays near a coin flip.
  std::vector<Session> train, test;
  for (const auto& s : sessions) (s.entry.group == Group::kA ? train : test).push_back(s);
  TrainOptions opts;
  opts.method = Method::kThreshold;
  const auto c = TrainClassifier(train, opts);
  std::size_t ok = 0, n = 0;
  for (const auto& s : test) {
    for (const auto& e : s.epochs) {
      ok += c.PredictEpoch(e).final_label == s.entry.label ? 1 : 0;
      ++n;
    }
  }
  const double acc = static_cast<double>(ok) / static_cast<double>(n);
  EXPECT_GT(acc, 0.25);
  EXPECT_LT(acc, 0.75);
}

TEST(Synth, WifiDisabled) {
  auto cfg = Small();
  cfg.wifi_enabled = false;
  for (const auto& s : GenerateSessions(cfg)) {
    EXPECT_TRUE(s.wifi_csv.empty());
    EXPECT_TRUE(s.entry.wifi_path.empty());
  }
}

TEST(Synth, NearWindowSessionsAreLabelled) {
  auto cfg = Small();
  cfg.n_sessions_per_class = 4;
  cfg.near_window_session_fraction = 0.5;
  int near = 0, interior = 0;
  for (const auto& s : GenerateSessions(cfg)) {
    if (s.entry.label != Label::kIndoor) {
      EXPECT_EQ(s.entry.sublabel, Sublabel::kNone);
      continue;
    }
    (s.entry.sublabel == Sublabel::kNearWindowIndoor ? near : interior) += 1;
  }
  EXPECT_GT(near, 0);
  EXPECT_GT(interior, 0);
}

TEST(SynthConfig, JsonRoundTripAndValidation) {
  auto cfg = Small();
  cfg.constellations_active = {Constellation::kGps, Constellation::kQzss};
  cfg.seed = 12345;
  const auto back = SynthConfigFromJson(SynthConfigToJson(cfg));
  EXPECT_EQ(SynthConfigToJson(back), SynthConfigToJson(cfg));
  EXPECT_EQ(back.constellations_active, cfg.constellations_active);

  EXPECT_EQ(CodeOf([] { SynthConfigFromJson(R"({"no_such_key": 1})"); }), ErrorCode::kInvalidConfig);
  EXPECT_EQ(CodeOf([] { SynthConfigFromJson(R"({"indoor_dropout_prob": 1.5})"); }),
            ErrorCode::kInvalidConfig);
  EXPECT_EQ(CodeOf([] { SynthConfigFromJson(R"({"epoch_period_s": 0})"); }),
            ErrorCode::kInvalidConfig);
  EXPECT_EQ(CodeOf([] { SynthConfigFromJson(R"({"seed": "x"})"); }), ErrorCode::kInvalidConfig);
  EXPECT_EQ(CodeOf([] { SynthConfigFromJson("not json"); }), ErrorCode::kInvalidConfig);
  EXPECT_EQ(CodeOf([] { SynthConfigFromJson(R"({"constellations_active": ["Pluto"]})"); }),
            ErrorCode::kInvalidConfig);
}

TEST(Containment, UnderBridgeIsWeakerThanOpenRoad) {
  const auto segs = GenerateContainmentScenario(SynthConfig{}, ContainmentScenario::kUnderBridge);
  double bridge = 0, road = 0;
  std::size_t nb = 0, nr = 0;
  for (const auto& s : segs) {
    EXPECT_EQ(s.physical_label, Label::kOutdoor);
    for (const auto& e : s.epochs) {
      (s.tag == "under_bridge" ? bridge : road) += e.mean_cnr;
      (s.tag == "under_bridge" ? nb : nr) += 1;
    }
  }
  ASSERT_GT(nb, 0u);
  ASSERT_GT(nr, 0u);
  EXPECT_LT(bridge / static_cast<double>(nb), road / static_cast<double>(nr));
}

TEST(Containment, NearWindowWithZeroMixIsInterior) {
  SynthConfig cfg;
  cfg.near_window_mix = 0.0;
  const auto segs = GenerateContainmentScenario(cfg, ContainmentScenario::kNearWindow);
  double near = 0, interior = 0;
  std::size_t nn = 0, ni = 0;
  for (const auto& s : segs) {
    EXPECT_EQ(s.physical_label, Label::kIndoor);
    for (const auto& e : s.epochs) {
      (s.tag == "near_window" ? near : interior) += e.mean_cnr;
      (s.tag == "near_window" ? nn : ni) += 1;
    }
  }
  EXPECT_NEAR(near / static_cast<double>(nn), interior / static_cast<double>(ni), 2.5);
  EXPECT_FALSE(ParseContainmentScenario("volcano").has_value());
  EXPECT_EQ(ParseContainmentScenario("under_bridge"), ContainmentScenario::kUnderBridge);
}

}  // namespace
}  // namespace gnssio
