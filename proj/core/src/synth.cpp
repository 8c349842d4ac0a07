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

#include "gnssio/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "gnssio/error.hpp"
#include "gnssio/ingest.hpp"
#include "gnssio/ml.hpp"
#include "json.hpp"

namespace gnssio {
namespace {

using nlohmann::json;

struct CatalogEntry {
  Constellation constellation;
  int svid;
  double frequency_mhz;
};

std::vector<CatalogEntry> BuildCatalog(const std::vector<Constellation>& active) {
  std::vector<CatalogEntry> catalog;
  auto add = [&](Constellation c, int count, auto freq_of) {
    if (std::find(active.begin(), active.end(), c) == active.end()) return;
    for (int svid = 1; svid <= count; ++svid) catalog.push_back({c, svid, freq_of(svid)});
  };
  add(Constellation::kGps, 32, [](int) { return 1575.42; });
  // GLONASS FDMA: G1 = 1602 + k * 0.5625 MHz, k in [-7, 6].
  add(Constellation::kGlonass, 24, [](int svid) { return 1602.0 + ((svid % 14) - 7) * 0.5625; });
  add(Constellation::kGalileo, 30, [](int) { return 1575.42; });
  add(Constellation::kBeiDou, 35, [](int) { return 1561.098; });
  add(Constellation::kQzss, 4, [](int) { return 1575.42; });
  add(Constellation::kSbas, 6, [](int svid) { return svid <= 3 ? 1575.42 : 1176.45; });
  add(Constellation::kIrnss, 7, [](int) { return 1176.45; });
  return catalog;
}

// Environment parameters for one recording.
struct Profile {
  double attenuation_mean = 0.0;
  double attenuation_std = 0.0;
  double dropout = 0.0;
  double visible_mean = 30.0;
  double wifi_ap24_mean = 4.0;
  double wifi_ap5_mean = 1.0;
  double wifi_rssi_mean = -80.0;
};

Profile OutdoorProfile(const SynthConfig& cfg) {
  Profile p;
  p.visible_mean = cfg.outdoor_visible_sats_mean;
  p.wifi_ap24_mean = cfg.wifi_outdoor_ap24_mean;
  p.wifi_ap5_mean = cfg.wifi_outdoor_ap5_mean;
  p.wifi_rssi_mean = cfg.wifi_outdoor_rssi_mean_dbm;
  return p;
}

Profile IndoorProfile(const SynthConfig& cfg) {
  Profile p;
  p.attenuation_mean = cfg.indoor_attenuation_mean_db;
  p.attenuation_std = cfg.indoor_attenuation_std_db;
  p.dropout = cfg.indoor_dropout_prob;
  p.visible_mean = cfg.indoor_visible_sats_mean;
  p.wifi_ap24_mean = cfg.wifi_indoor_ap24_mean;
  p.wifi_ap5_mean = cfg.wifi_indoor_ap5_mean;
  p.wifi_rssi_mean = cfg.wifi_indoor_rssi_mean_dbm;
  return p;
}

Profile Blend(const Profile& indoor, const Profile& outdoor, double mix) {
  auto lerp = [mix](double a, double b) { return a + mix * (b - a); };
  Profile p;
  p.attenuation_mean = lerp(indoor.attenuation_mean, outdoor.attenuation_mean);
  p.attenuation_std = lerp(indoor.attenuation_std, outdoor.attenuation_std);
  p.dropout = lerp(indoor.dropout, outdoor.dropout);
  p.visible_mean = lerp(indoor.visible_mean, outdoor.visible_mean);
  p.wifi_ap24_mean = lerp(indoor.wifi_ap24_mean, outdoor.wifi_ap24_mean);
  p.wifi_ap5_mean = lerp(indoor.wifi_ap5_mean, outdoor.wifi_ap5_mean);
  p.wifi_rssi_mean = lerp(indoor.wifi_rssi_mean, outdoor.wifi_rssi_mean);
  return p;
}

// Outdoor geometry with building-grade attenuation overhead.
Profile UnderBridgeProfile(const SynthConfig& cfg) {
  Profile p = OutdoorProfile(cfg);
  p.attenuation_mean = cfg.indoor_attenuation_mean_db + 3.0;
  p.attenuation_std = cfg.indoor_attenuation_std_db;
  p.dropout = cfg.indoor_dropout_prob;
  p.visible_mean = 0.75 * cfg.outdoor_visible_sats_mean;
  return p;
}

struct Recording {
  std::vector<RawRecord> records;
  std::vector<WifiScan> wifi;
};

double Round2(double v) { return std::round(v * 100.0) / 100.0; }

Recording Record(const SynthConfig& cfg, const Profile& profile, std::uint64_t seed,
                 TimestampMs start, int n_epochs, bool with_wifi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 1.0);

  const auto catalog = BuildCatalog(cfg.constellations_active);
  const auto count = static_cast<std::size_t>(std::clamp<long long>(
      std::llround(profile.visible_mean + cfg.visible_sats_std * noise(rng)), 1,
      static_cast<long long>(catalog.size())));
  std::vector<std::size_t> pick(catalog.size());
  std::iota(pick.begin(), pick.end(), std::size_t{0});
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> d(i, pick.size() - 1);
    std::swap(pick[i], pick[d(rng)]);
  }
  pick.resize(count);
  std::sort(pick.begin(), pick.end());

  struct Sky {
    const CatalogEntry* sat;
    double azimuth;
    double elevation;
    double attenuation;
  };
  std::vector<Sky> sky;
  sky.reserve(count);
  for (const auto idx : pick) {
    Sky s{&catalog[idx], 360.0 * unit(rng), 5.0 + 80.0 * unit(rng), 0.0};
    s.azimuth = std::round(s.azimuth * 10.0) / 10.0;
    s.elevation = std::round(s.elevation * 10.0) / 10.0;
    if (s.azimuth >= 360.0) s.azimuth = 0.0;
    s.attenuation =
        std::max(0.0, profile.attenuation_mean + profile.attenuation_std * noise(rng));
    sky.push_back(s);
  }

  Recording rec;
  const TimestampMs period = static_cast<TimestampMs>(cfg.epoch_period_s) * 1000;
  std::poisson_distribution<int> ap24(std::max(profile.wifi_ap24_mean, 1e-9));
  std::poisson_distribution<int> ap5(std::max(profile.wifi_ap5_mean, 1e-9));
  for (int e = 0; e < n_epochs; ++e) {
    const TimestampMs t = start + e * period;
    for (const auto& s : sky) {
      const bool dropped = unit(rng) < profile.dropout;
      const double cnr = Round2(cfg.base_cnr_dbhz +
                                cfg.elevation_gain_db * std::sin(s.elevation * std::numbers::pi / 180.0) -
                                s.attenuation + cfg.noise_std_db * noise(rng));
      if (dropped || cnr < kReceiverSensitivityDbHz) continue;
      RawRecord r;
      r.timestamp = t;
      r.svid = s.sat->svid;
      r.constellation = s.sat->constellation;
      r.azimuth_deg = s.azimuth;
      r.elevation_deg = s.elevation;
      r.carrier_frequency_mhz = s.sat->frequency_mhz;
      r.cnr_dbhz = cnr;
      r.used_in_fix = cnr >= 25.0;
      rec.records.push_back(r);
    }
    if (!with_wifi) continue;
    const int n24 = ap24(rng);
    const int n5 = ap5(rng);
    for (int a = 0; a < n24 + n5; ++a) {
      WifiScan scan;
      scan.timestamp = t;
      scan.band = a < n24 ? WifiBand::k24GHz : WifiBand::k5GHz;
      char bssid[32];
      std::snprintf(bssid, sizeof(bssid), "02:00:00:00:%02x:%02x", a < n24 ? 0x24 : 0x50,
                    a % 256);
      scan.bssid = bssid;
      scan.rssi_dbm = std::round(std::clamp(profile.wifi_rssi_mean + 6.0 * noise(rng), -95.0, -30.0));
      rec.wifi.push_back(std::move(scan));
    }
  }
  return rec;
}

std::string GnssCsv(const std::vector<RawRecord>& records) {
  std::string out = "timestamp,svid,constellation,azimuth,elevation,carrier_freq_mhz,cnr_dbhz,used_in_fix\n";
  char buf[192];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof(buf), "%lld,%d,%s,%.1f,%.1f,%.4f,%.2f,%d\n",
                  static_cast<long long>(r.timestamp), r.svid,
                  std::string(ConstellationName(r.constellation)).c_str(), *r.azimuth_deg,
                  *r.elevation_deg, *r.carrier_frequency_mhz, *r.cnr_dbhz, r.used_in_fix ? 1 : 0);
    out += buf;
  }
  return out;
}

std::string WifiCsv(const std::vector<WifiScan>& scans) {
  std::string out = "timestamp,bssid,band_ghz,rssi_dbm\n";
  char buf[128];
  for (const auto& s : scans) {
    std::snprintf(buf, sizeof(buf), "%lld,%s,%s,%.0f\n", static_cast<long long>(s.timestamp),
                  s.bssid.c_str(), s.band == WifiBand::k24GHz ? "2.4" : "5", s.rssi_dbm);
    out += buf;
  }
  return out;
}

int EpochsPerSession(const SynthConfig& cfg) {
  return static_cast<int>(std::llround(cfg.session_minutes * 60.0 / cfg.epoch_period_s));
}

std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return SplitMix64(SplitMix64(SplitMix64(SplitMix64(seed) ^ a) ^ b) ^ c);
}

#define GNSSIO_SYNTH_FIELDS(X)         \
  X(n_sessions_per_class)              \
  X(n_group_b_sessions_per_class)      \
  X(session_minutes)                   \
  X(epoch_period_s)                    \
  X(base_cnr_dbhz)                     \
  X(elevation_gain_db)                 \
  X(indoor_attenuation_mean_db)        \
  X(indoor_attenuation_std_db)         \
  X(indoor_dropout_prob)               \
  X(outdoor_visible_sats_mean)         \
  X(indoor_visible_sats_mean)          \
  X(visible_sats_std)                  \
  X(near_window_mix)                   \
  X(near_window_session_fraction)      \
  X(noise_std_db)                      \
  X(wifi_enabled)                      \
  X(wifi_indoor_ap24_mean)             \
  X(wifi_indoor_ap5_mean)              \
  X(wifi_outdoor_ap24_mean)            \
  X(wifi_outdoor_ap5_mean)             \
  X(wifi_indoor_rssi_mean_dbm)         \
  X(wifi_outdoor_rssi_mean_dbm)        \
  X(seed)                              \
  X(start_time_ms)

}  // namespace

void ValidateSynthConfig(const SynthConfig& cfg) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kInvalidConfig, what); };
  if (cfg.n_sessions_per_class < 0 || cfg.n_group_b_sessions_per_class < 0) {
    fail("session counts must be >= 0");
  }
  if (!(cfg.session_minutes > 0.0)) fail("session_minutes must be positive");
  if (cfg.epoch_period_s <= 0) fail("epoch_period_s must be positive");
  if (cfg.constellations_active.empty()) fail("constellations_active is empty");
  for (double p : {cfg.indoor_dropout_prob, cfg.near_window_mix, cfg.near_window_session_fraction}) {
    if (!(p >= 0.0 && p <= 1.0)) fail("probabilities and mixes must lie in [0, 1]");
  }
  for (double s : {cfg.indoor_attenuation_std_db, cfg.noise_std_db, cfg.visible_sats_std}) {
    if (!(s >= 0.0)) fail("standard deviations must be >= 0");
  }
  if (!(cfg.indoor_attenuation_mean_db >= 0.0)) fail("indoor_attenuation_mean_db must be >= 0");
  if (!(cfg.outdoor_visible_sats_mean >= 0.0) || !(cfg.indoor_visible_sats_mean >= 0.0)) {
    fail("visible satellite means must be >= 0");
  }
  for (double m : {cfg.wifi_indoor_ap24_mean, cfg.wifi_indoor_ap5_mean, cfg.wifi_outdoor_ap24_mean,
                   cfg.wifi_outdoor_ap5_mean}) {
    if (!(m >= 0.0)) fail("Wi-Fi AP means must be >= 0");
  }
}

std::string SynthConfigToJson(const SynthConfig& cfg) {
  json j;
#define GNSSIO_TO_JSON(name) j[#name] = cfg.name;
  GNSSIO_SYNTH_FIELDS(GNSSIO_TO_JSON)
#undef GNSSIO_TO_JSON
  json constellations = json::array();
  for (auto c : cfg.constellations_active) constellations.push_back(ConstellationName(c));
  j["constellations_active"] = constellations;
  return j.dump(2) + "\n";
}

SynthConfig SynthConfigFromJson(const std::string& text) {
  SynthConfig cfg;
  try {
    const json j = json::parse(text);
    if (!j.is_object()) throw Error(ErrorCode::kInvalidConfig, "config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
      bool known = key == "constellations_active";
#define GNSSIO_FROM_JSON(name)            \
  if (key == #name) {                     \
    value.get_to(cfg.name);               \
    known = true;                         \
  }
      GNSSIO_SYNTH_FIELDS(GNSSIO_FROM_JSON)
#undef GNSSIO_FROM_JSON
      if (!known) throw Error(ErrorCode::kInvalidConfig, "unknown config key '" + key + "'");
    }
    if (j.contains("constellations_active")) {
      cfg.constellations_active.clear();
      for (const auto& c : j.at("constellations_active")) {
        const auto parsed = ParseConstellation(c.get<std::string>());
        if (parsed == Constellation::kOther) {
          throw Error(ErrorCode::kInvalidConfig, "unknown constellation '" + c.get<std::string>() + "'");
        }
        cfg.constellations_active.push_back(parsed);
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("bad synth config: ") + e.what());
  }
  ValidateSynthConfig(cfg);
  return cfg;
}

SynthConfig LoadSynthConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return SynthConfigFromJson(buf.str());
}

std::vector<SynthSession> GenerateSessions(const SynthConfig& cfg) {
  ValidateSynthConfig(cfg);
  const int n_epochs = EpochsPerSession(cfg);
  const Profile indoor = IndoorProfile(cfg);
  const Profile outdoor = OutdoorProfile(cfg);
  const Profile near_window = Blend(indoor, outdoor, cfg.near_window_mix);

  std::vector<SynthSession> out;
  TimestampMs start = cfg.start_time_ms;
  for (Group group : {Group::kA, Group::kB}) {
    const int n = group == Group::kA ? cfg.n_sessions_per_class : cfg.n_group_b_sessions_per_class;
    const int n_window = static_cast<int>(std::llround(cfg.near_window_session_fraction * n));
    for (Label label : {Label::kIndoor, Label::kOutdoor}) {
      for (int i = 0; i < n; ++i) {
        SynthSession s;
        char name[64];
        std::snprintf(name, sizeof(name), "%s_%s_%02d", std::string(GroupName(group)).c_str(),
                      std::string(LabelName(label)).c_str(), i);
        s.entry.label = label;
        s.entry.group = group;
        s.entry.location_tag = std::string("synth-") + name;
        s.entry.file_path = std::string("sessions/") + name + ".csv";
        const Profile* profile = &outdoor;
        if (label == Label::kIndoor) {
          const bool window = i < n_window;
          s.entry.sublabel = window ? Sublabel::kNearWindowIndoor : Sublabel::kInteriorIndoor;
          profile = window ? &near_window : &indoor;
        }
        const auto seed = DeriveSeed(cfg.seed, static_cast<std::uint64_t>(group) + 1,
                                     static_cast<std::uint64_t>(label) + 1,
                                     static_cast<std::uint64_t>(i) + 1);
        const auto rec = Record(cfg, *profile, seed, start, n_epochs, cfg.wifi_enabled);
        s.gnss_csv = GnssCsv(rec.records);
        if (cfg.wifi_enabled) {
          s.entry.wifi_path = std::string("sessions/") + name + "_wifi.csv";
          s.wifi_csv = WifiCsv(rec.wifi);
        }
        // Sessions are laid out back to back in time.
        start += static_cast<TimestampMs>(n_epochs) * cfg.epoch_period_s * 1000 + 3'600'000;
        out.push_back(std::move(s));
      }
    }
  }
  return out;
}

std::filesystem::path WriteSynthDataset(const std::vector<SynthSession>& sessions,
                                        const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir / "sessions");
  auto write = [](const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error(ErrorCode::kIo, "cannot write '" + p.string() + "'");
    f << text;
  };
  std::vector<SessionManifestEntry> entries;
  for (const auto& s : sessions) {
    auto e = s.entry;
    e.file_path = (out_dir / s.entry.file_path).string();
    write(e.file_path, s.gnss_csv);
    if (!s.entry.wifi_path.empty()) {
      e.wifi_path = (out_dir / s.entry.wifi_path).string();
      write(e.wifi_path, s.wifi_csv);
    }
    entries.push_back(std::move(e));
  }
  const auto manifest = out_dir / "manifest.csv";
  WriteManifest(manifest, entries);
  return manifest;
}

std::vector<Session> LoadSynthSessions(const std::vector<SynthSession>& sessions) {
  std::vector<Session> out;
  out.reserve(sessions.size());
  for (const auto& s : sessions) {
    std::istringstream gnss(s.gnss_csv);
    auto parsed = ParseSessionCsv(gnss);
    Session session;
    if (s.wifi_csv.empty()) {
      session = MakeSession(s.entry, std::move(parsed.records));
    } else {
      std::istringstream wifi_in(s.wifi_csv);
      const auto wifi = ParseWifiCsv(wifi_in);
      session = MakeSession(s.entry, std::move(parsed.records), &wifi.scans);
    }
    session.parse_errors = parsed.errors.size();
    out.push_back(std::move(session));
  }
  return out;
}

std::optional<ContainmentScenario> ParseContainmentScenario(std::string_view text) {
  if (text == "under-bridge" || text == "under_bridge" || text == "UnderBridge") {
    return ContainmentScenario::kUnderBridge;
  }
  if (text == "near-window" || text == "near_window" || text == "NearWindow") {
    return ContainmentScenario::kNearWindow;
  }
  return std::nullopt;
}

std::vector<Segment> GenerateContainmentScenario(const SynthConfig& cfg,
                                                 ContainmentScenario scenario) {
  ValidateSynthConfig(cfg);
  struct Leg {
    int segment;  // index into the returned list
    const Profile* profile;
    int epochs;
  };

  const Profile indoor = IndoorProfile(cfg);
  const Profile outdoor = OutdoorProfile(cfg);
  const Profile bridge = UnderBridgeProfile(cfg);
  const Profile window = Blend(indoor, outdoor, cfg.near_window_mix);

  std::vector<Segment> segments;
  std::vector<Leg> legs;
  if (scenario == ContainmentScenario::kUnderBridge) {
    segments = {{"open_road", Label::kOutdoor, {}}, {"under_bridge", Label::kOutdoor, {}}};
    // A drive: open road stretches separated by short bridge underpasses.
    for (int i = 0; i < 5; ++i) {
      legs.push_back({0, &outdoor, 24});
      legs.push_back({1, &bridge, 6});
    }
    legs.push_back({0, &outdoor, 24});
  } else {
    segments = {{"interior", Label::kIndoor, {}}, {"near_window", Label::kIndoor, {}}};
    for (int i = 0; i < 4; ++i) {
      legs.push_back({0, &indoor, 12});
      legs.push_back({1, &window, 12});
    }
  }

  TimestampMs t = cfg.start_time_ms;
  const TimestampMs period = static_cast<TimestampMs>(cfg.epoch_period_s) * 1000;
  for (std::size_t i = 0; i < legs.size(); ++i) {
    const auto& leg = legs[i];
    const auto seed = DeriveSeed(cfg.seed, 0xC0A7 + static_cast<std::uint64_t>(scenario), i, 0);
    auto rec = Record(cfg, *leg.profile, seed, t, leg.epochs, cfg.wifi_enabled);
    // Legs continue an ongoing recording, so no warm-up is discarded.
    auto cleaned = CleanRecords(std::move(rec.records), t - kWarmupMs);
    auto epochs = GroupIntoEpochs(cleaned.records);
    if (cfg.wifi_enabled) AttachWifi(epochs, rec.wifi);
    auto& dst = segments[static_cast<std::size_t>(leg.segment)].epochs;
    dst.insert(dst.end(), std::make_move_iterator(epochs.begin()),
               std::make_move_iterator(epochs.end()));
    t += leg.epochs * period;
  }
  return segments;
}

}  // namespace gnssio
