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

#include "gnssio/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "gnssio/error.hpp"
#include "gnssio/features.hpp"

namespace gnssio {
namespace {

std::string Trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

void StripBom(std::string& line) {
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
      static_cast<unsigned char>(line[1]) == 0xBB &&
      static_cast<unsigned char>(line[2]) == 0xBF) {
    line.erase(0, 3);
  }
}

template <typename T>
bool ParseNumber(const std::string& text, T& out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

bool ParseTimestamp(const std::string& text, TimestampMs& out) {
  if (ParseNumber(text, out)) return true;
  // Some exports write integral timestamps as "1.7e12" or "123.0".
  double d = 0;
  if (ParseNumber(text, d) && std::isfinite(d) && d == std::floor(d)) {
    out = static_cast<TimestampMs>(d);
    return true;
  }
  return false;
}

std::optional<bool> ParseBool(const std::string& text) {
  std::string s;
  for (char c : text) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (s.empty() || s == "0" || s == "false" || s == "no" || s == "n") return false;
  if (s == "1" || s == "true" || s == "yes" || s == "y") return true;
  return std::nullopt;
}

class HeaderIndex {
 public:
  explicit HeaderIndex(const std::vector<std::string>& header) {
    for (std::size_t i = 0; i < header.size(); ++i) index_[Trim(header[i])] = i;
  }

  std::optional<std::size_t> Find(const std::string& name) const {
    const auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t Require(const std::string& name) const {
    const auto idx = Find(name);
    if (!idx) throw Error(ErrorCode::kUnknownColumn, "required column '" + name + "' not in header");
    return *idx;
  }

 private:
  std::unordered_map<std::string, std::size_t> index_;
};

std::string Field(const std::vector<std::string>& fields, std::optional<std::size_t> idx) {
  if (!idx || *idx >= fields.size()) return {};
  return Trim(fields[*idx]);
}

std::ifstream OpenOrThrow(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  return in;
}

}  // namespace

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else if (c != '\r' && c != '\n') {
      current.push_back(c);
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

ParseResult ParseSessionCsv(std::istream& in, const SchemaConfig& schema) {
  std::string line;
  int line_no = 0;
  // Skip leading blank lines before the header.
  while (std::getline(in, line)) {
    ++line_no;
    StripBom(line);
    if (!Trim(line).empty()) break;
    line.clear();
  }
  if (Trim(line).empty()) throw Error(ErrorCode::kMissingHeader, "no header row");

  const HeaderIndex header(SplitCsvLine(line));
  const std::size_t c_ts = header.Require(schema.timestamp);
  const std::size_t c_svid = header.Require(schema.svid);
  const std::size_t c_const = header.Require(schema.constellation);
  const std::size_t c_freq = header.Require(schema.carrier_frequency);
  const std::size_t c_cnr = header.Require(schema.cnr);
  const auto c_az = header.Find(schema.azimuth);
  const auto c_el = header.Find(schema.elevation);
  const auto c_fix = header.Find(schema.used_in_fix);

  ParseResult result;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto fields = SplitCsvLine(line);
    auto fail = [&](const std::string& what) {
      result.errors.push_back({line_no, what});
    };

    RawRecord rec;
    rec.line = line_no;
    if (!ParseTimestamp(Field(fields, c_ts), rec.timestamp)) {
      fail("bad timestamp '" + Field(fields, c_ts) + "'");
      continue;
    }
    if (!ParseNumber(Field(fields, c_svid), rec.svid)) {
      fail("bad svid '" + Field(fields, c_svid) + "'");
      continue;
    }
    rec.constellation = ParseConstellation(Field(fields, c_const));

    if (const auto text = Field(fields, c_cnr); !text.empty()) {
      double v = 0;
      if (!ParseNumber(text, v) || !std::isfinite(v) || v < 0) {
        fail("bad cnr '" + text + "'");
        continue;
      }
      rec.cnr_dbhz = v;
    }
    if (const auto text = Field(fields, c_freq); !text.empty()) {
      double v = 0;
      if (!ParseNumber(text, v) || !std::isfinite(v) || v < 0) {
        fail("bad carrier frequency '" + text + "'");
        continue;
      }
      // Raw Android exports report Hz.
      if (v > 1e6) v /= 1e6;
      if (v > 0) rec.carrier_frequency_mhz = v;
    }

    const auto az_text = Field(fields, c_az);
    const auto el_text = Field(fields, c_el);
    if (!az_text.empty() && !el_text.empty()) {
      double az = 0, el = 0;
      if (!ParseNumber(az_text, az) || !ParseNumber(el_text, el) || !std::isfinite(az) ||
          !std::isfinite(el)) {
        fail("bad azimuth/elevation '" + az_text + "'/'" + el_text + "'");
        continue;
      }
      az = std::fmod(az, 360.0);
      if (az < 0) az += 360.0;
      // Below-horizon or nonsensical elevations keep the row but drop angles.
      if (el >= 0.0 && el <= 90.0) {
        rec.azimuth_deg = az;
        rec.elevation_deg = el;
      }
    }

    const auto fix = ParseBool(Field(fields, c_fix));
    if (!fix) {
      fail("bad used_in_fix '" + Field(fields, c_fix) + "'");
      continue;
    }
    rec.used_in_fix = *fix;
    result.records.push_back(std::move(rec));
  }
  return result;
}

ParseResult ParseSessionFile(const std::filesystem::path& path, const SchemaConfig& schema) {
  auto in = OpenOrThrow(path);
  return ParseSessionCsv(in, schema);
}

WifiParseResult ParseWifiCsv(std::istream& in, const WifiSchemaConfig& schema) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    StripBom(line);
    if (!Trim(line).empty()) break;
    line.clear();
  }
  if (Trim(line).empty()) throw Error(ErrorCode::kMissingHeader, "no Wi-Fi header row");

  const HeaderIndex header(SplitCsvLine(line));
  const std::size_t c_ts = header.Require(schema.timestamp);
  const std::size_t c_band = header.Require(schema.band);
  const std::size_t c_rssi = header.Require(schema.rssi);
  const auto c_bssid = header.Find(schema.bssid);

  WifiParseResult result;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto fields = SplitCsvLine(line);
    WifiScan scan;
    double band = 0;
    if (!ParseTimestamp(Field(fields, c_ts), scan.timestamp) ||
        !ParseNumber(Field(fields, c_band), band) ||
        !ParseNumber(Field(fields, c_rssi), scan.rssi_dbm)) {
      result.errors.push_back({line_no, "malformed Wi-Fi row"});
      continue;
    }
    // Band may be given in GHz (2.4 / 5) or as a channel frequency in MHz.
    if (band > 100) band /= 1000.0;
    if (band >= 2.3 && band < 2.6) {
      scan.band = WifiBand::k24GHz;
    } else if (band >= 4.9 && band < 5.95) {
      scan.band = WifiBand::k5GHz;
    } else {
      ++result.ignored_other_band;
      continue;
    }
    scan.bssid = Field(fields, c_bssid);
    result.scans.push_back(std::move(scan));
  }
  return result;
}

WifiParseResult ParseWifiFile(const std::filesystem::path& path,
                              const WifiSchemaConfig& schema) {
  auto in = OpenOrThrow(path);
  return ParseWifiCsv(in, schema);
}

CleanResult CleanRecords(std::vector<RawRecord> records, TimestampMs session_start) {
  std::stable_sort(records.begin(), records.end(),
                   [](const RawRecord& a, const RawRecord& b) { return a.timestamp < b.timestamp; });
  CleanResult out;
  out.stats.input = records.size();
  out.records.reserve(records.size());
  for (auto& rec : records) {
    if (!rec.cnr_dbhz) {
      ++out.stats.removed_missing_cnr;
    } else if (*rec.cnr_dbhz == 0.0) {
      ++out.stats.removed_zero_cnr;
    } else if (!rec.carrier_frequency_mhz) {
      ++out.stats.removed_missing_frequency;
    } else if (rec.timestamp < session_start + kWarmupMs) {
      ++out.stats.removed_warmup;
    } else {
      out.records.push_back(std::move(rec));
    }
  }
  return out;
}

std::vector<Epoch> GroupIntoEpochs(const std::vector<RawRecord>& records) {
  std::map<TimestampMs, Epoch> by_time;
  for (const auto& rec : records) {
    auto& epoch = by_time[rec.timestamp];
    epoch.timestamp = rec.timestamp;
    epoch.observations.push_back(rec);
  }
  std::vector<Epoch> epochs;
  epochs.reserve(by_time.size());
  for (auto& [ts, epoch] : by_time) {
    double sum = 0.0;
    for (const auto& obs : epoch.observations) sum += obs.cnr_dbhz.value_or(0.0);
    epoch.satellite_count = static_cast<int>(epoch.observations.size());
    epoch.mean_cnr = sum / static_cast<double>(epoch.satellite_count);
    epochs.push_back(std::move(epoch));
  }
  return epochs;
}

void AttachWifi(std::vector<Epoch>& epochs, const std::vector<WifiScan>& scans) {
  std::map<TimestampMs, std::vector<WifiScan>> by_time;
  for (const auto& s : scans) by_time[s.timestamp].push_back(s);
  static const std::vector<WifiScan> kNone;
  for (auto& epoch : epochs) {
    const auto it = by_time.find(epoch.timestamp);
    epoch.wifi = ComputeWifiEpochFeatures(it == by_time.end() ? kNone : it->second);
  }
}

std::vector<SessionManifestEntry> ReadManifest(const std::filesystem::path& path) {
  auto in = OpenOrThrow(path);
  const auto base = path.parent_path();
  auto resolve = [&](const std::string& p) {
    if (p.empty()) return p;
    const std::filesystem::path fp(p);
    return fp.is_absolute() ? p : (base / fp).lexically_normal().string();
  };

  std::vector<SessionManifestEntry> entries;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  std::optional<std::size_t> c_path, c_label, c_group, c_tag, c_sub, c_wifi;
  while (std::getline(in, line)) {
    ++line_no;
    StripBom(line);
    const auto trimmed = Trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    const auto fields = SplitCsvLine(trimmed);
    if (!header_seen) {
      const HeaderIndex header(fields);
      c_path = header.Find("path");
      c_label = header.Find("label");
      c_group = header.Find("group");
      if (!c_path || !c_label || !c_group) {
        throw Error(ErrorCode::kManifestError,
                    path.string() + ": header must contain path,label,group");
      }
      c_tag = header.Find("location_tag");
      c_sub = header.Find("sublabel");
      c_wifi = header.Find("wifi_path");
      header_seen = true;
      continue;
    }
    auto where = [&] { return path.string() + ":" + std::to_string(line_no) + ": "; };
    SessionManifestEntry e;
    e.file_path = resolve(Field(fields, c_path));
    if (e.file_path.empty()) throw Error(ErrorCode::kManifestError, where() + "empty path");
    const auto label = ParseLabel(Field(fields, c_label));
    if (!label) throw Error(ErrorCode::kManifestError, where() + "bad label");
    e.label = *label;
    const auto group = ParseGroup(Field(fields, c_group));
    if (!group) throw Error(ErrorCode::kManifestError, where() + "bad group");
    e.group = *group;
    e.location_tag = Field(fields, c_tag);
    const auto sub = ParseSublabel(Field(fields, c_sub));
    if (!sub) throw Error(ErrorCode::kManifestError, where() + "bad sublabel");
    e.sublabel = *sub;
    e.wifi_path = resolve(Field(fields, c_wifi));
    entries.push_back(std::move(e));
  }
  if (!header_seen) throw Error(ErrorCode::kManifestError, path.string() + ": empty manifest");
  return entries;
}

void WriteManifest(const std::filesystem::path& path,
                   const std::vector<SessionManifestEntry>& entries) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  const auto base = path.parent_path();
  auto relative = [&](const std::string& p) {
    if (p.empty()) return p;
    const auto rel = std::filesystem::path(p).lexically_relative(base);
    return rel.empty() ? p : rel.generic_string();
  };
  // RFC 4180 quoting for free-text fields.
  auto quoted = [](const std::string& f) {
    if (f.find_first_of(",\"\r\n") == std::string::npos) return f;
    std::string q = "\"";
    for (char c : f) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  out << "path,label,group,location_tag,sublabel,wifi_path\n";
  for (const auto& e : entries) {
    out << quoted(relative(e.file_path)) << ',' << LabelName(e.label) << ','
        << GroupName(e.group) << ',' << quoted(e.location_tag) << ','
        << SublabelName(e.sublabel) << ',' << quoted(relative(e.wifi_path)) << '\n';
  }
}

Session MakeSession(const SessionManifestEntry& entry, std::vector<RawRecord> records,
                    const std::vector<WifiScan>* wifi) {
  Session session;
  session.entry = entry;
  session.start_time = records.empty() ? 0 : records.front().timestamp;
  auto cleaned = CleanRecords(std::move(records), session.start_time);
  session.cleaning = cleaned.stats;
  session.epochs = GroupIntoEpochs(cleaned.records);
  if (wifi != nullptr) AttachWifi(session.epochs, *wifi);
  return session;
}

Session LoadSession(const SessionManifestEntry& entry, const SchemaConfig& schema,
                    const WifiSchemaConfig& wifi_schema) {
  auto parsed = ParseSessionFile(entry.file_path, schema);
  Session session;
  if (entry.wifi_path.empty()) {
    session = MakeSession(entry, std::move(parsed.records));
  } else {
    const auto wifi = ParseWifiFile(entry.wifi_path, wifi_schema);
    session = MakeSession(entry, std::move(parsed.records), &wifi.scans);
  }
  session.parse_errors = parsed.errors.size();
  return session;
}

std::vector<Session> LoadSessions(const std::vector<SessionManifestEntry>& entries,
                                  const SchemaConfig& schema,
                                  const WifiSchemaConfig& wifi_schema) {
  std::vector<Session> sessions;
  sessions.reserve(entries.size());
  for (const auto& e : entries) sessions.push_back(LoadSession(e, schema, wifi_schema));
  return sessions;
}

}  // namespace gnssio
