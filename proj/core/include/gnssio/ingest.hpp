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

// Session CSV parsing, cleaning and epoch grouping.
//
// A session file is a UTF-8, comma-separated CSV with a header row. Column
// names are configurable through SchemaConfig; unknown extra columns
// (almanac, ephemeris, cellular sections, ...) are ignored.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gnssio/types.hpp"

namespace gnssio {

struct SchemaConfig {
  std::string timestamp = "timestamp";
  std::string svid = "svid";
  std::string constellation = "constellation";
  std::string azimuth = "azimuth";
  std::string elevation = "elevation";
  std::string carrier_frequency = "carrier_freq_mhz";
  std::string cnr = "cnr_dbhz";
  std::string used_in_fix = "used_in_fix";
};

struct WifiSchemaConfig {
  std::string timestamp = "timestamp";
  std::string bssid = "bssid";
  std::string band = "band_ghz";
  std::string rssi = "rssi_dbm";
};

struct RowError {
  int line = 0;
  std::string message;
};

struct ParseResult {
  std::vector<RawRecord> records;
  std::vector<RowError> errors;
};

struct WifiParseResult {
  std::vector<WifiScan> scans;
  std::vector<RowError> errors;
  std::size_t ignored_other_band = 0;
};

// Throws Error{kMissingHeader} for an empty file and Error{kUnknownColumn}
// when a required column is absent. Malformed data rows are reported in
// ParseResult::errors and never abort the parse.
ParseResult ParseSessionCsv(std::istream& in, const SchemaConfig& schema = {});
ParseResult ParseSessionFile(const std::filesystem::path& path,
                             const SchemaConfig& schema = {});

WifiParseResult ParseWifiCsv(std::istream& in, const WifiSchemaConfig& schema = {});
WifiParseResult ParseWifiFile(const std::filesystem::path& path,
                              const WifiSchemaConfig& schema = {});

inline constexpr TimestampMs kWarmupMs = 20'000;

struct CleanResult {
  std::vector<RawRecord> records;
  CleaningStats stats;
};

// Drops rows with CNR == 0, absent CNR, absent carrier frequency, or a
// timestamp inside the first 20 s after session_start. Output is sorted by
// timestamp (stable, so file order is preserved within a timestamp).
CleanResult CleanRecords(std::vector<RawRecord> records, TimestampMs session_start);

// One epoch per distinct timestamp, in increasing order.
std::vector<Epoch> GroupIntoEpochs(const std::vector<RawRecord>& records);

// Attaches per-epoch Wi-Fi features computed from scans sharing the epoch's
// timestamp. Epochs without any scan receive the empty-band sentinel values.
void AttachWifi(std::vector<Epoch>& epochs, const std::vector<WifiScan>& scans);

// Manifest: CSV with header
//   path,label,group,location_tag,sublabel[,wifi_path]
// Lines starting with '#' and blank lines are skipped. Relative paths are
// resolved against the manifest's directory.
std::vector<SessionManifestEntry> ReadManifest(const std::filesystem::path& path);
void WriteManifest(const std::filesystem::path& path,
                   const std::vector<SessionManifestEntry>& entries);

// Parses, cleans and groups one session. Session start is the timestamp of
// the first data row in the file.
Session LoadSession(const SessionManifestEntry& entry, const SchemaConfig& schema = {},
                    const WifiSchemaConfig& wifi_schema = {});
std::vector<Session> LoadSessions(const std::vector<SessionManifestEntry>& entries,
                                  const SchemaConfig& schema = {},
                                  const WifiSchemaConfig& wifi_schema = {});

// Builds a session from in-memory records using the same cleaning and
// grouping path as LoadSession.
Session MakeSession(const SessionManifestEntry& entry, std::vector<RawRecord> records,
                    const std::vector<WifiScan>* wifi = nullptr);

// Minimal RFC-4180 field splitter shared by the readers.
std::vector<std::string> SplitCsvLine(const std::string& line);

}  // namespace gnssio
