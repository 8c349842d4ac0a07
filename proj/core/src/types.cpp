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

#include "gnssio/types.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "gnssio/error.hpp"

namespace gnssio {
namespace {

std::string Lower(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == ' ' || c == '_' || c == '-') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kMissingHeader: return "MissingHeader";
    case ErrorCode::kUnknownColumn: return "UnknownColumn";
    case ErrorCode::kRowParseError: return "RowParseError";
    case ErrorCode::kManifestError: return "ManifestError";
    case ErrorCode::kMissingFrequency: return "MissingFrequency";
    case ErrorCode::kEmptyEpoch: return "EmptyEpoch";
    case ErrorCode::kOneClassOnly: return "OneClassOnly";
    case ErrorCode::kZeroTotal: return "ZeroTotal";
    case ErrorCode::kEmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::kMissingGroup: return "MissingGroup";
    case ErrorCode::kFeatureModeMismatch: return "FeatureModeMismatch";
    case ErrorCode::kModelSchemaMismatch: return "ModelSchemaMismatch";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Constellation ParseConstellation(std::string_view text) {
  const std::string s = Lower(text);
  if (s == "gps" || s == "navstar" || s == "1") return Constellation::kGps;
  if (s == "glonass" || s == "glo" || s == "3") return Constellation::kGlonass;
  if (s == "galileo" || s == "gal" || s == "6") return Constellation::kGalileo;
  if (s == "beidou" || s == "bds" || s == "compass" || s == "5")
    return Constellation::kBeiDou;
  if (s == "qzss" || s == "4") return Constellation::kQzss;
  if (s == "sbas" || s == "2") return Constellation::kSbas;
  if (s == "irnss" || s == "navic" || s == "7") return Constellation::kIrnss;
  return Constellation::kOther;
}

std::string_view ConstellationName(Constellation c) {
  switch (c) {
    case Constellation::kGps: return "GPS";
    case Constellation::kGlonass: return "GLONASS";
    case Constellation::kGalileo: return "Galileo";
    case Constellation::kBeiDou: return "BeiDou";
    case Constellation::kQzss: return "QZSS";
    case Constellation::kSbas: return "SBAS";
    case Constellation::kIrnss: return "IRNSS";
    case Constellation::kOther: return "Other";
  }
  return "Other";
}

std::string_view LabelName(Label label) {
  return label == Label::kIndoor ? "indoor" : "outdoor";
}

std::optional<Label> ParseLabel(std::string_view text) {
  const std::string s = Lower(text);
  if (s == "indoor" || s == "i") return Label::kIndoor;
  if (s == "outdoor" || s == "o") return Label::kOutdoor;
  return std::nullopt;
}

std::string_view GroupName(Group group) {
  return group == Group::kA ? "A" : "B";
}

std::optional<Group> ParseGroup(std::string_view text) {
  const std::string s = Lower(text);
  if (s == "a") return Group::kA;
  if (s == "b") return Group::kB;
  return std::nullopt;
}

std::string_view SublabelName(Sublabel s) {
  switch (s) {
    case Sublabel::kNone: return "none";
    case Sublabel::kInteriorIndoor: return "interior";
    case Sublabel::kNearWindowIndoor: return "near_window";
  }
  return "none";
}

std::optional<Sublabel> ParseSublabel(std::string_view text) {
  const std::string s = Lower(text);
  if (s.empty() || s == "none") return Sublabel::kNone;
  if (s == "interior" || s == "interiorindoor" || s == "indoorinterior")
    return Sublabel::kInteriorIndoor;
  if (s == "nearwindow" || s == "nearwindowindoor") return Sublabel::kNearWindowIndoor;
  return std::nullopt;
}

std::string_view MethodName(Method m) {
  switch (m) {
    case Method::kThreshold: return "threshold";
    case Method::kSvm: return "svm";
    case Method::kDecisionTree: return "dt";
    case Method::kRandomForest: return "rf";
  }
  return "threshold";
}

std::optional<Method> ParseMethod(std::string_view text) {
  const std::string s = Lower(text);
  if (s == "threshold" || s == "th") return Method::kThreshold;
  if (s == "svm") return Method::kSvm;
  if (s == "dt" || s == "tree" || s == "decisiontree") return Method::kDecisionTree;
  if (s == "rf" || s == "forest" || s == "randomforest") return Method::kRandomForest;
  return std::nullopt;
}

std::string_view FeatureModeName(FeatureMode m) {
  switch (m) {
    case FeatureMode::kGnssOnly: return "gnss";
    case FeatureMode::kWifiOnly: return "wifi";
    case FeatureMode::kFused: return "fused";
  }
  return "gnss";
}

std::optional<FeatureMode> ParseFeatureMode(std::string_view text) {
  const std::string s = Lower(text);
  if (s == "gnss" || s == "gnssonly") return FeatureMode::kGnssOnly;
  if (s == "wifi" || s == "wifionly") return FeatureMode::kWifiOnly;
  if (s == "fused" || s == "fusion" || s == "gnsswifi") return FeatureMode::kFused;
  return std::nullopt;
}

int PredictionTrace::indoor_votes() const {
  return static_cast<int>(std::count(votes.begin(), votes.end(), Label::kIndoor));
}

int PredictionTrace::outdoor_votes() const {
  return static_cast<int>(votes.size()) - indoor_votes();
}

Label MajorityLabel(int indoor, int outdoor) {
  return outdoor > indoor ? Label::kOutdoor : Label::kIndoor;
}

Label MajorityLabel(const std::vector<Label>& labels) {
  const auto indoor =
      static_cast<int>(std::count(labels.begin(), labels.end(), Label::kIndoor));
  return MajorityLabel(indoor, static_cast<int>(labels.size()) - indoor);
}

}  // namespace gnssio
