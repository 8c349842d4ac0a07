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

// Versioned model files. Every model family shares one JSON document
// layout:
//
//   {
//     "format": "gnssio-model",
//     "format_version": 1,
//     "method": "threshold" | "svm" | "dt" | "rf",
//     "feature_mode": "gnss" | "wifi" | "fused",
//     "feature_names": [...],
//     "metadata": {string: string},
//     "threshold_table" | "ml": {...}
//   }
//
// Doubles are written in shortest round-trip form, so save -> load -> save
// is byte-identical and reloaded models predict bit-identically.

#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "gnssio/classifier.hpp"

namespace gnssio {

inline constexpr int kModelFormatVersion = 1;

using ModelMetadata = std::map<std::string, std::string>;

struct ModelFile {
  Classifier classifier;
  ModelMetadata metadata;
};

std::string SerializeModel(const Classifier& classifier, const ModelMetadata& metadata = {});

// Throws Error{kModelSchemaMismatch} for malformed documents, unknown
// versions, or a feature-order list that differs from the build's.
ModelFile ParseModel(const std::string& text);

void SaveModel(const std::filesystem::path& path, const Classifier& classifier,
               const ModelMetadata& metadata = {});
ModelFile LoadModel(const std::filesystem::path& path);

}  // namespace gnssio
