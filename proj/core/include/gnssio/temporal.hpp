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

#include <optional>
#include <span>
#include <vector>

#include "gnssio/types.hpp"

namespace gnssio {

inline constexpr int kEpochPeriodSeconds = 5;

struct WindowConfig {
  int window_seconds = kEpochPeriodSeconds;
};

// Throws Error{kInvalidConfig} unless window_seconds is a positive multiple
// of the 5 s epoch period.
void ValidateWindowConfig(const WindowConfig& cfg);

struct WindowLabel {
  std::int64_t window_index = 0;
  TimestampMs window_start = 0;
  int n_epochs = 0;
  int n_indoor = 0;
  Label label = Label::kIndoor;
};

// Tumbling windows anchored at `anchor` (defaults to the first trace's
// timestamp). Window k covers [anchor + k*W, anchor + (k+1)*W); missing
// epochs leave boundaries in place and empty windows are not emitted.
// Labels are the epoch-label majority with ties going to Indoor.
std::vector<WindowLabel> AggregateWindows(std::span<const PredictionTrace> traces,
                                          const WindowConfig& cfg,
                                          std::optional<TimestampMs> anchor = std::nullopt);

// Number of label changes between consecutive elements.
int CountFlips(std::span<const Label> labels);

}  // namespace gnssio
