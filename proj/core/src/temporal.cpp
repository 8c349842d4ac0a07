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

#include "gnssio/temporal.hpp"

#include <string>

#include "gnssio/error.hpp"

namespace gnssio {
namespace {

std::int64_t FloorDiv(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

void ValidateWindowConfig(const WindowConfig& cfg) {
  if (cfg.window_seconds <= 0 || cfg.window_seconds % kEpochPeriodSeconds != 0) {
    throw Error(ErrorCode::kInvalidConfig,
                "window_seconds must be a positive multiple of 5, got " +
                    std::to_string(cfg.window_seconds));
  }
}

std::vector<WindowLabel> AggregateWindows(std::span<const PredictionTrace> traces,
                                          const WindowConfig& cfg,
                                          std::optional<TimestampMs> anchor) {
  ValidateWindowConfig(cfg);
  std::vector<WindowLabel> windows;
  if (traces.empty()) return windows;
  const TimestampMs origin = anchor.value_or(traces.front().epoch_timestamp);
  const std::int64_t width_ms = static_cast<std::int64_t>(cfg.window_seconds) * 1000;

  for (const auto& trace : traces) {
    const std::int64_t index = FloorDiv(trace.epoch_timestamp - origin, width_ms);
    if (windows.empty() || windows.back().window_index != index) {
      WindowLabel w;
      w.window_index = index;
      w.window_start = origin + index * width_ms;
      windows.push_back(w);
    }
    auto& w = windows.back();
    ++w.n_epochs;
    w.n_indoor += trace.final_label == Label::kIndoor ? 1 : 0;
  }
  for (auto& w : windows) w.label = MajorityLabel(w.n_indoor, w.n_epochs - w.n_indoor);
  return windows;
}

int CountFlips(std::span<const Label> labels) {
  int flips = 0;
  for (std::size_t i = 1; i < labels.size(); ++i) flips += labels[i] != labels[i - 1] ? 1 : 0;
  return flips;
}

}  // namespace gnssio
