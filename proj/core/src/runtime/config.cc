// Copyright 2026 The Harvest Runtime Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "harvest/runtime/config.h"

#include "harvest/runtime/episode_log.h"

#include <cmath>

#include "harvest/common/error.h"

namespace harvest::runtime {

std::string_view ControlModeName(ControlMode m) {
  return m == ControlMode::kSync ? "sync" : "async";
}

std::optional<ControlMode> ParseControlMode(std::string_view s) {
  if (s == "sync") return ControlMode::kSync;
  if (s == "async") return ControlMode::kAsync;
  return std::nullopt;
}

std::string_view StarvationModeName(StarvationMode m) {
  return m == StarvationMode::kZero ? "zero" : "hold_last";
}

std::optional<StarvationMode> ParseStarvationMode(std::string_view s) {
  if (s == "zero") return StarvationMode::kZero;
  if (s == "hold_last") return StarvationMode::kHoldLast;
  return std::nullopt;
}

std::string_view ClockModeName(ClockMode m) {
  return m == ClockMode::kVirtual ? "virtual" : "wall";
}

std::optional<ClockMode> ParseClockMode(std::string_view s) {
  if (s == "virtual") return ClockMode::kVirtual;
  if (s == "wall") return ClockMode::kWallClock;
  return std::nullopt;
}

std::string_view ActionSourceName(ActionSource s) {
  switch (s) {
    case ActionSource::kQueue:
      return "queue";
    case ActionSource::kHold:
      return "hold";
    case ActionSource::kZero:
      return "zero";
    case ActionSource::kOperator:
      return "operator";
  }
  return "zero";
}

std::optional<ActionSource> ParseActionSource(std::string_view s) {
  for (ActionSource a : {ActionSource::kQueue, ActionSource::kHold, ActionSource::kZero,
                         ActionSource::kOperator}) {
    if (ActionSourceName(a) == s) return a;
  }
  return std::nullopt;
}

std::size_t ControlConfig::MaxTicks() const {
  return static_cast<std::size_t>(std::ceil(horizon * frequency - 1e-9));
}

void ControlConfig::Validate() const {
  if (!(frequency > 0.0) || !std::isfinite(frequency)) {
    throw ValidationError("control frequency must be positive");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("alpha must lie in [0, 1]");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw ValidationError("horizon must be positive");
  }
  if (capacity == 0) throw ValidationError("queue capacity must be >= 1");
}

}  // namespace harvest::runtime
