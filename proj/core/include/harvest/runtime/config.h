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

#ifndef HARVEST_RUNTIME_CONFIG_H_
#define HARVEST_RUNTIME_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "harvest/stream/action.h"

namespace harvest::runtime {

enum class ControlMode { kSync, kAsync };
enum class StarvationMode { kZero, kHoldLast };
enum class ClockMode { kVirtual, kWallClock };

std::string_view ControlModeName(ControlMode m);
std::optional<ControlMode> ParseControlMode(std::string_view s);
std::string_view StarvationModeName(StarvationMode m);
std::optional<StarvationMode> ParseStarvationMode(std::string_view s);
std::string_view ClockModeName(ClockMode m);
std::optional<ClockMode> ParseClockMode(std::string_view s);

struct ControlConfig {
  double frequency = 30.0;  // Hz
  ControlMode mode = ControlMode::kAsync;
  double alpha = 0.5;
  stream::BlendMode blend_mode = stream::BlendMode::kConstant;
  double horizon = 60.0;  // seconds
  std::uint64_t seed = 0;
  std::size_t refill_threshold = 25;
  std::size_t capacity = 100;
  StarvationMode starvation = StarvationMode::kZero;
  ClockMode clock = ClockMode::kVirtual;

  double period() const { return 1.0 / frequency; }
  // ceil(horizon * frequency), robust to representation error.
  std::size_t MaxTicks() const;
  void Validate() const;
};

}  // namespace harvest::runtime

#endif  // HARVEST_RUNTIME_CONFIG_H_
