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

#ifndef HARVEST_STREAM_ACTION_H_
#define HARVEST_STREAM_ACTION_H_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace harvest::stream {

inline constexpr int kArmDims = 7;

// Three-state suction pump. The integer values are the wire/log encoding.
enum class PumpState : int { kIn = 0, kOut = 1, kIdle = 2 };

std::string_view PumpName(PumpState pump);
std::optional<PumpState> ParsePump(std::string_view name);

using ArmCommand = std::array<double, kArmDims>;

// One actuation: 7-D velocity-mode arm command plus the discrete pump state.
struct ActionVector {
  ArmCommand arm{};
  PumpState pump = PumpState::kIdle;

  static ActionVector Zero() { return {}; }
  bool IsFinite() const;
  bool operator==(const ActionVector&) const = default;
};

struct TimedAction {
  double timestamp = 0.0;
  ActionVector action;

  bool operator==(const TimedAction&) const = default;
};

// H actions at a fixed period; action i is due at start_timestamp + i * period.
struct ActionChunk {
  double start_timestamp = 0.0;
  double period = 0.0;
  std::vector<ActionVector> actions;
};

// Throws ValidationError on a non-positive period, an empty chunk, a negative
// or non-finite start, or non-finite arm components.
void ValidateChunk(const ActionChunk& chunk);

std::vector<TimedAction> ChunkToTimed(const ActionChunk& chunk);

enum class BlendMode {
  kConstant,    // same alpha for every matched pair
  kLinearRamp,  // alpha falls from 1 to 0 across the overlap
};

// Merges the not-yet-executed tail `old_tail` with a freshly inferred sequence.
// Pairs whose timestamps are within period/2 of each other are matched
// (nearest first, order preserving) and their arm components combined as
// alpha * old + (1 - alpha) * new; the pump follows the new entry and the
// blended entry keeps the new timestamp. Unmatched old entries before the new
// span and after it pass through, unmatched old entries inside the new span
// are superseded, unmatched new entries pass through unchanged.
std::vector<TimedAction> BlendOverlap(std::span<const TimedAction> old_tail,
                                      std::span<const TimedAction> fresh,
                                      double alpha, double period,
                                      BlendMode mode = BlendMode::kConstant);

// Arm-only mix used by BlendOverlap; exposed for the ramped mode and tests.
ArmCommand MixArm(const ArmCommand& old_arm, const ArmCommand& new_arm, double alpha);

}  // namespace harvest::stream

#endif  // HARVEST_STREAM_ACTION_H_
