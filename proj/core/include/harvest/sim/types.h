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

#ifndef HARVEST_SIM_TYPES_H_
#define HARVEST_SIM_TYPES_H_

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "harvest/common/geometry.h"
#include "harvest/stream/action.h"

namespace harvest::sim {

using stream::PumpState;

inline constexpr int kNumStages = 5;
inline constexpr int kStateDims = 8;
inline constexpr double kRipeThreshold = 0.7;

// Simulated end effector. Arm commands are a Cartesian twist
// [vx, vy, vz, wx, wy, wz] plus a bend rate.
struct EEState {
  Vec3 position;
  Vec3 orientation;  // roll, pitch, yaw in radians
  double bend = 0.0;
  PumpState pump = PumpState::kIdle;
  std::optional<int> holding;

  bool operator==(const EEState&) const = default;
};

// Pose (6) + bend + pump code: the robot-state part of an observation.
std::array<double, kStateDims> ToStateVector(const EEState& ee);

enum class Occlusion { kMild = 0, kModerate = 1, kHeavy = 2 };
enum class Illumination { kLow = 0, kNormal = 1, kStrongSpecular = 2 };
enum class Maturity { kRedOnly = 0, kMixed = 1 };

std::string_view OcclusionName(Occlusion o);
std::string_view IlluminationName(Illumination i);
std::string_view MaturityName(Maturity m);
std::optional<Occlusion> ParseOcclusion(std::string_view s);
std::optional<Illumination> ParseIllumination(std::string_view s);
std::optional<Maturity> ParseMaturity(std::string_view s);

enum class FruitLocation { kAttached, kHeld, kInTray, kDropped };

struct Fruit {
  int id = 0;
  Vec3 position;
  double ripeness = 1.0;
  Occlusion occlusion = Occlusion::kMild;
  bool attached = true;
  int severity = 0;  // 0..5, never decreases
  FruitLocation location = FruitLocation::kAttached;

  bool IsRipe() const { return ripeness >= kRipeThreshold; }
  bool operator==(const Fruit&) const = default;
};

// Leaf or branch proxy.
struct Obstacle {
  Vec3 center;
  double radius = 0.0;
  bool operator==(const Obstacle&) const = default;
};

// Episode-level factor tags, one category per factor.
struct SceneTags {
  Illumination illumination = Illumination::kNormal;
  Occlusion occlusion = Occlusion::kMild;
  int visible_targets = 1;
  Maturity maturity = Maturity::kRedOnly;
  bool operator==(const SceneTags&) const = default;
};

struct PlantScene {
  std::vector<Fruit> fruits;
  std::vector<Obstacle> obstacles;
  Box tray;
  Box workspace;
  Vec3 home;
  SceneTags tags;

  int RipeCount() const;
  const Fruit* FindFruit(int id) const;
  Fruit* FindFruit(int id);
  bool operator==(const PlantScene&) const = default;
};

enum class EventKind {
  kStageEntered,
  kDetached,
  kSlip,
  kRotateNoSuction,
  kPlaced,
  kReleased,
  kCollision,
  kDamage,
  kRetry,
  kEStop,
};

std::string_view EventKindName(EventKind k);
std::optional<EventKind> ParseEventKind(std::string_view s);

struct SimEvent {
  double timestamp = 0.0;
  EventKind kind = EventKind::kStageEntered;
  int fruit_id = -1;
  int stage = 0;    // kStageEntered: 1..5
  int delta = 0;    // kDamage: severity increment actually applied
  int attempt = 0;  // attempt index the event belongs to

  bool operator==(const SimEvent&) const = default;
};

enum class AttemptOutcome { kInProgress, kSucceeded, kFailed };

std::string_view AttemptOutcomeName(AttemptOutcome o);
std::optional<AttemptOutcome> ParseAttemptOutcome(std::string_view s);

// Stage flags c_1..c_5 of one pick attempt.
struct AttemptRecord {
  int index = 0;
  int fruit_id = -1;
  std::array<bool, kNumStages> flags{};
  std::array<std::optional<double>, kNumStages> stage_times{};
  double start_time = 0.0;
  std::optional<double> end_time;
  AttemptOutcome outcome = AttemptOutcome::kInProgress;

  int CompletedStages() const;
  bool Complete() const { return CompletedStages() == kNumStages; }
  bool operator==(const AttemptRecord&) const = default;
};

}  // namespace harvest::sim

#endif  // HARVEST_SIM_TYPES_H_
