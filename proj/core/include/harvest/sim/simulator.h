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

#ifndef HARVEST_SIM_SIMULATOR_H_
#define HARVEST_SIM_SIMULATOR_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "harvest/common/rng.h"
#include "harvest/sim/contact.h"
#include "harvest/sim/types.h"

namespace harvest::sim {

struct StageConfig {
  double designation_window = 0.5;      // sustained approach before a target counts as chosen
  double approach_threshold = 0.01;     // "operable pose" distance
  double clean_approach_window = 0.5;   // no collision this long before stage 2
  double home_tolerance = 0.02;
};

struct SimConfig {
  ContactConfig contact;
  DamageConfig damage;
  StageConfig stages;
  int retry_cap = 3;
  double ee_radius = 0.01;
  double bend_limit = 0.8;

  void Validate() const;
};

// Velocity integration only: pose += twist * dt, bend += rate * dt (clipped
// to the bend limit), pump copied. Position is kept inside `workspace`.
EEState IntegrateKinematics(const EEState& ee, const stream::ActionVector& action, double dt,
                            const Box& workspace, double bend_limit);

// Tabletop greenhouse: kinematic end effector, leaf collisions, snap-detach
// contact model, damage accrual and the five-stage attempt machine.
// Deterministic for a given (scene, config, seed) and action sequence.
class Simulator {
 public:
  Simulator(PlantScene scene, SimConfig config, std::uint64_t seed);

  std::vector<SimEvent> Step(const stream::ActionVector& action, double now, double dt);

  // Operator-declared failure of the current attempt.
  std::vector<SimEvent> MarkRetry(double now);
  std::vector<SimEvent> RaiseEStop(double now);

  // Test fixture hook: moves the end effector without emitting events.
  void TeleportEndEffector(const Vec3& position);

  const PlantScene& scene() const { return scene_; }
  const EEState& ee() const { return ee_; }
  const SimConfig& config() const { return config_; }
  const std::vector<AttemptRecord>& attempts() const { return attempts_; }
  int retries() const { return retries_; }
  bool failed() const { return failed_; }
  bool Finished() const;
  bool Succeeded() const;
  int CompletedPicks() const;

 private:
  AttemptRecord& current() { return attempts_.back(); }
  void SetFlag(int stage, double now, std::vector<SimEvent>& events);
  void FailAttempt(double now, std::vector<SimEvent>& events);
  void StartAttempt(double now);
  void Damage(Fruit& fruit, DamageCause cause, double now, std::vector<SimEvent>& events);
  void UpdateTargeting(double now, double dt, std::vector<SimEvent>& events);
  void HandleSnap(double now, double speed, std::vector<SimEvent>& events);
  void Release(double now, std::vector<SimEvent>& events);
  bool RipeFruitRemaining() const;

  PlantScene scene_;
  SimConfig config_;
  Rng contact_rng_;
  EEState ee_;
  std::vector<AttemptRecord> attempts_;
  int retries_ = 0;
  bool failed_ = false;

  std::vector<bool> inside_obstacle_;
  std::vector<double> prev_distance_;
  std::vector<int> approach_ticks_;
  std::optional<double> last_collision_;
  int last_snap_sign_ = 0;
  std::optional<double> last_reversal_;
  bool envelope_armed_ = true;
};

}  // namespace harvest::sim

#endif  // HARVEST_SIM_SIMULATOR_H_
