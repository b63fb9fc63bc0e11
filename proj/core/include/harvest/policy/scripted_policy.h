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

#ifndef HARVEST_POLICY_SCRIPTED_POLICY_H_
#define HARVEST_POLICY_SCRIPTED_POLICY_H_

#include <optional>
#include <string_view>
#include <vector>

#include "harvest/policy/policy.h"

namespace harvest::policy {

struct ScriptedPolicyConfig {
  double max_speed = 0.10;        // m/s
  double gain = 1.0;              // 1/s, proportional approach
  double contact_speed = 0.02;    // m/s inside slow_radius of the target
  double slow_radius = 0.04;
  double obstacle_margin = 0.015;
  double obstacle_slowdown = 0.5;
  double ee_radius = 0.01;
  double engage_tolerance = 0.006;
  double engage_hysteresis = 2.5;  // keep engaging while d < tolerance * hysteresis
  int envelop_steps = 20;
  int snap_half_period = 3;
  int snap_cycles = 3;
  int rest_steps = 12;
  double snap_rate = 1.0;          // rad/s
  double align_gain = 3.0;
  double align_max_speed = 0.01;
  double bend_gain = 2.0;
  double bend_max_rate = 0.3;
  double home_tolerance = 0.01;
  double tray_margin = 0.02;
  bool use_pump = true;

  int ScriptLength() const { return envelop_steps + 2 * snap_half_period * snap_cycles + rest_steps; }
  void Validate() const;
};

enum class Intent { kIdle, kApproach, kEngage, kCarry, kRelease, kHome };
std::string_view IntentName(Intent i);

// Hand-written harvesting behaviour: approach the nearest ripe fruit, envelop
// it with suction, snap the stem with bend reversals, carry to the tray,
// release and return home. One intent per chunk, planned by rolling an
// internal kinematic model forward over the chunk.
class ScriptedPolicy : public Policy {
 public:
  ScriptedPolicy(PolicySpec spec, double period, ScriptedPolicyConfig config = {});

  Intent last_intent() const { return last_intent_; }
  std::optional<int> target() const { return target_; }

 protected:
  std::vector<stream::ActionVector> Plan(const Observation& obs, double start_time) override;

 private:
  std::vector<stream::ActionVector> MoveTo(const Observation& obs, const Vec3& goal,
                                           stream::PumpState pump, bool slow_near_goal) const;
  std::vector<stream::ActionVector> Engage(const Observation& obs, const Vec3& goal,
                                           double start_time);
  std::vector<stream::ActionVector> Constant(stream::PumpState pump) const;
  const FruitPercept* SelectTarget(const Observation& obs);
  // Rolls the end effector forward along the previous chunk to start_time.
  Observation Predict(const Observation& obs, double start_time) const;

  ScriptedPolicyConfig config_;
  Intent last_intent_ = Intent::kIdle;
  std::optional<int> target_;
  std::optional<double> engage_start_;
  bool awaiting_home_ = false;
  std::vector<stream::ActionVector> last_chunk_;
  double last_start_ = 0.0;
};

}  // namespace harvest::policy

#endif  // HARVEST_POLICY_SCRIPTED_POLICY_H_
