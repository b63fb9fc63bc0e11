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

#ifndef HARVEST_SIM_CONTACT_H_
#define HARVEST_SIM_CONTACT_H_

#include <string_view>

#include "harvest/common/rng.h"
#include "harvest/sim/types.h"

namespace harvest::sim {

struct ContactConfig {
  double p_base = 0.9;
  double alignment_scale = 0.005;      // e0, metres
  double snap_speed_scale = 1.0;       // s0, rad/s
  double max_alignment_error = 0.010;  // beyond this a snap always slips
  double engage_distance = 0.03;
  double snap_threshold = 0.5;  // |bend rate| needed for a reversal to count as a snap
  double rearm_rest = 0.4;      // seconds without snapping that re-seat the envelope

  void Validate() const;
};

enum class DetachOutcome { kDetached, kSlip, kRotateNoSuction, kNoContact };

std::string_view DetachOutcomeName(DetachOutcome o);

// p = p_base * exp(-(e/e0)^2) * min(1, s/s0).
double DetachProbability(double alignment_error, double snap_speed, const ContactConfig& config);

// One snap against `fruit`. Checks, in order: engage distance (NoContact),
// suction (RotateNoSuction), alignment limit (Slip), then a Bernoulli draw
// with DetachProbability (Detached, otherwise Slip). Consumes one uniform
// draw only when the draw is reached.
DetachOutcome AttemptDetach(const EEState& ee, const Fruit& fruit, double snap_speed,
                            const ContactConfig& config, Rng& rng);

enum class DamageCause { kCollision, kSlip, kRotateNoSuction, kRetry, kHardApproach };

struct DamageConfig {
  int collision = 1;
  int slip = 1;
  int rotate_no_suction = 1;
  int retry = 0;
  int hard_approach = 1;
  double collision_radius = 0.05;     // fruits this close to a leaf strike are bruised
  double hard_approach_speed = 0.06;  // m/s when crossing into engage distance

  int Increment(DamageCause cause) const;
  void Validate() const;
};

// Adds the configured increment, capped at 5. Returns the delta applied.
int AccrueDamage(Fruit& fruit, DamageCause cause, const DamageConfig& config);

inline constexpr int kMaxSeverity = 5;

}  // namespace harvest::sim

#endif  // HARVEST_SIM_CONTACT_H_
