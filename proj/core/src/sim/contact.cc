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

#include "harvest/sim/contact.h"

#include <algorithm>
#include <cmath>

#include "harvest/common/error.h"

namespace harvest::sim {

void ContactConfig::Validate() const {
  if (!(p_base >= 0.0 && p_base <= 1.0)) throw ValidationError("contact.p_base must lie in [0, 1]");
  if (!(alignment_scale > 0.0) || !(snap_speed_scale > 0.0)) {
    throw ValidationError("contact scales must be positive");
  }
  if (!(engage_distance > 0.0) || !(max_alignment_error > 0.0)) {
    throw ValidationError("contact distances must be positive");
  }
  if (!(snap_threshold > 0.0)) throw ValidationError("contact.snap_threshold must be positive");
}

std::string_view DetachOutcomeName(DetachOutcome o) {
  switch (o) {
    case DetachOutcome::kDetached:
      return "detached";
    case DetachOutcome::kSlip:
      return "slip";
    case DetachOutcome::kRotateNoSuction:
      return "rotate_no_suction";
    case DetachOutcome::kNoContact:
      return "no_contact";
  }
  return "no_contact";
}

double DetachProbability(double alignment_error, double snap_speed, const ContactConfig& config) {
  const double e = alignment_error / config.alignment_scale;
  return config.p_base * std::exp(-e * e) *
         std::min(1.0, std::abs(snap_speed) / config.snap_speed_scale);
}

DetachOutcome AttemptDetach(const EEState& ee, const Fruit& fruit, double snap_speed,
                            const ContactConfig& config, Rng& rng) {
  const double error = Distance(ee.position, fruit.position);
  if (!fruit.attached || error > config.engage_distance) return DetachOutcome::kNoContact;
  if (ee.pump != PumpState::kIn) return DetachOutcome::kRotateNoSuction;
  if (error > config.max_alignment_error) return DetachOutcome::kSlip;
  const double p = DetachProbability(error, snap_speed, config);
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  return u < p ? DetachOutcome::kDetached : DetachOutcome::kSlip;
}

int DamageConfig::Increment(DamageCause cause) const {
  switch (cause) {
    case DamageCause::kCollision:
      return collision;
    case DamageCause::kSlip:
      return slip;
    case DamageCause::kRotateNoSuction:
      return rotate_no_suction;
    case DamageCause::kRetry:
      return retry;
    case DamageCause::kHardApproach:
      return hard_approach;
  }
  return 0;
}

void DamageConfig::Validate() const {
  for (int inc : {collision, slip, rotate_no_suction, retry, hard_approach}) {
    if (inc < 0) throw ValidationError("damage increments must be non-negative");
  }
}

int AccrueDamage(Fruit& fruit, DamageCause cause, const DamageConfig& config) {
  const int before = fruit.severity;
  fruit.severity = std::min(kMaxSeverity, fruit.severity + config.Increment(cause));
  return fruit.severity - before;
}

}  // namespace harvest::sim
