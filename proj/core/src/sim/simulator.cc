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

#include "harvest/sim/simulator.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "harvest/common/error.h"

namespace harvest::sim {

void SimConfig::Validate() const {
  contact.Validate();
  damage.Validate();
  if (retry_cap < 0) throw ValidationError("sim.retry_cap must be >= 0");
  if (!(stages.designation_window > 0.0) || !(stages.approach_threshold > 0.0) ||
      !(stages.home_tolerance > 0.0) || stages.clean_approach_window < 0.0) {
    throw ValidationError("sim.stages thresholds must be positive");
  }
  if (!(ee_radius >= 0.0) || !(bend_limit > 0.0)) throw ValidationError("sim geometry is invalid");
}

EEState IntegrateKinematics(const EEState& ee, const stream::ActionVector& action, double dt,
                            const Box& workspace, double bend_limit) {
  EEState next = ee;
  const auto& a = action.arm;
  next.position = {std::clamp(ee.position.x + a[0] * dt, workspace.min.x, workspace.max.x),
                   std::clamp(ee.position.y + a[1] * dt, workspace.min.y, workspace.max.y),
                   std::clamp(ee.position.z + a[2] * dt, workspace.min.z, workspace.max.z)};
  next.orientation = {ee.orientation.x + a[3] * dt, ee.orientation.y + a[4] * dt,
                      ee.orientation.z + a[5] * dt};
  next.bend = std::clamp(ee.bend + a[6] * dt, -bend_limit, bend_limit);
  next.pump = action.pump;
  return next;
}

Simulator::Simulator(PlantScene scene, SimConfig config, std::uint64_t seed)
    : scene_(std::move(scene)),
      config_(config),
      contact_rng_(DeriveSeed(seed, rng_stream::kContact)) {
  config_.Validate();
  ee_.position = scene_.home;
  inside_obstacle_.assign(scene_.obstacles.size(), false);
  prev_distance_.resize(scene_.fruits.size());
  approach_ticks_.assign(scene_.fruits.size(), 0);
  for (std::size_t i = 0; i < scene_.fruits.size(); ++i) {
    prev_distance_[i] = Distance(ee_.position, scene_.fruits[i].position);
  }
  StartAttempt(0.0);
}

void Simulator::StartAttempt(double now) {
  AttemptRecord a;
  a.index = static_cast<int>(attempts_.size());
  a.start_time = now;
  attempts_.push_back(a);
  std::fill(approach_ticks_.begin(), approach_ticks_.end(), 0);
}

void Simulator::SetFlag(int stage, double now, std::vector<SimEvent>& events) {
  AttemptRecord& a = current();
  a.flags[stage - 1] = true;
  a.stage_times[stage - 1] = now;
  events.push_back({now, EventKind::kStageEntered, a.fruit_id, stage, 0, a.index});
}

void Simulator::Damage(Fruit& fruit, DamageCause cause, double now,
                       std::vector<SimEvent>& events) {
  const int delta = AccrueDamage(fruit, cause, config_.damage);
  if (delta > 0) events.push_back({now, EventKind::kDamage, fruit.id, 0, delta, current().index});
}

void Simulator::FailAttempt(double now, std::vector<SimEvent>& events) {
  AttemptRecord& a = current();
  a.outcome = AttemptOutcome::kFailed;
  a.end_time = now;
  ++retries_;
  events.push_back({now, EventKind::kRetry, a.fruit_id, 0, 0, a.index});
  if (Fruit* f = scene_.FindFruit(a.fruit_id)) Damage(*f, DamageCause::kRetry, now, events);
  if (retries_ > config_.retry_cap) {
    failed_ = true;
    return;
  }
  StartAttempt(now);
}

bool Simulator::RipeFruitRemaining() const {
  return std::any_of(scene_.fruits.begin(), scene_.fruits.end(), [](const Fruit& f) {
    return f.IsRipe() && (f.location == FruitLocation::kAttached ||
                          f.location == FruitLocation::kHeld);
  });
}

bool Simulator::Finished() const {
  if (failed_) return true;
  if (scene_.RipeCount() == 0) return true;
  if (RipeFruitRemaining()) return false;
  // Only the trip home after the last placement is left.
  const AttemptRecord& a = attempts_.back();
  return !(a.flags[3] && !a.flags[4]);
}

int Simulator::CompletedPicks() const {
  return static_cast<int>(std::count_if(attempts_.begin(), attempts_.end(),
                                        [](const AttemptRecord& a) { return a.Complete(); }));
}

bool Simulator::Succeeded() const {
  const int ripe = scene_.RipeCount();
  return ripe > 0 && CompletedPicks() >= ripe;
}

void Simulator::TeleportEndEffector(const Vec3& position) {
  ee_.position = position;
  for (std::size_t i = 0; i < scene_.fruits.size(); ++i) {
    prev_distance_[i] = Distance(ee_.position, scene_.fruits[i].position);
  }
}

void Simulator::UpdateTargeting(double now, double dt, std::vector<SimEvent>& events) {
  const StageConfig& sc = config_.stages;
  const int needed = std::max(1, static_cast<int>(std::ceil(sc.designation_window / dt - 1e-9)));
  int best = -1;
  for (std::size_t i = 0; i < scene_.fruits.size(); ++i) {
    const Fruit& f = scene_.fruits[i];
    const double d = Distance(ee_.position, f.position);
    if (f.IsRipe() && f.attached &&
        (d < prev_distance_[i] - 1e-9 || d < config_.contact.engage_distance)) {
      ++approach_ticks_[i];
    } else {
      approach_ticks_[i] = 0;
    }
    prev_distance_[i] = d;
    if (approach_ticks_[i] >= needed) {
      if (best < 0 || approach_ticks_[i] > approach_ticks_[best] ||
          (approach_ticks_[i] == approach_ticks_[best] &&
           d < Distance(ee_.position, scene_.fruits[best].position))) {
        best = static_cast<int>(i);
      }
    }
  }

  AttemptRecord& a = current();
  if (!a.flags[0]) {
    if (best >= 0) {
      a.fruit_id = scene_.fruits[best].id;
      SetFlag(1, now, events);
    }
    return;
  }
  if (a.flags[1]) return;

  // Re-designate when the end effector reaches a different ripe fruit.
  for (const Fruit& f : scene_.fruits) {
    if (f.id != a.fruit_id && f.IsRipe() && f.attached &&
        Distance(ee_.position, f.position) < sc.approach_threshold) {
      a.fruit_id = f.id;
    }
  }
  const Fruit* target = scene_.FindFruit(a.fruit_id);
  const bool clean = !last_collision_ || now - *last_collision_ >= sc.clean_approach_window;
  if (target && target->attached && clean &&
      Distance(ee_.position, target->position) < sc.approach_threshold) {
    SetFlag(2, now, events);
  }
}

void Simulator::HandleSnap(double now, double speed, std::vector<SimEvent>& events) {
  if (ee_.holding) return;
  if (!envelope_armed_) return;
  Fruit* nearest = nullptr;
  double best = std::numeric_limits<double>::infinity();
  for (Fruit& f : scene_.fruits) {
    if (!f.attached) continue;
    const double d = Distance(ee_.position, f.position);
    if (d < best) {
      best = d;
      nearest = &f;
    }
  }
  if (!nearest) return;
  const DetachOutcome outcome = AttemptDetach(ee_, *nearest, speed, config_.contact, contact_rng_);
  AttemptRecord& a = current();
  switch (outcome) {
    case DetachOutcome::kNoContact:
      return;
    case DetachOutcome::kDetached:
      nearest->attached = false;
      nearest->location = FruitLocation::kHeld;
      ee_.holding = nearest->id;
      events.push_back({now, EventKind::kDetached, nearest->id, 0, 0, a.index});
      if (a.flags[1] && !a.flags[2] && a.fruit_id == nearest->id) SetFlag(3, now, events);
      return;
    case DetachOutcome::kSlip:
      events.push_back({now, EventKind::kSlip, nearest->id, 0, 0, a.index});
      Damage(*nearest, DamageCause::kSlip, now, events);
      break;
    case DetachOutcome::kRotateNoSuction:
      events.push_back({now, EventKind::kRotateNoSuction, nearest->id, 0, 0, a.index});
      Damage(*nearest, DamageCause::kRotateNoSuction, now, events);
      break;
  }
  envelope_armed_ = false;
  if (a.fruit_id < 0) a.fruit_id = nearest->id;
  FailAttempt(now, events);
}

void Simulator::Release(double now, std::vector<SimEvent>& events) {
  Fruit* f = scene_.FindFruit(*ee_.holding);
  ee_.holding.reset();
  if (!f) return;
  AttemptRecord& a = current();
  events.push_back({now, EventKind::kReleased, f->id, 0, 0, a.index});
  if (scene_.tray.Contains(f->position)) {
    f->location = FruitLocation::kInTray;
    events.push_back({now, EventKind::kPlaced, f->id, 0, 0, a.index});
    if (a.flags[2] && !a.flags[3] && a.fruit_id == f->id) SetFlag(4, now, events);
  } else {
    f->location = FruitLocation::kDropped;
    FailAttempt(now, events);
  }
}

std::vector<SimEvent> Simulator::Step(const stream::ActionVector& action, double now, double dt) {
  std::vector<SimEvent> events;
  if (failed_) return events;

  const PumpState prev_pump = ee_.pump;
  ee_ = IntegrateKinematics(ee_, action, dt, scene_.workspace, config_.bend_limit);
  const Vec3 velocity{action.arm[0], action.arm[1], action.arm[2]};
  const double speed = velocity.Norm();

  if (ee_.holding) {
    if (Fruit* held = scene_.FindFruit(*ee_.holding)) held->position = ee_.position;
  }

  // Leaf strikes bruise whatever fruit is near the gripper.
  for (std::size_t i = 0; i < scene_.obstacles.size(); ++i) {
    const Obstacle& o = scene_.obstacles[i];
    const bool inside = Distance(ee_.position, o.center) < o.radius + config_.ee_radius;
    if (inside && !inside_obstacle_[i]) {
      last_collision_ = now;
      events.push_back({now, EventKind::kCollision, -1, 0, 0, current().index});
      for (Fruit& f : scene_.fruits) {
        if ((f.attached || f.location == FruitLocation::kHeld) &&
            Distance(ee_.position, f.position) < config_.damage.collision_radius) {
          Damage(f, DamageCause::kCollision, now, events);
        }
      }
    }
    inside_obstacle_[i] = inside;
  }

  for (std::size_t i = 0; i < scene_.fruits.size(); ++i) {
    Fruit& f = scene_.fruits[i];
    if (!f.attached || !f.IsRipe()) continue;
    const double d = Distance(ee_.position, f.position);
    if (d < config_.contact.engage_distance && prev_distance_[i] >= config_.contact.engage_distance &&
        speed > config_.damage.hard_approach_speed) {
      Damage(f, DamageCause::kHardApproach, now, events);
    }
  }

  if (ee_.holding && ee_.pump != PumpState::kIn) Release(now, events);
  if (failed_) return events;

  UpdateTargeting(now, dt, events);

  // Re-seating the envelope: fresh suction, or a pause in the snapping.
  if (ee_.pump == PumpState::kIn && prev_pump != PumpState::kIn) envelope_armed_ = true;
  const double bend_rate = action.arm[6];
  if (std::abs(bend_rate) >= config_.contact.snap_threshold) {
    const int sign = bend_rate > 0.0 ? 1 : -1;
    if (last_snap_sign_ != 0 && sign != last_snap_sign_) {
      if (!envelope_armed_ && last_reversal_ &&
          now - *last_reversal_ >= config_.contact.rearm_rest - 1e-9) {
        envelope_armed_ = true;
      }
      last_reversal_ = now;
      HandleSnap(now, std::abs(bend_rate), events);
      if (failed_) return events;
    }
    last_snap_sign_ = sign;
  }

  AttemptRecord& a = current();
  if (a.flags[3] && !a.flags[4] &&
      Distance(ee_.position, scene_.home) < config_.stages.home_tolerance) {
    SetFlag(5, now, events);
    a.outcome = AttemptOutcome::kSucceeded;
    a.end_time = now;
    if (RipeFruitRemaining()) StartAttempt(now);
  }
  return events;
}

std::vector<SimEvent> Simulator::MarkRetry(double now) {
  std::vector<SimEvent> events;
  if (failed_) return events;
  FailAttempt(now, events);
  return events;
}

std::vector<SimEvent> Simulator::RaiseEStop(double now) {
  return {SimEvent{now, EventKind::kEStop, -1, 0, 0, attempts_.back().index}};
}

}  // namespace harvest::sim
