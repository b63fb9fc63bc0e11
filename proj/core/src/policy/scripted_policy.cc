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

#include "harvest/policy/scripted_policy.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "harvest/common/error.h"

namespace harvest::policy {

using stream::ActionVector;
using stream::PumpState;

namespace {

Box Shrink(const Box& b, double margin) {
  const Vec3 m{margin, margin, margin};
  Box out{b.min + m, b.max - m};
  for (int i = 0; i < 3; ++i) {
    if (out.min[i] > out.max[i]) out.min[i] = out.max[i] = 0.5 * (b.min[i] + b.max[i]);
  }
  return out;
}

}  // namespace

void ScriptedPolicyConfig::Validate() const {
  if (!(max_speed > 0.0) || !(gain > 0.0) || !(contact_speed > 0.0)) {
    throw ValidationError("scripted policy speeds must be positive");
  }
  if (envelop_steps < 0 || snap_half_period < 1 || snap_cycles < 1 || rest_steps < 0) {
    throw ValidationError("scripted policy engage script is malformed");
  }
  if (!(engage_tolerance > 0.0) || !(engage_hysteresis >= 1.0)) {
    throw ValidationError("scripted policy engage tolerance out of range");
  }
}

std::string_view IntentName(Intent i) {
  switch (i) {
    case Intent::kIdle:
      return "idle";
    case Intent::kApproach:
      return "approach";
    case Intent::kEngage:
      return "engage";
    case Intent::kCarry:
      return "carry";
    case Intent::kRelease:
      return "release";
    case Intent::kHome:
      return "home";
  }
  return "idle";
}

ScriptedPolicy::ScriptedPolicy(PolicySpec spec, double period, ScriptedPolicyConfig config)
    : Policy(std::move(spec), period), config_(config) {
  config_.Validate();
}

std::vector<ActionVector> ScriptedPolicy::Constant(PumpState pump) const {
  ActionVector a;
  a.pump = pump;
  return std::vector<ActionVector>(chunk_length(), a);
}

std::vector<ActionVector> ScriptedPolicy::MoveTo(const Observation& obs, const Vec3& goal,
                                                 PumpState pump, bool slow_near_goal) const {
  const double dt = period();
  Vec3 q = obs.ee_position();
  double bend = obs.bend();
  std::vector<ActionVector> out(chunk_length());
  for (ActionVector& a : out) {
    const Vec3 delta = goal - q;
    const double dist = delta.Norm();
    Vec3 v;
    if (dist > 1e-5) {
      double speed = std::min({config_.max_speed, config_.gain * dist, dist / dt});
      if (slow_near_goal) {
        // Never cross into the slow zone faster than contact speed.
        const double outside = std::max(0.0, dist - config_.slow_radius) / dt;
        speed = std::min(speed, std::max(config_.contact_speed, outside));
      }
      v = delta * (speed / dist);
      for (const sim::Obstacle& o : obs.obstacles) {
        const Vec3 r = q - o.center;
        const double rn = r.Norm();
        if (rn < 1e-9 || rn > o.radius + config_.ee_radius + config_.obstacle_margin) continue;
        // Slide around the leaf instead of pushing into it.
        const Vec3 n = r * (1.0 / rn);
        const double inward = v.Dot(n);
        if (inward < 0.0) v = v - n * inward;
        v = v * config_.obstacle_slowdown;
      }
    }
    const double bend_rate =
        std::clamp(-config_.bend_gain * bend, -config_.bend_max_rate, config_.bend_max_rate);
    a.arm = {v.x, v.y, v.z, 0.0, 0.0, 0.0, bend_rate};
    a.pump = pump;
    q = q + v * dt;
    bend += bend_rate * dt;
  }
  return out;
}

std::vector<ActionVector> ScriptedPolicy::Engage(const Observation& obs, const Vec3& goal,
                                                 double start_time) {
  if (last_intent_ != Intent::kEngage || !engage_start_) engage_start_ = start_time;
  const double dt = period();
  const int length = config_.ScriptLength();
  const long long offset = std::llround((start_time - *engage_start_) / dt);
  const PumpState pump = config_.use_pump ? PumpState::kIn : PumpState::kIdle;
  Vec3 q = obs.ee_position();
  std::vector<ActionVector> out(chunk_length());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int j = static_cast<int>((offset + static_cast<long long>(i)) % length);
    ActionVector& a = out[i];
    a.pump = pump;
    if (j < config_.envelop_steps) {
      Vec3 v = (goal - q) * config_.align_gain;
      const double s = v.Norm();
      if (s > config_.align_max_speed) v = v * (config_.align_max_speed / s);
      a.arm = {v.x, v.y, v.z, 0.0, 0.0, 0.0, 0.0};
      q = q + v * dt;
    } else if (j < config_.envelop_steps + 2 * config_.snap_half_period * config_.snap_cycles) {
      const int phase = (j - config_.envelop_steps) / config_.snap_half_period;
      a.arm[6] = phase % 2 == 0 ? config_.snap_rate : -config_.snap_rate;
    }
  }
  return out;
}

const FruitPercept* ScriptedPolicy::SelectTarget(const Observation& obs) {
  auto candidate = [](const FruitPercept& f) {
    return f.IsRipe() && f.attached && !f.held && !f.in_tray;
  };
  if (target_) {
    for (const FruitPercept& f : obs.fused) {
      if (f.fruit_id == *target_ && candidate(f)) return &f;
    }
  }
  const Vec3 p = obs.ee_position();
  const FruitPercept* best = nullptr;
  double best_d = std::numeric_limits<double>::infinity();
  for (const FruitPercept& f : obs.fused) {
    if (!candidate(f)) continue;
    const double d = Distance(p, f.position);
    if (d < best_d) {
      best_d = d;
      best = &f;
    }
  }
  if (best) target_ = best->fruit_id;
  else target_.reset();
  return best;
}

Observation ScriptedPolicy::Predict(const Observation& obs, double start_time) const {
  Observation out = obs;
  if (last_chunk_.empty()) return out;
  const double dt = period();
  const long long first = std::llround((obs.timestamp - last_start_) / dt);
  const long long last = std::llround((start_time - last_start_) / dt);
  for (long long k = std::max(0LL, first); k < last; ++k) {
    if (k >= static_cast<long long>(last_chunk_.size())) break;
    for (int i = 0; i < 3; ++i) out.state[i] += last_chunk_[k].arm[i] * dt;
    out.state[6] += last_chunk_[k].arm[6] * dt;
  }
  return out;
}

std::vector<ActionVector> ScriptedPolicy::Plan(const Observation& observed, double start_time) {
  const Observation obs = Predict(observed, start_time);
  const Vec3 p = obs.ee_position();
  Intent intent = Intent::kIdle;
  std::vector<ActionVector> out;

  const FruitPercept* held = nullptr;
  for (const FruitPercept& f : obs.fused) {
    if (f.held) held = &f;
  }
  if (held) {
    if (Shrink(obs.tray, config_.tray_margin).Contains(p)) {
      intent = Intent::kRelease;
      out = Constant(PumpState::kOut);
      awaiting_home_ = true;
    } else {
      intent = Intent::kCarry;
      Vec3 drop = obs.tray.Center();
      out = MoveTo(obs, drop, PumpState::kIn, false);
    }
  } else {
    if (awaiting_home_ && Distance(p, obs.home) <= config_.home_tolerance) awaiting_home_ = false;
    if (awaiting_home_) {
      intent = Intent::kHome;
      out = MoveTo(obs, obs.home, PumpState::kIdle, false);
    } else if (const FruitPercept* t = SelectTarget(obs)) {
      const double d = Distance(p, t->position);
      const bool engaging = last_intent_ == Intent::kEngage;
      const double limit =
          config_.engage_tolerance * (engaging ? config_.engage_hysteresis : 1.0);
      if (d <= limit) {
        intent = Intent::kEngage;
        out = Engage(obs, t->position, start_time);
      } else {
        intent = Intent::kApproach;
        out = MoveTo(obs, t->position, PumpState::kIdle, true);
      }
    } else {
      out = Constant(PumpState::kIdle);
    }
  }
  if (intent != Intent::kEngage) engage_start_.reset();
  last_intent_ = intent;
  last_chunk_ = out;
  last_start_ = start_time;
  return out;
}

}  // namespace harvest::policy
