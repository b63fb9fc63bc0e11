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


#include "harvest/teleop/session.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>

#include "harvest/common/error.h"

namespace harvest::teleop {

namespace {

constexpr Phase kPhases[] = {Phase::kIdle,   Phase::kLive,    Phase::kRecording,
                             Phase::kPaused, Phase::kStopped, Phase::kEStopped};
constexpr Button kButtons[] = {Button::kEStop,      Button::kStop,      Button::kPause,
                               Button::kEndEpisode, Button::kMarkRetry, Button::kResume,
                               Button::kStartEpisode};

Effect Reject(std::string code, std::string message) {
  Effect e;
  e.accepted = false;
  e.error_code = std::move(code);
  e.message = std::move(message);
  return e;
}

Effect InvalidTransition(Button b, Phase p) {
  return Reject("invalid_transition", std::string(ButtonName(b)) + " is not allowed while " +
                                          std::string(PhaseName(p)));
}

void Merge(Effect& into, const Effect& e) {
  into.phase_changed |= e.phase_changed;
  into.estop |= e.estop;
  into.mark_retry |= e.mark_retry;
  if (e.started_episode) into.started_episode = e.started_episode;
  if (e.ended_episode) into.ended_episode = e.ended_episode;
}

}  // namespace

std::string_view PhaseName(Phase p) {
  switch (p) {
    case Phase::kIdle:
      return "idle";
    case Phase::kLive:
      return "live";
    case Phase::kRecording:
      return "recording";
    case Phase::kPaused:
      return "paused";
    case Phase::kStopped:
      return "stopped";
    case Phase::kEStopped:
      return "estopped";
  }
  return "idle";
}

std::optional<Phase> ParsePhase(std::string_view s) {
  for (Phase p : kPhases) {
    if (PhaseName(p) == s) return p;
  }
  return std::nullopt;
}

bool IsLive(Phase p) { return p == Phase::kLive || p == Phase::kRecording; }

std::string_view ButtonName(Button b) {
  switch (b) {
    case Button::kEStop:
      return "estop";
    case Button::kStop:
      return "stop";
    case Button::kPause:
      return "pause";
    case Button::kEndEpisode:
      return "end_episode";
    case Button::kMarkRetry:
      return "mark_retry";
    case Button::kResume:
      return "resume";
    case Button::kStartEpisode:
      return "start_episode";
  }
  return "pause";
}

std::optional<Button> ParseButton(std::string_view s) {
  for (Button b : kButtons) {
    if (ButtonName(b) == s) return b;
  }
  return std::nullopt;
}

ActionVector TeleopCommand::ToAction() const {
  ActionVector a;
  for (int i = 0; i < 6; ++i) a.arm[i] = twist[i];
  a.arm[6] = bend_rate;
  a.pump = pump;
  return a;
}

bool TeleopCommand::Has(Button b) const {
  return std::find(buttons.begin(), buttons.end(), b) != buttons.end();
}

ActionVector InterpolationPlan::Evaluate() const {
  if (Done() || duration <= 0.0) return to;
  const double s = std::clamp(elapsed / duration, 0.0, 1.0);
  ActionVector out;
  for (int i = 0; i < stream::kArmDims; ++i) out.arm[i] = from.arm[i] + s * (to.arm[i] - from.arm[i]);
  out.pump = from.pump;
  return out;
}

std::pair<InterpolationPlan, ActionVector> ResumeInterpolate(const InterpolationPlan& plan,
                                                            double dt) {
  InterpolationPlan next = plan;
  next.elapsed = std::min(plan.duration, plan.elapsed + std::max(0.0, dt));
  return {next, next.Evaluate()};
}

ActionVector CommandTarget::Evaluate(double now) const {
  InterpolationPlan p{from, to, duration, now - start};
  return p.Evaluate();
}

void OperatorLimits::Validate() const {
  if (!(max_linear > 0.0) || !(max_angular > 0.0) || !(max_bend_rate > 0.0)) {
    throw ValidationError("operator limits must be positive");
  }
}

void SessionConfig::Validate() const {
  if (!(interpolation_duration > 0.0) || !std::isfinite(interpolation_duration)) {
    throw ValidationError("interpolation duration must be positive");
  }
  if (episode_prefix.empty()) throw ValidationError("episode prefix must not be empty");
  if (first_episode_number < 0) throw ValidationError("episode number must be non-negative");
  limits.Validate();
}

Session::Session(SessionConfig config)
    : config_(std::move(config)), next_episode_(config_.first_episode_number) {
  config_.Validate();
}

TeleopCommand Session::ClampToLimits(const TeleopCommand& cmd) const {
  TeleopCommand out = cmd;
  const OperatorLimits& l = config_.limits;
  for (int i = 0; i < 6; ++i) {
    const double m = i < 3 ? l.max_linear : l.max_angular;
    out.twist[i] = std::isfinite(cmd.twist[i]) ? std::clamp(cmd.twist[i], -m, m) : 0.0;
  }
  out.bend_rate = std::isfinite(cmd.bend_rate)
                      ? std::clamp(cmd.bend_rate, -l.max_bend_rate, l.max_bend_rate)
                      : 0.0;
  return out;
}

std::string Session::NextEpisodeId() {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "-%04d", next_episode_++);
  return config_.episode_prefix + buf;
}

Effect Session::Apply(Button b, const TeleopCommand& cmd, double now) {
  Effect e;
  if (b == Button::kEStop) {
    e.estop = true;
    e.phase_changed = phase_ != Phase::kEStopped;
    if (episode_id_) e.ended_episode = std::exchange(episode_id_, std::nullopt);
    phase_ = Phase::kEStopped;
    held_.reset();
    return e;
  }
  if (phase_ == Phase::kEStopped) {
    return Reject("estopped", "session is emergency stopped; reconnect after reset");
  }
  switch (b) {
    case Button::kStop:
      if (!IsLive(phase_) && phase_ != Phase::kPaused) return InvalidTransition(b, phase_);
      if (episode_id_) e.ended_episode = std::exchange(episode_id_, std::nullopt);
      phase_ = Phase::kStopped;
      held_.reset();
      break;
    case Button::kPause:
      if (!IsLive(phase_)) return InvalidTransition(b, phase_);
      phase_ = Phase::kPaused;
      held_.reset();
      break;
    case Button::kEndEpisode:
      if (!episode_id_) return InvalidTransition(b, phase_);
      e.ended_episode = std::exchange(episode_id_, std::nullopt);
      if (phase_ == Phase::kRecording) phase_ = Phase::kLive;
      break;
    case Button::kMarkRetry:
      if (!episode_id_) return InvalidTransition(b, phase_);
      e.mark_retry = true;
      return e;
    case Button::kResume: {
      if (IsLive(phase_)) return InvalidTransition(b, phase_);
      phase_ = episode_id_ ? Phase::kRecording : Phase::kLive;
      const TeleopCommand c = ClampToLimits(cmd);
      held_ = c;
      target_ = CommandTarget{ActionVector::Zero(), c.ToAction(), now,
                              config_.interpolation_duration, target_.frame_seq};
      break;
    }
    case Button::kStartEpisode:
      if (phase_ != Phase::kLive) return InvalidTransition(b, phase_);
      episode_id_ = NextEpisodeId();
      e.started_episode = episode_id_;
      phase_ = Phase::kRecording;
      break;
    case Button::kEStop:
      break;
  }
  e.phase_changed = true;
  return e;
}

Effect Session::HandleCommand(const TeleopCommand& cmd, double now, std::uint64_t frame_seq) {
  Session next = *this;
  Effect total;
  for (Button b : kButtons) {
    if (!cmd.Has(b)) continue;
    Effect e = next.Apply(b, cmd, now);
    if (!e.accepted) return e;
    Merge(total, e);
  }
  const bool resumed = cmd.Has(Button::kResume);
  if (!IsLive(next.phase_)) {
    next.target_ = CommandTarget{ActionVector::Zero(), ActionVector::Zero(), now, 0.0,
                                 total.phase_changed ? frame_seq : next.target_.frame_seq};
  } else if (!resumed) {
    const TeleopCommand c = next.ClampToLimits(cmd);
    next.held_ = c;
    if (next.target_.duration > 0.0 && now < next.target_.start + next.target_.duration) {
      next.target_.to = c.ToAction();
    } else {
      next.target_ = CommandTarget{c.ToAction(), c.ToAction(), now, 0.0, frame_seq};
    }
    next.target_.frame_seq = frame_seq;
  } else {
    next.target_.frame_seq = frame_seq;
  }
  *this = std::move(next);
  return total;
}

Effect Session::Disconnect(double now) {
  Effect e;
  if (IsLive(phase_)) {
    phase_ = Phase::kPaused;
    e.phase_changed = true;
  }
  held_.reset();
  target_ = CommandTarget{ActionVector::Zero(), ActionVector::Zero(), now, 0.0, target_.frame_seq};
  return e;
}

SessionState Session::StateAt(double now) const {
  SessionState s;
  s.phase = phase_;
  s.episode_id = episode_id_;
  s.held_target = held_;
  if (IsLive(phase_) && target_.duration > 0.0 && now < target_.start + target_.duration) {
    s.interpolation = InterpolationPlan{target_.from, target_.to, target_.duration,
                                        std::max(0.0, now - target_.start)};
  }
  return s;
}

}  // namespace harvest::teleop
