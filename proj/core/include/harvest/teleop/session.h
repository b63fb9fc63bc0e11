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


#ifndef HARVEST_TELEOP_SESSION_H_
#define HARVEST_TELEOP_SESSION_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "harvest/stream/action.h"

namespace harvest::teleop {

using stream::ActionVector;
using stream::PumpState;

enum class Phase { kIdle, kLive, kRecording, kPaused, kStopped, kEStopped };

std::string_view PhaseName(Phase p);
std::optional<Phase> ParsePhase(std::string_view s);

// Live or Recording: the only phases whose output may be nonzero.
bool IsLive(Phase p);

// Canonical button set. Several buttons in one frame are applied in this
// order, all or nothing.
enum class Button { kEStop, kStop, kPause, kEndEpisode, kMarkRetry, kResume, kStartEpisode };

inline constexpr int kNumButtons = 7;

std::string_view ButtonName(Button b);
std::optional<Button> ParseButton(std::string_view s);

struct TeleopCommand {
  std::array<double, 6> twist{};
  double bend_rate = 0.0;
  PumpState pump = PumpState::kIdle;
  std::vector<Button> buttons;

  ActionVector ToAction() const;
  bool Has(Button b) const;
};

// Linear ramp between two commands. The pump keeps the `from` value until the
// ramp completes.
struct InterpolationPlan {
  ActionVector from;
  ActionVector to;
  double duration = 1.0;
  double elapsed = 0.0;

  bool Done() const { return elapsed >= duration; }
  ActionVector Evaluate() const;
};

// Advances the plan by dt (capped at its duration) and returns the command at
// the new elapsed time.
std::pair<InterpolationPlan, ActionVector> ResumeInterpolate(const InterpolationPlan& plan,
                                                            double dt);

// What the runtime executes until the gateway writes again: a ramp anchored
// at `start`, or a constant once the ramp is over (or when duration is 0).
struct CommandTarget {
  ActionVector from;
  ActionVector to;
  double start = 0.0;
  double duration = 0.0;
  std::uint64_t frame_seq = 0;  // frame that produced this target, 0 = none

  ActionVector Evaluate(double now) const;
  bool operator==(const CommandTarget&) const = default;
};

struct OperatorLimits {
  double max_linear = 0.15;   // m/s per axis
  double max_angular = 1.0;   // rad/s per axis
  double max_bend_rate = 1.0;

  void Validate() const;
};

struct SessionConfig {
  double interpolation_duration = 1.0;
  OperatorLimits limits;
  std::string episode_prefix = "teleop";
  int first_episode_number = 1;

  void Validate() const;
};

struct SessionState {
  Phase phase = Phase::kIdle;
  std::optional<std::string> episode_id;
  std::optional<TeleopCommand> held_target;
  std::optional<InterpolationPlan> interpolation;
};

struct Effect {
  bool accepted = true;
  std::string error_code;  // set when rejected
  std::string message;
  bool phase_changed = false;
  bool estop = false;
  std::optional<std::string> started_episode;
  std::optional<std::string> ended_episode;
  bool mark_retry = false;
};

// Operator session state machine. Not thread safe; the gateway owns it.
class Session {
 public:
  explicit Session(SessionConfig config = {});

  // Applies buttons, then forwards the motion fields when live. A rejected
  // frame leaves the session untouched.
  Effect HandleCommand(const TeleopCommand& cmd, double now, std::uint64_t frame_seq = 0);

  // Connection loss. Live phases fall back to Paused.
  Effect Disconnect(double now);

  // State with the interpolation elapsed time brought up to `now`.
  SessionState StateAt(double now) const;
  Phase phase() const { return phase_; }
  const std::optional<std::string>& episode_id() const { return episode_id_; }

  CommandTarget Target() const { return target_; }
  ActionVector Output(double now) const { return target_.Evaluate(now); }

  // Twist, bend rate clipped to the operator limits.
  TeleopCommand ClampToLimits(const TeleopCommand& cmd) const;

 private:
  Effect Apply(Button b, const TeleopCommand& cmd, double now);
  std::string NextEpisodeId();

  SessionConfig config_;
  Phase phase_ = Phase::kIdle;
  std::optional<std::string> episode_id_;
  std::optional<TeleopCommand> held_;
  CommandTarget target_;
  int next_episode_ = 1;
};

}  // namespace harvest::teleop

#endif  // HARVEST_TELEOP_SESSION_H_
