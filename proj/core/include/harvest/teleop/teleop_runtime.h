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


#ifndef HARVEST_TELEOP_TELEOP_RUNTIME_H_
#define HARVEST_TELEOP_TELEOP_RUNTIME_H_

#include <atomic>
#include <chrono>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <stop_token>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "harvest/policy/perception.h"
#include "harvest/runtime/config.h"
#include "harvest/runtime/episode_log.h"
#include "harvest/runtime/safety.h"
#include "harvest/sim/greenhouse_env.h"
#include "harvest/sim/scene.h"
#include "harvest/store/record.h"
#include "harvest/teleop/protocol.h"
#include "harvest/teleop/session.h"

namespace harvest::teleop {

// Recording lifecycle as published by the gateway. A new generation with an
// id opens a fresh episode on a reset scene; a new generation without one
// closes the open episode.
struct EpisodeControl {
  std::uint64_t generation = 0;
  std::optional<std::string> id;
  std::uint64_t retry_marks = 0;

  bool operator==(const EpisodeControl&) const = default;
};

struct CellValue {
  CommandTarget target;
  EpisodeControl episode;
};

// The single writable cell between gateway and control loop. Both sides copy
// a few dozen bytes under the lock, so neither waits on the other for long.
class TargetCell {
 public:
  CellValue Read() const;
  void Write(const CellValue& v);

 private:
  mutable std::mutex mu_;
  CellValue value_;
};

struct TeleopRuntimeConfig {
  runtime::ControlConfig control;
  sim::SceneConfig scene;
  std::optional<Vec3> single_fruit;  // fixed single-fruit scene when set
  sim::SimConfig sim;
  std::uint64_t seed = 0;
  std::string prompt = std::string(policy::kDefaultPrompt);
  std::filesystem::path store_root;  // empty: keep records in memory only

  void Validate() const;
};

struct TickAudit {
  std::uint64_t tick = 0;
  std::uint64_t frame_seq = 0;
  bool nonzero = false;
};

// Control loop in teleop mode: the action source is the operator target cell
// instead of a policy. Owns the simulated plant and the episode recorder.
class TeleopRuntime {
 public:
  explicit TeleopRuntime(TeleopRuntimeConfig config);
  ~TeleopRuntime();
  TeleopRuntime(const TeleopRuntime&) = delete;
  TeleopRuntime& operator=(const TeleopRuntime&) = delete;

  TargetCell& cell() { return cell_; }
  void RaiseEStop() { estop_flag_.store(true); }
  bool estop_raised() const { return estop_flag_.load(); }

  // Runtime clock in seconds: ticks * period under the virtual clock,
  // elapsed steady time under the wall clock.
  double Now() const;
  double period() const { return config_.control.period(); }

  // Executes one control tick.
  void Tick();
  // Ticks at the control frequency until stopped (wall clock).
  void Run(std::stop_token stop);
  // Writes any open recording.
  void Close();

  Telemetry Snapshot() const;
  sim::PlantScene Scene() const;
  std::uint64_t scene_revision() const;
  ServerHello Hello(const SessionConfig& session) const;

  std::vector<store::EpisodeRecord> records() const;
  std::vector<std::filesystem::path> written() const;
  std::vector<TickAudit> audit() const;

  // Scene used for episode number n.
  sim::PlantScene MakeScene(std::uint64_t n) const;
  nlohmann::json RunConfigJson() const;

 private:
  struct Recording {
    std::string id;
    std::uint64_t seed = 0;
    std::size_t first_tick = 0;
    runtime::EpisodeLog log;
  };

  void ResetPlant(std::uint64_t n);
  void Finalize(std::optional<std::string> fault);
  double LocalTime(std::size_t k) const;

  const TeleopRuntimeConfig config_;
  const std::chrono::steady_clock::time_point origin_;
  TargetCell cell_;
  std::atomic<bool> estop_flag_{false};

  // Control-context state.
  std::size_t tick_ = 0;
  std::size_t plant_first_tick_ = 0;
  std::uint64_t plant_seed_ = 0;
  std::uint64_t episodes_opened_ = 0;
  std::unique_ptr<sim::GreenhouseEnv> env_;
  runtime::SafetyLimits limits_;
  EpisodeControl seen_;
  std::optional<Recording> recording_;

  mutable std::mutex pub_mu_;  // guards everything below
  Telemetry telemetry_;
  sim::PlantScene scene_;
  std::uint64_t scene_revision_ = 0;
  std::vector<store::EpisodeRecord> records_;
  std::vector<std::filesystem::path> written_;
  std::deque<TickAudit> audit_;
  std::atomic<std::size_t> ticks_done_{0};
};

}  // namespace harvest::teleop

#endif  // HARVEST_TELEOP_TELEOP_RUNTIME_H_
