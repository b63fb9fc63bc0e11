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


#include "harvest/teleop/teleop_runtime.h"

#include <algorithm>
#include <thread>
#include <utility>

#include "harvest/common/error.h"
#include "harvest/runtime/timing.h"
#include "harvest/store/json_codec.h"

namespace harvest::teleop {

namespace {

constexpr std::size_t kAuditCapacity = 1 << 16;

bool Nonzero(const stream::ActionVector& a) {
  return std::any_of(a.arm.begin(), a.arm.end(), [](double v) { return v != 0.0; }) ||
         a.pump != stream::PumpState::kIdle;
}

}  // namespace

CellValue TargetCell::Read() const {
  std::lock_guard lock(mu_);
  return value_;
}

void TargetCell::Write(const CellValue& v) {
  std::lock_guard lock(mu_);
  value_ = v;
}

void TeleopRuntimeConfig::Validate() const {
  control.Validate();
  sim.Validate();
}

TeleopRuntime::TeleopRuntime(TeleopRuntimeConfig config)
    : config_(std::move(config)), origin_(std::chrono::steady_clock::now()) {
  config_.Validate();
  ResetPlant(0);
}

TeleopRuntime::~TeleopRuntime() {
  try {
    Close();
  } catch (...) {
  }
}

sim::PlantScene TeleopRuntime::MakeScene(std::uint64_t n) const {
  if (config_.single_fruit) return sim::SingleFruitScene(config_.scene, *config_.single_fruit);
  return sim::GenerateScene(config_.scene, config_.seed + n);
}

nlohmann::json TeleopRuntime::RunConfigJson() const {
  nlohmann::json scene = store::ToJson(config_.scene);
  scene["kind"] = config_.single_fruit ? "single_fruit" : "generated";
  if (config_.single_fruit) scene["fruit_position"] = store::ToJson(*config_.single_fruit);
  return {{"scene", scene},
          {"sim", store::ToJson(config_.sim)},
          {"control", store::ToJson(config_.control)},
          {"prompt", config_.prompt}};
}

void TeleopRuntime::ResetPlant(std::uint64_t n) {
  plant_seed_ = config_.seed + n;
  sim::PlantScene scene = MakeScene(n);
  env_ = std::make_unique<sim::GreenhouseEnv>(scene, config_.sim, policy::ViewConfig::AllViews(),
                                              plant_seed_, config_.prompt);
  plant_first_tick_ = tick_;
  const bool estop = limits_.estop;
  limits_ = runtime::SafetyLimits::Default(scene.workspace);
  limits_.estop = estop;
  std::lock_guard lock(pub_mu_);
  scene_ = std::move(scene);
  ++scene_revision_;
}

double TeleopRuntime::LocalTime(std::size_t k) const {
  return static_cast<double>(k - plant_first_tick_) * period();
}

double TeleopRuntime::Now() const {
  if (config_.control.clock == runtime::ClockMode::kVirtual) {
    return static_cast<double>(ticks_done_.load()) * period();
  }
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - origin_).count();
}

void TeleopRuntime::Finalize(std::optional<std::string> fault) {
  if (!recording_) return;
  Recording rec = std::move(*recording_);
  recording_.reset();

  store::EpisodeRecord record;
  store::EpisodeManifest& m = record.manifest;
  m.id = rec.id;
  m.seed = rec.seed;
  m.source = "teleop";
  m.prompt = config_.prompt;
  m.config = RunConfigJson();
  m.config["seed"] = rec.seed;
  m.config_digest = store::ConfigDigest(m.config);
  m.scene = MakeScene(rec.seed - config_.seed);
  m.tags = m.scene.tags;
  const sim::Simulator& s = env_->simulator();
  m.start_time = 0.0;
  m.end_time = static_cast<double>(rec.log.ticks.size()) * period();
  m.tick_count = rec.log.ticks.size();
  m.fault = std::move(fault);
  m.success = !m.fault && s.Succeeded();
  m.retries = s.retries();
  m.attempts = s.attempts();
  for (const sim::Fruit& f : s.scene().fruits) {
    m.fruits.push_back({f.id, f.IsRipe(), f.severity, f.location});
  }
  if (!rec.log.ticks.empty()) m.timing = runtime::ComputeTimingReport(rec.log);
  record.actions = std::move(rec.log.actions);
  record.states = std::move(rec.log.states);
  record.events = std::move(rec.log.events);
  record.ticks = std::move(rec.log.ticks);

  std::optional<std::filesystem::path> dir;
  if (!config_.store_root.empty()) dir = store::WriteEpisode(config_.store_root, record);
  std::lock_guard lock(pub_mu_);
  if (dir) written_.push_back(*dir);
  records_.push_back(std::move(record));
}

void TeleopRuntime::Close() { Finalize(limits_.estop ? std::optional<std::string>("estop") : std::nullopt); }

void TeleopRuntime::Tick() {
  const std::size_t k = tick_;
  const double period_s = period();
  const double scheduled = static_cast<double>(k) * period_s;
  const CellValue cell = cell_.Read();

  if (estop_flag_.load() && !limits_.estop) {
    limits_.estop = true;
    for (const sim::SimEvent& e : env_->OnEStop(LocalTime(k))) {
      if (recording_) recording_->log.events.push_back(e);
    }
  }

  if (cell.episode.generation != seen_.generation) {
    Finalize(limits_.estop ? std::optional<std::string>("estop") : std::nullopt);
    if (cell.episode.id) {
      ResetPlant(++episodes_opened_);
      Recording rec;
      rec.id = *cell.episode.id;
      rec.seed = plant_seed_;
      rec.first_tick = k;
      rec.log.mode = config_.control.mode;
      rec.log.period = period_s;
      recording_ = std::move(rec);
    }
    seen_.generation = cell.episode.generation;
    seen_.id = cell.episode.id;
  }
  const double local = LocalTime(k);
  if (cell.episode.retry_marks > seen_.retry_marks) {
    if (recording_) {
      for (const sim::SimEvent& e : env_->simulator().MarkRetry(local)) {
        recording_->log.events.push_back(e);
      }
    }
    seen_.retry_marks = cell.episode.retry_marks;
  }

  const stream::ActionVector raw =
      limits_.estop ? stream::ActionVector::Zero() : cell.target.Evaluate(scheduled);
  const stream::ActionVector action =
      runtime::ClampAction(raw, env_->State(), limits_, period_s);
  const double dispatched = std::max(Now(), scheduled);
  if (recording_) {
    runtime::TickStats st;
    st.index = k - recording_->first_tick;
    st.scheduled = local;
    st.dispatched = local + (dispatched - scheduled);
    st.source = limits_.estop ? runtime::ActionSource::kZero : runtime::ActionSource::kOperator;
    st.clamped = !(action == raw);
    if (st.clamped) ++recording_->log.clamp_count;
    recording_->log.ticks.push_back(st);
    recording_->log.states.push_back({local, sim::ToStateVector(env_->State())});
    recording_->log.actions.push_back({local, action});
  }
  std::vector<sim::SimEvent> events = env_->Step(action, local, period_s);
  if (recording_) {
    for (const sim::SimEvent& e : events) recording_->log.events.push_back(e);
  }

  Telemetry t;
  t.time = Now();
  t.tick = k;
  t.ee = env_->State();
  t.command = action;
  const auto& attempts = env_->simulator().attempts();
  if (!attempts.empty()) t.stage_flags = attempts.back().flags;
  for (const sim::Fruit& f : env_->simulator().scene().fruits) {
    t.fruits.push_back({f.id, f.position, f.IsRipe(), f.location, f.severity});
  }
  t.estop = limits_.estop;
  {
    std::lock_guard lock(pub_mu_);
    t.scene_revision = scene_revision_;
    telemetry_ = std::move(t);
    audit_.push_back({k, cell.target.frame_seq, Nonzero(action)});
    if (audit_.size() > kAuditCapacity) audit_.pop_front();
  }
  ++tick_;
  ticks_done_.store(tick_);
}

void TeleopRuntime::Run(std::stop_token stop) {
  const auto period_d = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
      std::chrono::duration<double>(period()));
  while (!stop.stop_requested()) {
    const auto due = origin_ + period_d * static_cast<long long>(tick_);
    if (config_.control.clock == runtime::ClockMode::kWallClock) std::this_thread::sleep_until(due);
    Tick();
  }
  Close();
}

Telemetry TeleopRuntime::Snapshot() const {
  std::lock_guard lock(pub_mu_);
  return telemetry_;
}

sim::PlantScene TeleopRuntime::Scene() const {
  std::lock_guard lock(pub_mu_);
  return scene_;
}

std::uint64_t TeleopRuntime::scene_revision() const {
  std::lock_guard lock(pub_mu_);
  return scene_revision_;
}

ServerHello TeleopRuntime::Hello(const SessionConfig& session) const {
  ServerHello h;
  h.control_hz = config_.control.frequency;
  {
    std::lock_guard lock(pub_mu_);
    h.workspace = scene_.workspace;
  }
  h.interpolation_duration = session.interpolation_duration;
  h.limits = session.limits;
  return h;
}

std::vector<store::EpisodeRecord> TeleopRuntime::records() const {
  std::lock_guard lock(pub_mu_);
  return records_;
}

std::vector<std::filesystem::path> TeleopRuntime::written() const {
  std::lock_guard lock(pub_mu_);
  return written_;
}

std::vector<TickAudit> TeleopRuntime::audit() const {
  std::lock_guard lock(pub_mu_);
  return {audit_.begin(), audit_.end()};
}

}  // namespace harvest::teleop
