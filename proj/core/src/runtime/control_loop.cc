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

#include "harvest/runtime/control_loop.h"

#include <algorithm>
#include <exception>
#include <utility>

#include "harvest/common/error.h"

namespace harvest::runtime {

using stream::ActionVector;

namespace {

constexpr double kTimeEps = 1e-9;

stream::QueueConfig MakeQueueConfig(const ControlConfig& config, std::size_t chunk_length) {
  stream::QueueConfig q;
  q.chunk_length = chunk_length;
  // A threshold above H would never let a chunk satisfy the queue.
  q.refill_threshold = std::min(config.refill_threshold, chunk_length);
  q.capacity = std::max(config.capacity, chunk_length);
  q.period = config.period();
  q.alpha = config.alpha;
  q.blend_mode = config.blend_mode;
  return q;
}

// Shared per-tick bookkeeping for both modes.
class Recorder {
 public:
  Recorder(ControlledPlant& plant, const ControlConfig& config, const SafetyLimits& limits,
           const RuntimeHooks& hooks, EpisodeLog& log)
      : plant_(plant), config_(config), limits_(limits), hooks_(hooks), log_(log) {
    log_.mode = config.mode;
    log_.period = config.period();
  }

  double TickTime(std::size_t k) const { return static_cast<double>(k) * config_.period(); }

  TickControls BeforeTick(std::size_t k) {
    TickControls c;
    if (hooks_.before_tick) hooks_.before_tick(k, TickTime(k), c);
    if (c.raise_estop) LatchEStop(k, std::nullopt);
    return c;
  }

  void LatchEStop(std::size_t k, std::optional<std::string> fault) {
    if (fault && !log_.fault) log_.fault = std::move(fault);
    if (limits_.estop) return;
    limits_.estop = true;
    log_.estop_tick = k;
    for (auto& e : plant_.OnEStop(TickTime(k))) log_.events.push_back(e);
  }

  bool estopped() const { return limits_.estop; }

  // Clamps, steps the plant and logs the tick.
  void Execute(std::size_t k, double dispatched, const ActionVector& raw, ActionSource source,
               bool in_flight) {
    const double t = TickTime(k);
    const ActionVector action = ClampAction(raw, plant_.State(), limits_, config_.period());
    TickStats s;
    s.index = k;
    s.scheduled = t;
    s.dispatched = std::max(dispatched, t);
    s.source = limits_.estop ? ActionSource::kZero : source;
    s.inference_in_flight = in_flight;
    s.clamped = !(action == raw);
    if (s.clamped) ++log_.clamp_count;
    log_.states.push_back({t, sim::ToStateVector(plant_.State())});
    log_.ticks.push_back(s);
    log_.actions.push_back({t, action});
    for (auto& e : plant_.Step(action, t, config_.period())) log_.events.push_back(e);
  }

 private:
  ControlledPlant& plant_;
  const ControlConfig& config_;
  SafetyLimits limits_;
  const RuntimeHooks& hooks_;
  EpisodeLog& log_;
};

}  // namespace

ActionVector HoldPolicyOnStarvation(const ActionVector& last, StarvationMode mode) {
  ActionVector out;
  if (mode == StarvationMode::kHoldLast) out.arm = last.arm;
  out.pump = stream::PumpState::kIdle;
  return out;
}

InferenceWorker::InferenceWorker(policy::Policy& policy, stream::ActionQueue& queue,
                                 ClockMode clock, std::chrono::steady_clock::time_point origin)
    : policy_(policy), queue_(queue), clock_(clock), origin_(origin) {
  thread_ = std::thread([this] { Loop(); });
}

InferenceWorker::~InferenceWorker() {
  {
    std::lock_guard lock(mu_);
    stop_ = true;
  }
  cv_.notify_all();
  thread_.join();
}

double InferenceWorker::WallNow() const {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - origin_).count();
}

bool InferenceWorker::Request(policy::Observation obs, double request_time, bool must_go) {
  {
    std::lock_guard lock(mu_);
    if (phase_ != Phase::kIdle || fault_) return false;
    obs_ = std::move(obs);
    request_time_ = request_time;
    must_go_ = must_go;
    phase_ = Phase::kComputing;
  }
  cv_.notify_all();
  return true;
}

bool InferenceWorker::Busy() const {
  std::lock_guard lock(mu_);
  return phase_ != Phase::kIdle;
}

void InferenceWorker::SyncTo(double now) {
  if (clock_ != ClockMode::kVirtual) return;
  std::unique_lock lock(mu_);
  cv_.wait(lock, [&] { return phase_ != Phase::kComputing || fault_; });
  if (phase_ != Phase::kAwaitingDelivery || result_->ready_time > now + kTimeEps) return;
  deliver_ = true;
  cv_.notify_all();
  cv_.wait(lock, [&] { return phase_ == Phase::kIdle || fault_; });
}

void InferenceWorker::NoteDispatched(double tick_time) {
  std::lock_guard lock(mu_);
  last_dispatched_ = tick_time;
}

std::optional<std::string> InferenceWorker::fault() const {
  std::lock_guard lock(mu_);
  return fault_;
}

std::vector<InferenceRecord> InferenceWorker::TakeRecords() {
  std::lock_guard lock(mu_);
  return std::exchange(records_, {});
}

// Called with mu_ held.
void InferenceWorker::Deliver(const policy::InferenceResult& result, double enqueue_now) {
  double now = enqueue_now;
  // Entries at or before the last executed tick are already in the past.
  if (last_dispatched_) now = std::max(now, *last_dispatched_ + 0.5 * result.chunk.period);
  const stream::EnqueueResult r = queue_.EnqueueChunk(result.chunk, now);
  InferenceRecord rec;
  rec.request_time = request_time_;
  rec.ready_time = result.ready_time;
  rec.must_go = must_go_;
  rec.chunk_size = result.chunk.actions.size();
  rec.stale_dropped = r.stale_dropped;
  rec.blended = r.blended;
  rec.appended = r.appended;
  rec.all_stale = r.all_stale;
  records_.push_back(rec);
}

void InferenceWorker::Loop() {
  std::unique_lock lock(mu_);
  while (true) {
    cv_.wait(lock, [&] { return stop_ || phase_ == Phase::kComputing; });
    if (stop_) return;
    policy::Observation obs = std::move(*obs_);
    obs_.reset();
    const double request_time = request_time_;
    lock.unlock();
    std::optional<policy::InferenceResult> result;
    std::string error;
    try {
      result = policy_.Infer(obs, request_time);
    } catch (const std::exception& e) {
      error = e.what();
    } catch (...) {
      error = "unknown inference failure";
    }
    lock.lock();
    if (!result) {
      fault_ = "inference failed: " + error;
      phase_ = Phase::kIdle;
      cv_.notify_all();
      return;
    }
    if (clock_ == ClockMode::kWallClock) {
      const auto due = origin_ + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                     std::chrono::duration<double>(result->ready_time));
      cv_.wait_until(lock, due, [&] { return stop_; });
      if (stop_) return;
      Deliver(*result, std::max(WallNow(), result->ready_time));
    } else {
      result_ = std::move(result);
      phase_ = Phase::kAwaitingDelivery;
      cv_.notify_all();
      cv_.wait(lock, [&] { return stop_ || deliver_; });
      if (stop_) return;
      deliver_ = false;
      Deliver(*result_, result_->ready_time);
      result_.reset();
    }
    phase_ = Phase::kIdle;
    cv_.notify_all();
  }
}

namespace {

void WaitForTick(const ControlConfig& config, std::chrono::steady_clock::time_point origin,
                 double t) {
  if (config.clock != ClockMode::kWallClock) return;
  std::this_thread::sleep_until(origin + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                             std::chrono::duration<double>(t)));
}

double Elapsed(const ControlConfig& config, std::chrono::steady_clock::time_point origin,
               double t) {
  if (config.clock != ClockMode::kWallClock) return t;
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - origin).count();
}

}  // namespace

EpisodeLog RunSync(ControlledPlant& plant, policy::Policy& policy, const ControlConfig& config,
                   const SafetyLimits& limits, const RuntimeHooks& hooks) {
  config.Validate();
  limits.Validate();
  EpisodeLog log;
  Recorder rec(plant, config, limits, hooks, log);
  stream::ActionQueue queue(MakeQueueConfig(config, policy.chunk_length()));
  const auto origin = std::chrono::steady_clock::now();
  std::optional<policy::InferenceResult> pending;
  double pending_request = 0.0;
  ActionVector last;

  for (std::size_t k = 0; k < config.MaxTicks(); ++k) {
    if (plant.Finished()) break;
    const double t = rec.TickTime(k);
    if (rec.BeforeTick(k).clear_queue) queue.Clear();
    WaitForTick(config, origin, t);

    // Serial loop: observe and infer only once the previous chunk is spent.
    if (!pending && queue.empty() && !rec.estopped()) {
      pending = policy.Infer(plant.Observe(t), t);
      pending_request = t;
    }
    if (pending && pending->ready_time <= t + kTimeEps) {
      const stream::EnqueueResult r = queue.EnqueueChunk(pending->chunk, pending->ready_time);
      InferenceRecord ir;
      ir.request_time = pending_request;
      ir.ready_time = pending->ready_time;
      ir.chunk_size = pending->chunk.actions.size();
      ir.stale_dropped = r.stale_dropped;
      ir.appended = r.appended;
      ir.all_stale = r.all_stale;
      log.inferences.push_back(ir);
      pending.reset();
    }

    ActionVector action;
    ActionSource source = ActionSource::kHold;
    if (auto due = queue.PopDue(t)) {
      action = due->action;
      source = ActionSource::kQueue;
    } else if (pending) {
      // Blocked on inference: no new command goes out, so the pump stays put.
      action = HoldPolicyOnStarvation(last, config.starvation);
      action.pump = last.pump;
    } else {
      action = HoldPolicyOnStarvation(last, config.starvation);
    }
    rec.Execute(k, Elapsed(config, origin, t), action, source, pending.has_value());
    last = action;
  }
  return log;
}

EpisodeLog RunAsync(ControlledPlant& plant, policy::Policy& policy, const ControlConfig& config,
                    const SafetyLimits& limits, const RuntimeHooks& hooks) {
  config.Validate();
  limits.Validate();
  EpisodeLog log;
  Recorder rec(plant, config, limits, hooks, log);
  stream::ActionQueue queue(MakeQueueConfig(config, policy.chunk_length()));
  const auto origin = std::chrono::steady_clock::now();
  ActionVector last;
  // Depletion before the first chunk lands is warm-up, not a must-go.
  bool primed = false;
  {
    InferenceWorker worker(policy, queue, config.clock, origin);
    for (std::size_t k = 0; k < config.MaxTicks(); ++k) {
      if (plant.Finished()) break;
      const double t = rec.TickTime(k);
      if (rec.BeforeTick(k).clear_queue) queue.Clear();
      WaitForTick(config, origin, t);
      worker.SyncTo(t);
      if (auto fault = worker.fault()) rec.LatchEStop(k, *fault);

      std::optional<policy::Observation> obs;
      if (!rec.estopped()) {
        obs = plant.Observe(t);
        primed = primed || !queue.empty();
        if (queue.empty()) {
          bool must_go = false;
          if (primed) {
            if (auto ev = queue.RaiseMustGo(t)) {
              log.must_go.push_back(*ev);
              must_go = true;
            }
          }
          if (worker.Request(*obs, t, must_go)) worker.SyncTo(t);
          primed = primed || !queue.empty();
        }
      }

      ActionVector action;
      ActionSource source = ActionSource::kHold;
      if (auto due = queue.PopDue(t)) {
        action = due->action;
        source = ActionSource::kQueue;
      } else {
        action = HoldPolicyOnStarvation(last, config.starvation);
      }
      if (obs && queue.NeedsRefill()) worker.Request(std::move(*obs), t, false);
      rec.Execute(k, Elapsed(config, origin, t), action, source, worker.Busy());
      worker.NoteDispatched(t);
      last = action;
    }
    log.inferences = worker.TakeRecords();
  }
  return log;
}

EpisodeLog RunEpisode(ControlledPlant& plant, policy::Policy& policy, const ControlConfig& config,
                      const SafetyLimits& limits, const RuntimeHooks& hooks) {
  return config.mode == ControlMode::kSync ? RunSync(plant, policy, config, limits, hooks)
                                           : RunAsync(plant, policy, config, limits, hooks);
}

}  // namespace harvest::runtime
