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

#ifndef HARVEST_RUNTIME_CONTROL_LOOP_H_
#define HARVEST_RUNTIME_CONTROL_LOOP_H_

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "harvest/policy/policy.h"
#include "harvest/runtime/config.h"
#include "harvest/runtime/episode_log.h"
#include "harvest/runtime/plant.h"
#include "harvest/runtime/safety.h"
#include "harvest/stream/action_queue.h"

namespace harvest::runtime {

// Per-tick levers for tests and operators. Called on the control context at
// the start of tick `index`, before anything is popped.
struct TickControls {
  bool clear_queue = false;
  bool raise_estop = false;
};

struct RuntimeHooks {
  std::function<void(std::size_t index, double now, TickControls&)> before_tick;
};

stream::ActionVector HoldPolicyOnStarvation(const stream::ActionVector& last, StarvationMode mode);

// Runs inference requests on a dedicated thread and enqueues the resulting
// chunks into the shared queue. Under the virtual clock a chunk is delivered
// when the control context calls SyncTo with a time at or past its ready
// time, which keeps runs bit-reproducible. Under the wall clock the worker
// sleeps until the ready time and enqueues on its own.
class InferenceWorker {
 public:
  InferenceWorker(policy::Policy& policy, stream::ActionQueue& queue, ClockMode clock,
                  std::chrono::steady_clock::time_point origin);
  ~InferenceWorker();
  InferenceWorker(const InferenceWorker&) = delete;
  InferenceWorker& operator=(const InferenceWorker&) = delete;

  // False if a request is already in flight or the worker has died.
  bool Request(policy::Observation obs, double request_time, bool must_go);
  bool Busy() const;
  void SyncTo(double now);
  void NoteDispatched(double tick_time);
  std::optional<std::string> fault() const;
  std::vector<InferenceRecord> TakeRecords();

 private:
  enum class Phase { kIdle, kComputing, kAwaitingDelivery };

  void Loop();
  void Deliver(const policy::InferenceResult& result, double enqueue_now);
  double WallNow() const;

  policy::Policy& policy_;
  stream::ActionQueue& queue_;
  const ClockMode clock_;
  const std::chrono::steady_clock::time_point origin_;

  mutable std::mutex mu_;
  std::condition_variable cv_;
  Phase phase_ = Phase::kIdle;
  bool stop_ = false;
  bool deliver_ = false;
  std::optional<policy::Observation> obs_;
  double request_time_ = 0.0;
  bool must_go_ = false;
  std::optional<policy::InferenceResult> result_;
  std::optional<double> last_dispatched_;
  std::optional<std::string> fault_;
  std::vector<InferenceRecord> records_;
  std::thread thread_;
};

EpisodeLog RunSync(ControlledPlant& plant, policy::Policy& policy, const ControlConfig& config,
                   const SafetyLimits& limits, const RuntimeHooks& hooks = {});
EpisodeLog RunAsync(ControlledPlant& plant, policy::Policy& policy, const ControlConfig& config,
                    const SafetyLimits& limits, const RuntimeHooks& hooks = {});
// Dispatches on config.mode.
EpisodeLog RunEpisode(ControlledPlant& plant, policy::Policy& policy, const ControlConfig& config,
                      const SafetyLimits& limits, const RuntimeHooks& hooks = {});

}  // namespace harvest::runtime

#endif  // HARVEST_RUNTIME_CONTROL_LOOP_H_
