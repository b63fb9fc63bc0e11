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

#ifndef HARVEST_RUNTIME_EPISODE_LOG_H_
#define HARVEST_RUNTIME_EPISODE_LOG_H_

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "harvest/runtime/config.h"
#include "harvest/sim/types.h"
#include "harvest/stream/action.h"
#include "harvest/stream/action_queue.h"

namespace harvest::runtime {

enum class ActionSource { kQueue, kHold, kZero, kOperator };

std::string_view ActionSourceName(ActionSource s);
std::optional<ActionSource> ParseActionSource(std::string_view s);

struct TickStats {
  std::size_t index = 0;
  double scheduled = 0.0;
  double dispatched = 0.0;
  ActionSource source = ActionSource::kQueue;
  bool inference_in_flight = false;
  bool clamped = false;

  bool operator==(const TickStats&) const = default;
};

struct InferenceRecord {
  double request_time = 0.0;
  double ready_time = 0.0;
  bool must_go = false;
  std::size_t chunk_size = 0;
  std::size_t stale_dropped = 0;
  std::size_t blended = 0;
  std::size_t appended = 0;
  bool all_stale = false;

  bool operator==(const InferenceRecord&) const = default;
};

struct StateSample {
  double timestamp = 0.0;
  std::array<double, sim::kStateDims> state{};

  bool operator==(const StateSample&) const = default;
};

// Everything the control context observed during one episode. Tick i
// executed actions[i] starting from states[i].
struct EpisodeLog {
  ControlMode mode = ControlMode::kAsync;
  double period = 1.0 / 30.0;
  std::vector<TickStats> ticks;
  std::vector<stream::TimedAction> actions;
  std::vector<StateSample> states;
  std::vector<sim::SimEvent> events;
  std::vector<InferenceRecord> inferences;
  std::vector<stream::MustGoEvent> must_go;
  std::optional<std::string> fault;
  std::optional<std::size_t> estop_tick;
  std::size_t clamp_count = 0;
};

}  // namespace harvest::runtime

#endif  // HARVEST_RUNTIME_EPISODE_LOG_H_
