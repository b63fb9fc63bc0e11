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

#ifndef HARVEST_STREAM_ACTION_QUEUE_H_
#define HARVEST_STREAM_ACTION_QUEUE_H_

#include <cstddef>
#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <vector>

#include "harvest/stream/action.h"

namespace harvest::stream {

struct QueueConfig {
  std::size_t chunk_length = 50;      // H
  std::size_t refill_threshold = 25;  // tau, refill when size < tau
  std::size_t capacity = 100;
  double period = 1.0 / 30.0;
  double alpha = 0.5;
  BlendMode blend_mode = BlendMode::kConstant;

  // Throws ValidationError unless 0 < tau <= H <= capacity, period > 0 and
  // alpha in [0, 1].
  void Validate() const;
};

struct EnqueueResult {
  std::size_t stale_dropped = 0;
  std::size_t blended = 0;
  std::size_t appended = 0;
  std::size_t truncated = 0;
  bool all_stale = false;  // nothing from the chunk was usable
};

struct MustGoEvent {
  double timestamp = 0.0;
  std::uint64_t sequence = 0;  // 1-based depletion counter
};

// Timed action queue shared by the control context (PopDue, RaiseMustGo) and
// the inference context (EnqueueChunk). Every public method takes the same
// lock, so the operations are linearizable; all of them are O(capacity).
class ActionQueue {
 public:
  explicit ActionQueue(QueueConfig config);

  ActionQueue(const ActionQueue&) = delete;
  ActionQueue& operator=(const ActionQueue&) = delete;

  // Drops chunk entries with timestamp < now, blends the overlap with the
  // queued tail, appends the rest and truncates to capacity (keeping the
  // earliest entries). An entirely stale chunk leaves the queue untouched.
  EnqueueResult EnqueueChunk(const ActionChunk& chunk, double now);

  // Removes and returns the earliest entry with timestamp <= now + period/2.
  std::optional<TimedAction> PopDue(double now);

  bool NeedsRefill() const;

  // Edge-triggered depletion signal: returns an event the first time it is
  // called on an empty queue, then nothing until the queue has been refilled
  // and has emptied again.
  std::optional<MustGoEvent> RaiseMustGo(double now);

  std::size_t size() const;
  bool empty() const;
  void Clear();
  std::vector<TimedAction> Snapshot() const;
  std::uint64_t must_go_count() const;
  const QueueConfig& config() const { return config_; }

 private:
  const QueueConfig config_;
  mutable std::mutex mu_;
  std::deque<TimedAction> entries_;
  bool depletion_latched_ = false;
  std::uint64_t must_go_count_ = 0;
};

}  // namespace harvest::stream

#endif  // HARVEST_STREAM_ACTION_QUEUE_H_
