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

#include "harvest/stream/action_queue.h"

#include <string>

#include "harvest/common/error.h"
#include "stream/blend_internal.h"

namespace harvest::stream {

void QueueConfig::Validate() const {
  if (refill_threshold == 0 || refill_threshold > chunk_length || chunk_length > capacity) {
    throw ValidationError("queue requires 0 < refill_threshold <= chunk_length <= capacity (got " +
                          std::to_string(refill_threshold) + ", " + std::to_string(chunk_length) +
                          ", " + std::to_string(capacity) + ")");
  }
  if (!(period > 0.0)) throw ValidationError("queue period must be positive");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("queue alpha must lie in [0, 1]");
}

ActionQueue::ActionQueue(QueueConfig config) : config_(config) { config_.Validate(); }

EnqueueResult ActionQueue::EnqueueChunk(const ActionChunk& chunk, double now) {
  std::vector<TimedAction> timed = ChunkToTimed(chunk);
  EnqueueResult result;
  std::vector<TimedAction> fresh;
  fresh.reserve(timed.size());
  for (const TimedAction& ta : timed) {
    if (ta.timestamp < now) {
      ++result.stale_dropped;
    } else {
      fresh.push_back(ta);
    }
  }
  if (fresh.empty()) {
    result.all_stale = true;
    return result;
  }

  std::lock_guard<std::mutex> lock(mu_);
  std::vector<TimedAction> old(entries_.begin(), entries_.end());
  BlendOutcome blend =
      BlendOverlapDetailed(old, fresh, config_.alpha, chunk.period, config_.blend_mode);
  result.blended = blend.matched;
  result.appended = fresh.size() - blend.matched;

  entries_.clear();
  for (const TimedAction& ta : blend.merged) {
    // Duplicate timestamps: the earlier-inserted entry wins.
    if (!entries_.empty() && !(ta.timestamp > entries_.back().timestamp)) continue;
    entries_.push_back(ta);
  }
  while (entries_.size() > config_.capacity) {
    entries_.pop_back();
    ++result.truncated;
  }
  if (!entries_.empty()) depletion_latched_ = false;
  return result;
}

std::optional<TimedAction> ActionQueue::PopDue(double now) {
  std::lock_guard<std::mutex> lock(mu_);
  if (entries_.empty() || entries_.front().timestamp > now + config_.period / 2.0) {
    return std::nullopt;
  }
  TimedAction out = entries_.front();
  entries_.pop_front();
  return out;
}

bool ActionQueue::NeedsRefill() const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_.size() < config_.refill_threshold;
}

std::optional<MustGoEvent> ActionQueue::RaiseMustGo(double now) {
  std::lock_guard<std::mutex> lock(mu_);
  if (!entries_.empty() || depletion_latched_) return std::nullopt;
  depletion_latched_ = true;
  ++must_go_count_;
  return MustGoEvent{now, must_go_count_};
}

std::size_t ActionQueue::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_.size();
}

bool ActionQueue::empty() const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_.empty();
}

void ActionQueue::Clear() {
  std::lock_guard<std::mutex> lock(mu_);
  entries_.clear();
}

std::vector<TimedAction> ActionQueue::Snapshot() const {
  std::lock_guard<std::mutex> lock(mu_);
  return {entries_.begin(), entries_.end()};
}

std::uint64_t ActionQueue::must_go_count() const {
  std::lock_guard<std::mutex> lock(mu_);
  return must_go_count_;
}

}  // namespace harvest::stream
