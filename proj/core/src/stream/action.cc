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

#include "harvest/stream/action.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "harvest/common/error.h"
#include "stream/blend_internal.h"

namespace harvest::stream {

std::string_view PumpName(PumpState pump) {
  switch (pump) {
    case PumpState::kIn:
      return "in";
    case PumpState::kOut:
      return "out";
    case PumpState::kIdle:
      return "idle";
  }
  return "idle";
}

std::optional<PumpState> ParsePump(std::string_view name) {
  if (name == "in") return PumpState::kIn;
  if (name == "out") return PumpState::kOut;
  if (name == "idle") return PumpState::kIdle;
  return std::nullopt;
}

bool ActionVector::IsFinite() const {
  return std::all_of(arm.begin(), arm.end(), [](double v) { return std::isfinite(v); });
}

void ValidateChunk(const ActionChunk& chunk) {
  if (!(chunk.period > 0.0) || !std::isfinite(chunk.period)) {
    throw ValidationError("action chunk period must be positive, got " +
                          std::to_string(chunk.period));
  }
  if (chunk.actions.empty()) throw ValidationError("action chunk is empty");
  if (!std::isfinite(chunk.start_timestamp) || chunk.start_timestamp < 0.0) {
    throw ValidationError("action chunk start timestamp must be finite and >= 0");
  }
  for (const ActionVector& a : chunk.actions) {
    if (!a.IsFinite()) throw ValidationError("action chunk holds a non-finite arm command");
  }
}

std::vector<TimedAction> ChunkToTimed(const ActionChunk& chunk) {
  ValidateChunk(chunk);
  std::vector<TimedAction> out;
  out.reserve(chunk.actions.size());
  for (std::size_t i = 0; i < chunk.actions.size(); ++i) {
    out.push_back({chunk.start_timestamp + static_cast<double>(i) * chunk.period,
                   chunk.actions[i]});
  }
  return out;
}

ArmCommand MixArm(const ArmCommand& old_arm, const ArmCommand& new_arm, double alpha) {
  ArmCommand out;
  for (int k = 0; k < kArmDims; ++k) {
    const double v = alpha * old_arm[k] + (1.0 - alpha) * new_arm[k];
    // Rounding may push the sum one ulp outside the segment; pin it back.
    out[k] = std::clamp(v, std::min(old_arm[k], new_arm[k]), std::max(old_arm[k], new_arm[k]));
  }
  return out;
}

namespace {

void CheckIncreasing(std::span<const TimedAction> seq, const char* name) {
  for (std::size_t i = 1; i < seq.size(); ++i) {
    if (!(seq[i].timestamp > seq[i - 1].timestamp)) {
      throw ValidationError(std::string(name) + " timestamps are not strictly increasing");
    }
  }
}

}  // namespace

BlendOutcome BlendOverlapDetailed(std::span<const TimedAction> old_tail,
                                  std::span<const TimedAction> fresh, double alpha,
                                  double period, BlendMode mode) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ValidationError("blend alpha must lie in [0, 1], got " + std::to_string(alpha));
  }
  if (!(period > 0.0)) throw ValidationError("blend period must be positive");
  CheckIncreasing(old_tail, "old");
  CheckIncreasing(fresh, "new");

  BlendOutcome result;
  if (fresh.empty()) {
    result.merged.assign(old_tail.begin(), old_tail.end());
    return result;
  }

  const double half = period / 2.0;
  std::vector<std::optional<std::size_t>> match(fresh.size());
  std::vector<bool> old_matched(old_tail.size(), false);
  std::size_t cursor = 0;
  for (std::size_t j = 0; j < fresh.size(); ++j) {
    const double t = fresh[j].timestamp;
    while (cursor < old_tail.size() && old_tail[cursor].timestamp < t - half) ++cursor;
    std::optional<std::size_t> best;
    double best_gap = 0.0;
    for (std::size_t k = cursor; k < old_tail.size() && old_tail[k].timestamp <= t + half; ++k) {
      const double gap = std::abs(old_tail[k].timestamp - t);
      if (!best || gap < best_gap) {
        best = k;
        best_gap = gap;
      }
    }
    if (best) {
      match[j] = best;
      old_matched[*best] = true;
      cursor = *best + 1;
      ++result.matched;
    }
  }

  const double front = fresh.front().timestamp;
  const double back = fresh.back().timestamp;
  result.merged.reserve(old_tail.size() + fresh.size());
  for (std::size_t k = 0; k < old_tail.size(); ++k) {
    if (!old_matched[k] && old_tail[k].timestamp < front) result.merged.push_back(old_tail[k]);
  }
  std::size_t pair_index = 0;
  for (std::size_t j = 0; j < fresh.size(); ++j) {
    if (!match[j]) {
      result.merged.push_back(fresh[j]);
      continue;
    }
    double a = alpha;
    if (mode == BlendMode::kLinearRamp && result.matched > 1) {
      a = 1.0 - static_cast<double>(pair_index) / static_cast<double>(result.matched - 1);
    }
    ++pair_index;
    TimedAction blended = fresh[j];
    blended.action.arm = MixArm(old_tail[*match[j]].action.arm, fresh[j].action.arm, a);
    result.merged.push_back(blended);
  }
  for (std::size_t k = 0; k < old_tail.size(); ++k) {
    if (old_matched[k]) continue;
    if (old_tail[k].timestamp > back) {
      result.merged.push_back(old_tail[k]);
    } else if (old_tail[k].timestamp >= front) {
      ++result.superseded;
    }
  }
  return result;
}

std::vector<TimedAction> BlendOverlap(std::span<const TimedAction> old_tail,
                                      std::span<const TimedAction> fresh, double alpha,
                                      double period, BlendMode mode) {
  return BlendOverlapDetailed(old_tail, fresh, alpha, period, mode).merged;
}

}  // namespace harvest::stream
