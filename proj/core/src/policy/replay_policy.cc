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

#include "harvest/policy/replay_policy.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "harvest/common/error.h"

namespace harvest::policy {

namespace {
constexpr double kGapSlack = 2e-6;  // two microsecond roundings
}  // namespace

ReplayPolicy::ReplayPolicy(std::vector<stream::TimedAction> recorded, PolicySpec spec,
                           double period)
    : Policy(std::move(spec), period), recorded_(std::move(recorded)) {
  if (recorded_.empty()) throw ValidationError("replay needs a non-empty action stream");
  for (std::size_t i = 1; i < recorded_.size(); ++i) {
    const double gap = recorded_[i].timestamp - recorded_[i - 1].timestamp;
    if (!(gap > 0.0)) throw ValidationError("replay timestamps must be strictly increasing");
    if (gap > period + kGapSlack) {
      throw ValidationError("replay action stream has a gap longer than one period");
    }
  }
}

std::vector<stream::ActionVector> ReplayPolicy::Plan(const Observation&, double start_time) {
  std::vector<stream::ActionVector> out(chunk_length(), stream::ActionVector::Zero());
  // First recorded action not earlier than half a period before start_time.
  auto it = std::lower_bound(recorded_.begin(), recorded_.end(), start_time - 0.5 * period(),
                             [](const stream::TimedAction& a, double t) { return a.timestamp < t; });
  for (std::size_t i = 0; i < out.size() && it != recorded_.end(); ++i, ++it) {
    out[i] = it->action;
  }
  return out;
}

}  // namespace harvest::policy
