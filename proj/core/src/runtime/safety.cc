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

#include "harvest/runtime/safety.h"

#include <algorithm>
#include <cmath>

#include "harvest/common/error.h"

namespace harvest::runtime {

SafetyLimits SafetyLimits::Default(const Box& workspace) {
  SafetyLimits l;
  for (int i = 0; i < 3; ++i) l.arm_bounds[i] = {-0.25, 0.25};
  for (int i = 3; i < 6; ++i) l.arm_bounds[i] = {-1.0, 1.0};
  l.arm_bounds[6] = {-2.0, 2.0};
  l.workspace = workspace;
  return l;
}

void SafetyLimits::Validate() const {
  for (const auto& [lo, hi] : arm_bounds) {
    if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
      throw ValidationError("arm bounds need finite min <= max");
    }
  }
  if (!(workspace.Volume() > 0.0)) throw ValidationError("workspace box must have positive volume");
}

stream::ActionVector ClampAction(const stream::ActionVector& action, const sim::EEState& state,
                                 const SafetyLimits& limits, double period) {
  if (limits.estop) return stream::ActionVector::Zero();
  stream::ActionVector out = action;
  for (int i = 0; i < stream::kArmDims; ++i) {
    const double v = std::isfinite(out.arm[i]) ? out.arm[i] : 0.0;
    out.arm[i] = std::clamp(v, limits.arm_bounds[i].first, limits.arm_bounds[i].second);
  }
  for (int i = 0; i < 3; ++i) {
    const double next = state.position[i] + out.arm[i] * period;
    if (next > limits.workspace.max[i] || next < limits.workspace.min[i]) out.arm[i] = 0.0;
  }
  return out;
}

}  // namespace harvest::runtime
