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

#ifndef HARVEST_RUNTIME_SAFETY_H_
#define HARVEST_RUNTIME_SAFETY_H_

#include <array>
#include <utility>

#include "harvest/common/geometry.h"
#include "harvest/sim/types.h"
#include "harvest/stream/action.h"

namespace harvest::runtime {

struct SafetyLimits {
  std::array<std::pair<double, double>, stream::kArmDims> arm_bounds{};
  Box workspace;
  bool estop = false;

  // Linear +-0.25 m/s, angular +-1 rad/s, bend rate +-2 rad/s.
  static SafetyLimits Default(const Box& workspace);
  void Validate() const;
};

// Clips each arm component to its bound (non-finite components become zero),
// then zeroes any linear component that would carry the end effector out of
// the workspace within one period. Estop yields a zero arm with the pump idle.
stream::ActionVector ClampAction(const stream::ActionVector& action, const sim::EEState& state,
                                 const SafetyLimits& limits, double period);

}  // namespace harvest::runtime

#endif  // HARVEST_RUNTIME_SAFETY_H_
