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

#ifndef HARVEST_RUNTIME_PLANT_H_
#define HARVEST_RUNTIME_PLANT_H_

#include <vector>

#include "harvest/common/geometry.h"
#include "harvest/policy/observation.h"
#include "harvest/sim/types.h"
#include "harvest/stream/action.h"

namespace harvest::runtime {

// The thing the control loop drives: the simulated greenhouse, or a
// teleoperated session wrapping one.
class ControlledPlant {
 public:
  virtual ~ControlledPlant() = default;

  virtual policy::Observation Observe(double now) = 0;
  virtual std::vector<sim::SimEvent> Step(const stream::ActionVector& action, double now,
                                          double dt) = 0;
  virtual std::vector<sim::SimEvent> OnEStop(double now) = 0;
  virtual bool Finished() const = 0;
  virtual const sim::EEState& State() const = 0;
  virtual Box Workspace() const = 0;
};

}  // namespace harvest::runtime

#endif  // HARVEST_RUNTIME_PLANT_H_
