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

#include "harvest/sim/greenhouse_env.h"

#include <utility>

namespace harvest::sim {

GreenhouseEnv::GreenhouseEnv(PlantScene scene, SimConfig config, policy::ViewConfig views,
                             std::uint64_t seed, std::string goal)
    : sim_(std::move(scene), config, seed),
      views_(views),
      perception_rng_(DeriveSeed(seed, rng_stream::kPerception)),
      goal_(std::move(goal)) {
  views_.Validate();
}

policy::Observation GreenhouseEnv::Observe(double now) {
  return policy::DegradeObservation(sim_.scene(), sim_.ee(), views_, perception_rng_, now, goal_);
}

std::vector<SimEvent> GreenhouseEnv::Step(const stream::ActionVector& action, double now,
                                          double dt) {
  return sim_.Step(action, now, dt);
}

std::vector<SimEvent> GreenhouseEnv::OnEStop(double now) { return sim_.RaiseEStop(now); }

}  // namespace harvest::sim
