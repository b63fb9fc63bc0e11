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

#ifndef HARVEST_SIM_GREENHOUSE_ENV_H_
#define HARVEST_SIM_GREENHOUSE_ENV_H_

#include <cstdint>
#include <string>
#include <vector>

#include "harvest/common/rng.h"
#include "harvest/policy/perception.h"
#include "harvest/runtime/plant.h"
#include "harvest/sim/simulator.h"

namespace harvest::sim {

// Simulator plus camera model, as seen by the control loop. Perception draws
// come from their own stream so stepping is unaffected by how often the
// scene is observed.
class GreenhouseEnv : public runtime::ControlledPlant {
 public:
  GreenhouseEnv(PlantScene scene, SimConfig config, policy::ViewConfig views, std::uint64_t seed,
                std::string goal = std::string(policy::kDefaultPrompt));

  policy::Observation Observe(double now) override;
  std::vector<SimEvent> Step(const stream::ActionVector& action, double now, double dt) override;
  std::vector<SimEvent> OnEStop(double now) override;
  bool Finished() const override { return sim_.Finished(); }
  const EEState& State() const override { return sim_.ee(); }
  Box Workspace() const override { return sim_.scene().workspace; }

  Simulator& simulator() { return sim_; }
  const Simulator& simulator() const { return sim_; }
  const policy::ViewConfig& views() const { return views_; }

 private:
  Simulator sim_;
  policy::ViewConfig views_;
  Rng perception_rng_;
  std::string goal_;
};

}  // namespace harvest::sim

#endif  // HARVEST_SIM_GREENHOUSE_ENV_H_
