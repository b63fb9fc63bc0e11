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


#ifndef HARVEST_TESTS_SUPPORT_FIXTURES_H_
#define HARVEST_TESTS_SUPPORT_FIXTURES_H_

#include <cstdint>
#include <memory>
#include <stdexcept>

#include "harvest/policy/policy.h"
#include "harvest/policy/scripted_policy.h"
#include "harvest/runtime/config.h"
#include "harvest/sim/greenhouse_env.h"
#include "harvest/sim/scene.h"

namespace harvest::testing {

inline const Vec3 kFruit{0.08, 0.17, 0.36};

inline sim::PlantScene SingleFruit() { return sim::SingleFruitScene({}, kFruit); }

inline std::unique_ptr<sim::GreenhouseEnv> MakeEnv(const sim::PlantScene& scene,
                                                   std::uint64_t seed = 0) {
  return std::make_unique<sim::GreenhouseEnv>(scene, sim::SimConfig{},
                                              policy::ViewConfig::AllViews(), seed);
}

inline policy::PolicySpec Spec(double latency, std::size_t h = 50, std::uint64_t seed = 0) {
  policy::PolicySpec s;
  s.chunk_length = h;
  s.latency = policy::LatencyModel::Constant(latency);
  s.seed = seed;
  return s;
}

inline runtime::ControlConfig Control(runtime::ControlMode mode, double horizon = 60.0) {
  runtime::ControlConfig c;
  c.mode = mode;
  c.horizon = horizon;
  return c;
}

// Fails every call from the `fail_at`-th on.
class FailingPolicy : public policy::Policy {
 public:
  FailingPolicy(policy::PolicySpec spec, double period, int fail_at)
      : Policy(spec, period), fail_at_(fail_at) {}
  int calls() const { return calls_; }
  double last_start() const { return last_start_; }

 protected:
  std::vector<stream::ActionVector> Plan(const policy::Observation&, double start) override {
    last_start_ = start;
    if (++calls_ >= fail_at_) throw std::runtime_error("inference backend crashed");
    stream::ActionVector a;
    a.arm[0] = 0.01;
    return std::vector<stream::ActionVector>(chunk_length(), a);
  }

 private:
  int fail_at_;
  int calls_ = 0;
  double last_start_ = 0.0;
};

}  // namespace harvest::testing

#endif  // HARVEST_TESTS_SUPPORT_FIXTURES_H_
