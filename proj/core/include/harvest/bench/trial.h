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

#ifndef HARVEST_BENCH_TRIAL_H_
#define HARVEST_BENCH_TRIAL_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "harvest/policy/perception.h"
#include "harvest/policy/policy.h"
#include "harvest/policy/scripted_policy.h"
#include "harvest/runtime/config.h"
#include "harvest/sim/scene.h"
#include "harvest/sim/simulator.h"
#include "harvest/store/record.h"

namespace harvest::bench {

enum class SceneKind { kGenerated, kSingleFruit };

// Typed view of one run configuration (the sections every episode needs).
struct RunSpec {
  SceneKind scene_kind = SceneKind::kGenerated;
  Vec3 fruit_position{0.08, 0.17, 0.36};
  sim::SceneConfig scene;
  sim::SimConfig sim;
  policy::ViewConfig views;
  policy::PolicySpec policy;
  policy::ScriptedPolicyConfig scripted;
  std::optional<std::string> replay_source;  // episode directory for replay policies
  runtime::ControlConfig control;
  std::string prompt{policy::kDefaultPrompt};
};

// Throws ValidationError naming the offending section.
RunSpec ParseRunSpec(const nlohmann::json& run_config);

// Builds the policy a spec asks for. Replay policies read their source
// episode, or use `replay_actions` when given.
std::unique_ptr<policy::Policy> MakePolicy(
    const RunSpec& spec, const std::vector<stream::TimedAction>* replay_actions = nullptr);

sim::PlantScene MakeScene(const RunSpec& spec, std::uint64_t seed);

// Runs one seeded episode and packages it for the store. The manifest config
// is `run_config` with the trial seed filled in. Exceptions raised while the
// episode runs are recorded as a fault on a failed trial.
store::EpisodeRecord RunTrial(const nlohmann::json& run_config, std::uint64_t seed,
                              const std::string& id);

}  // namespace harvest::bench

#endif  // HARVEST_BENCH_TRIAL_H_
