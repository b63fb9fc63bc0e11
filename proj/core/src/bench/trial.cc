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

#include "harvest/bench/trial.h"

#include <exception>

#include "harvest/common/error.h"
#include "harvest/policy/replay_policy.h"
#include "harvest/runtime/control_loop.h"
#include "harvest/runtime/safety.h"
#include "harvest/runtime/timing.h"
#include "harvest/sim/greenhouse_env.h"
#include "harvest/store/json_codec.h"

namespace harvest::bench {

using store::Json;

namespace {

template <typename Fn>
auto Section(const Json& j, const char* name, Fn parse) -> decltype(parse(j)) {
  try {
    return parse(j.contains(name) ? j[name] : Json::object());
  } catch (const ValidationError& e) {
    throw ValidationError(std::string(name) + ": " + e.what());
  }
}

}  // namespace

RunSpec ParseRunSpec(const Json& j) {
  store::CheckKeys(j, {"scene", "sim", "views", "policy", "control", "prompt", "seed", "label"},
                   "run config");
  RunSpec spec;
  const Json scene = j.value("scene", Json::object());
  try {
    Json rest = scene;
    if (!rest.is_object()) throw ValidationError("must be an object");
    if (rest.contains("kind")) {
      const std::string kind = rest["kind"].is_string() ? rest["kind"].get<std::string>() : "";
      if (kind == "generated") spec.scene_kind = SceneKind::kGenerated;
      else if (kind == "single_fruit") spec.scene_kind = SceneKind::kSingleFruit;
      else throw ValidationError("unknown scene kind '" + kind + "'");
      rest.erase("kind");
    }
    if (rest.contains("fruit_position")) {
      spec.fruit_position = store::Vec3FromJson(rest["fruit_position"]);
      rest.erase("fruit_position");
    }
    spec.scene = store::SceneConfigFromJson(rest);
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("scene: ") + e.what());
  }
  spec.sim = Section(j, "sim", store::SimConfigFromJson);
  spec.views = Section(j, "views", store::ViewConfigFromJson);
  spec.policy = Section(j, "policy", store::PolicySpecFromJson);
  if (j.contains("policy")) {
    const Json& p = j["policy"];
    if (p.contains("scripted")) {
      spec.scripted = Section(p, "scripted", store::ScriptedConfigFromJson);
    }
    if (p.contains("source")) {
      if (!p["source"].is_string()) throw ValidationError("policy.source must be a path string");
      spec.replay_source = p["source"].get<std::string>();
    }
  }
  spec.control = Section(j, "control", store::ControlConfigFromJson);
  if (j.contains("prompt")) {
    if (!j["prompt"].is_string()) throw ValidationError("prompt must be a string");
    spec.prompt = j["prompt"].get<std::string>();
  }
  return spec;
}

std::unique_ptr<policy::Policy> MakePolicy(const RunSpec& spec,
                                           const std::vector<stream::TimedAction>* replay_actions) {
  const double period = spec.control.period();
  switch (spec.policy.kind) {
    case policy::PolicyKind::kScripted:
      return std::make_unique<policy::ScriptedPolicy>(spec.policy, period, spec.scripted);
    case policy::PolicyKind::kNeverPump: {
      policy::ScriptedPolicyConfig c = spec.scripted;
      c.use_pump = false;
      return std::make_unique<policy::ScriptedPolicy>(spec.policy, period, c);
    }
    case policy::PolicyKind::kZero:
      return std::make_unique<policy::ZeroPolicy>(spec.policy, period);
    case policy::PolicyKind::kReplay: {
      if (replay_actions) {
        return std::make_unique<policy::ReplayPolicy>(*replay_actions, spec.policy, period);
      }
      if (!spec.replay_source) throw ValidationError("replay policy needs policy.source");
      store::EpisodeRecord src = store::LoadEpisode(*spec.replay_source);
      return std::make_unique<policy::ReplayPolicy>(std::move(src.actions), spec.policy, period);
    }
  }
  throw ValidationError("unsupported policy kind");
}

sim::PlantScene MakeScene(const RunSpec& spec, std::uint64_t seed) {
  return spec.scene_kind == SceneKind::kSingleFruit
             ? sim::SingleFruitScene(spec.scene, spec.fruit_position)
             : sim::GenerateScene(spec.scene, seed);
}

store::EpisodeRecord RunTrial(const Json& run_config, std::uint64_t seed, const std::string& id) {
  Json config = run_config;
  config["seed"] = seed;
  RunSpec spec = ParseRunSpec(config);
  spec.policy.seed += seed;
  spec.control.seed = seed;

  store::EpisodeRecord record;
  store::EpisodeManifest& m = record.manifest;
  m.id = id;
  m.seed = seed;
  m.prompt = spec.prompt;
  m.config = config;
  m.config_digest = store::ConfigDigest(config);

  sim::PlantScene scene = MakeScene(spec, seed);
  m.tags = scene.tags;
  m.scene = scene;
  sim::GreenhouseEnv env(scene, spec.sim, spec.views, seed, spec.prompt);
  runtime::EpisodeLog log;
  try {
    std::unique_ptr<policy::Policy> policy = MakePolicy(spec);
    log = runtime::RunEpisode(env, *policy, spec.control,
                              runtime::SafetyLimits::Default(scene.workspace));
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception& e) {
    m.fault = e.what();
  }
  if (log.fault && !m.fault) m.fault = log.fault;

  const sim::Simulator& s = env.simulator();
  m.start_time = 0.0;
  m.end_time = static_cast<double>(log.ticks.size()) * spec.control.period();
  m.tick_count = log.ticks.size();
  m.success = !m.fault && s.Succeeded();
  m.retries = s.retries();
  m.attempts = s.attempts();
  for (const sim::Fruit& f : s.scene().fruits) {
    m.fruits.push_back({f.id, f.IsRipe(), f.severity, f.location});
  }
  if (!log.ticks.empty()) m.timing = runtime::ComputeTimingReport(log);

  record.actions = std::move(log.actions);
  record.states = std::move(log.states);
  record.events = std::move(log.events);
  record.ticks = std::move(log.ticks);
  return record;
}

}  // namespace harvest::bench
