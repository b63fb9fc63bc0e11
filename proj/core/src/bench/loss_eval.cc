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

#include "harvest/bench/loss_eval.h"

#include <algorithm>
#include <vector>

#include "harvest/bench/trial.h"
#include "harvest/common/error.h"
#include "harvest/common/rng.h"
#include "harvest/policy/perception.h"
#include "harvest/sim/simulator.h"
#include "harvest/store/json_codec.h"

namespace harvest::bench {

using store::Json;

policy::LossWeights LossWeightsFromJson(const Json& j) {
  store::CheckKeys(j, {"lambda_arm", "lambda_pump"}, "loss_weights");
  policy::LossWeights w;
  try {
    w.lambda_arm = j.value("lambda_arm", w.lambda_arm);
    w.lambda_pump = j.value("lambda_pump", w.lambda_pump);
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("loss_weights: ") + e.what());
  }
  w.Validate();
  return w;
}

LossReport EvaluateLoss(std::span<const store::EpisodeRecord> dataset, const Json& policy_config) {
  store::CheckKeys(policy_config, {"policy", "views", "loss_weights"}, "policy config");
  if (dataset.empty()) throw ValidationError("loss evaluation needs at least one episode");
  const policy::LossWeights weights =
      LossWeightsFromJson(policy_config.value("loss_weights", Json::object()));

  LossReport report;
  double total = 0.0;
  for (const store::EpisodeRecord& rec : dataset) {
    if (rec.actions.empty()) continue;
    // The episode's own configuration, with the evaluated policy swapped in.
    Json run = rec.manifest.config;
    run.erase("seed");
    run.erase("label");
    run["policy"] = policy_config.value("policy", Json::object());
    if (policy_config.contains("views")) run["views"] = policy_config["views"];
    RunSpec spec = ParseRunSpec(run);
    spec.policy.latency = policy::LatencyModel::Constant(0.0);
    spec.policy.seed += rec.manifest.seed;
    std::unique_ptr<policy::Policy> pol =
        spec.policy.kind == policy::PolicyKind::kReplay && !spec.replay_source
            ? MakePolicy(spec, &rec.actions)
            : MakePolicy(spec);

    sim::Simulator simulator(rec.manifest.scene, spec.sim, rec.manifest.seed);
    Rng perception(DeriveSeed(rec.manifest.seed, rng_stream::kPerception));
    const double dt = spec.control.period();
    for (std::size_t i = 0; i < rec.actions.size(); ++i) {
      const std::size_t index = i < rec.ticks.size() ? rec.ticks[i].index : i;
      const double now = static_cast<double>(index) * dt;
      policy::Observation obs = policy::DegradeObservation(
          simulator.scene(), simulator.ee(), spec.views, perception, now, spec.prompt);
      const policy::InferenceResult pred = pol->Infer(obs, now);
      total += policy::ImitationLoss(pred.chunk.actions.front(), rec.actions[i].action, weights);
      ++report.steps;
      simulator.Step(rec.actions[i].action, now, dt);
    }
    ++report.episodes;
  }
  if (report.steps == 0) throw ValidationError("dataset holds no recorded actions");
  report.mean_loss = total / static_cast<double>(report.steps);
  return report;
}

LossReport EvaluateLoss(const std::filesystem::path& dataset_dir, const Json& policy_config) {
  std::vector<store::EpisodeRecord> records;
  std::vector<std::filesystem::path> dirs = store::ListEpisodes(dataset_dir);
  if (dirs.empty() && std::filesystem::exists(dataset_dir / "manifest.json")) {
    dirs.push_back(dataset_dir);
  }
  if (dirs.empty() && std::filesystem::is_directory(dataset_dir)) {
    // A suite results directory: one level of label folders.
    for (const auto& entry : std::filesystem::directory_iterator(dataset_dir)) {
      if (!entry.is_directory()) continue;
      for (auto& d : store::ListEpisodes(entry.path())) dirs.push_back(d);
    }
    std::sort(dirs.begin(), dirs.end());
  }
  for (const auto& d : dirs) records.push_back(store::LoadEpisode(d));
  if (records.empty()) throw ValidationError("no episodes found in " + dataset_dir.string());
  return EvaluateLoss(records, policy_config);
}

}  // namespace harvest::bench
