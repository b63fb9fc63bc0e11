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

#ifndef HARVEST_BENCH_LOSS_EVAL_H_
#define HARVEST_BENCH_LOSS_EVAL_H_

#include <cstddef>
#include <filesystem>
#include <span>

#include <nlohmann/json.hpp>

#include "harvest/policy/imitation_loss.h"
#include "harvest/store/record.h"

namespace harvest::bench {

struct LossReport {
  double mean_loss = 0.0;
  std::size_t steps = 0;
  std::size_t episodes = 0;
};

// Step-wise imitation loss of a policy against recorded demonstrations. Each
// recorded episode is re-simulated from its manifest; at every step the
// policy sees the observation of the demonstrated state and its first
// predicted action is scored against the demonstrated one. Inference latency
// is ignored. `policy_config` holds a "policy" section (plus optional
// "views" and "scripted" overrides) and optional "loss_weights". Replay
// policies without a source replay each episode against itself.
LossReport EvaluateLoss(std::span<const store::EpisodeRecord> dataset,
                        const nlohmann::json& policy_config);

// Loads every episode under `dataset_dir`. Throws ValidationError when none exist.
LossReport EvaluateLoss(const std::filesystem::path& dataset_dir,
                        const nlohmann::json& policy_config);

policy::LossWeights LossWeightsFromJson(const nlohmann::json& j);

}  // namespace harvest::bench

#endif  // HARVEST_BENCH_LOSS_EVAL_H_
