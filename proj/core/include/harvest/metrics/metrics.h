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

#ifndef HARVEST_METRICS_METRICS_H_
#define HARVEST_METRICS_METRICS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "harvest/store/record.h"

namespace harvest::metrics {

struct StageWeights {
  std::vector<double> w;

  static StageWeights Uniform(std::size_t k = 5);
  // Throws ValidationError on negative weights or a sum off 1 by more than 1e-9.
  void Validate() const;
};

using StageFlags = std::vector<bool>;

// What the metrics need from one episode.
struct EpisodeOutcome {
  StageFlags flags;                        // best-progress attempt
  bool success = false;                    // every ripe fruit picked
  std::optional<double> first_attempt_time;  // start to placement, first attempt and no retries
  std::vector<int> pick_severities;        // one per successful pick
};

// 100 * mean_i(sum_k w_k c_ik). Throws ValidationError on empty input, bad
// weights or a flag vector whose length differs from the weights.
double SuccessScore(std::span<const StageFlags> episodes, const StageWeights& weights);
// Mean over qualifying episodes; nullopt when none qualify.
std::optional<double> FirstAttemptCycleTime(std::span<const std::optional<double>> times);
// mean(s_i / 5). Throws ValidationError on empty input or severities outside 0..5.
double DamageRate(std::span<const int> severities);
// Fraction of episodes completing each stage. Throws ValidationError on empty input.
std::vector<double> StagewiseSuccess(std::span<const StageFlags> episodes);

struct MetricsReport {
  double ss = 0.0;
  double sr = 0.0;
  std::optional<double> cycle_time;
  std::optional<double> dr;  // empty when nothing succeeded
  std::vector<double> stagewise;
  std::size_t n_total = 0;
  std::size_t n_succ = 0;
};

// N_succ / N_total. Throws ValidationError on empty input.
double SuccessRate(std::span<const EpisodeOutcome> episodes);

MetricsReport Evaluate(std::span<const EpisodeOutcome> episodes, const StageWeights& weights);

EpisodeOutcome OutcomeFromManifest(const store::EpisodeManifest& manifest);

}  // namespace harvest::metrics

#endif  // HARVEST_METRICS_METRICS_H_
