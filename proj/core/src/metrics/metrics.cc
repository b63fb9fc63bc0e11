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

#include "harvest/metrics/metrics.h"

#include <cmath>

#include "harvest/common/error.h"

namespace harvest::metrics {

StageWeights StageWeights::Uniform(std::size_t k) {
  return {std::vector<double>(k, 1.0 / static_cast<double>(k))};
}

void StageWeights::Validate() const {
  if (w.empty()) throw ValidationError("stage weights must not be empty");
  double sum = 0.0;
  for (double v : w) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("stage weights must be >= 0");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ValidationError("stage weights must sum to 1");
}

double SuccessScore(std::span<const StageFlags> episodes, const StageWeights& weights) {
  weights.Validate();
  if (episodes.empty()) throw ValidationError("success score needs at least one episode");
  double total = 0.0;
  for (const StageFlags& flags : episodes) {
    if (flags.size() != weights.w.size()) {
      throw ValidationError("stage flag count does not match the weights");
    }
    double s = 0.0;
    for (std::size_t k = 0; k < flags.size(); ++k) {
      if (flags[k]) s += weights.w[k];
    }
    total += s;
  }
  // One division at the end keeps dyadic cases exact.
  return 100.0 * total / static_cast<double>(episodes.size());
}

double SuccessRate(std::span<const EpisodeOutcome> episodes) {
  if (episodes.empty()) throw ValidationError("success rate needs at least one episode");
  std::size_t n = 0;
  for (const EpisodeOutcome& e : episodes) n += e.success ? 1 : 0;
  return static_cast<double>(n) / static_cast<double>(episodes.size());
}

std::optional<double> FirstAttemptCycleTime(std::span<const std::optional<double>> times) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& t : times) {
    if (!t) continue;
    sum += *t;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

double DamageRate(std::span<const int> severities) {
  if (severities.empty()) throw ValidationError("damage rate needs at least one successful pick");
  long long sum = 0;
  for (int s : severities) {
    if (s < 0 || s > 5) throw ValidationError("severity must lie in 0..5");
    sum += s;
  }
  return static_cast<double>(sum) / (5.0 * static_cast<double>(severities.size()));
}

std::vector<double> StagewiseSuccess(std::span<const StageFlags> episodes) {
  if (episodes.empty()) throw ValidationError("stage-wise success needs at least one episode");
  const std::size_t k = episodes.front().size();
  std::vector<std::size_t> counts(k, 0);
  for (const StageFlags& f : episodes) {
    if (f.size() != k) throw ValidationError("episodes disagree on the stage count");
    for (std::size_t i = 0; i < k; ++i) counts[i] += f[i] ? 1 : 0;
  }
  std::vector<double> out(k);
  for (std::size_t i = 0; i < k; ++i) {
    out[i] = static_cast<double>(counts[i]) / static_cast<double>(episodes.size());
  }
  return out;
}

MetricsReport Evaluate(std::span<const EpisodeOutcome> episodes, const StageWeights& weights) {
  if (episodes.empty()) throw ValidationError("metrics need at least one episode");
  std::vector<StageFlags> flags;
  std::vector<std::optional<double>> times;
  std::vector<int> severities;
  for (const EpisodeOutcome& e : episodes) {
    flags.push_back(e.flags);
    times.push_back(e.first_attempt_time);
    severities.insert(severities.end(), e.pick_severities.begin(), e.pick_severities.end());
  }
  MetricsReport r;
  r.ss = SuccessScore(flags, weights);
  r.sr = SuccessRate(episodes);
  r.cycle_time = FirstAttemptCycleTime(times);
  if (!severities.empty()) r.dr = DamageRate(severities);
  r.stagewise = StagewiseSuccess(flags);
  r.n_total = episodes.size();
  for (const EpisodeOutcome& e : episodes) r.n_succ += e.success ? 1 : 0;
  return r;
}

EpisodeOutcome OutcomeFromManifest(const store::EpisodeManifest& m) {
  EpisodeOutcome out;
  out.flags.assign(sim::kNumStages, false);
  int best = -1;
  for (const sim::AttemptRecord& a : m.attempts) {
    if (a.CompletedStages() > best) {
      best = a.CompletedStages();
      out.flags.assign(a.flags.begin(), a.flags.end());
    }
  }
  out.success = m.success;
  if (!m.attempts.empty() && m.retries == 0) {
    const sim::AttemptRecord& first = m.attempts.front();
    if (first.outcome == sim::AttemptOutcome::kSucceeded && first.stage_times[3]) {
      out.first_attempt_time = *first.stage_times[3] - m.start_time;
    }
  }
  for (const sim::AttemptRecord& a : m.attempts) {
    if (a.outcome != sim::AttemptOutcome::kSucceeded) continue;
    for (const store::FruitSummary& f : m.fruits) {
      if (f.id == a.fruit_id) out.pick_severities.push_back(f.severity);
    }
  }
  return out;
}

}  // namespace harvest::metrics
