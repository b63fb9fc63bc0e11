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

#include <algorithm>
#include <optional>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "harvest/common/error.h"
#include "harvest/metrics/metrics.h"

namespace harvest::metrics {
namespace {

StageFlags Flags(std::initializer_list<int> bits) {
  StageFlags f;
  for (int b : bits) f.push_back(b != 0);
  return f;
}

std::vector<StageFlags> RandomFlags(std::mt19937_64& rng, int n) {
  std::vector<StageFlags> out;
  std::uniform_int_distribution<int> reached(0, 5);
  for (int i = 0; i < n; ++i) {
    const int k = reached(rng);
    StageFlags f(5, false);
    for (int j = 0; j < k; ++j) f[j] = true;
    out.push_back(f);
  }
  return out;
}

StageWeights RandomWeights(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  StageWeights w;
  double sum = 0.0;
  for (int k = 0; k < 5; ++k) {
    w.w.push_back(u(rng));
    sum += w.w.back();
  }
  for (double& v : w.w) v /= sum;
  return w;
}

TEST(SuccessScoreTest, HandCases) {
  const StageWeights u = StageWeights::Uniform();
  const std::vector<StageFlags> full(3, Flags({1, 1, 1, 1, 1}));
  EXPECT_DOUBLE_EQ(SuccessScore(full, u), 100.0);
  const std::vector<StageFlags> partial{Flags({1, 1, 1, 0, 0})};
  EXPECT_NEAR(SuccessScore(partial, u), 60.0, 1e-9);
  const std::vector<StageFlags> none(4, Flags({0, 0, 0, 0, 0}));
  EXPECT_DOUBLE_EQ(SuccessScore(none, u), 0.0);
}

TEST(SuccessScoreTest, Rejections) {
  const std::vector<StageFlags> one{Flags({1, 0, 0, 0, 0})};
  EXPECT_THROW(SuccessScore(one, StageWeights{{0.5, 0.5, 0.5, 0.0, 0.0}}), ValidationError);
  EXPECT_THROW(SuccessScore(one, StageWeights{{1.2, -0.2, 0.0, 0.0, 0.0}}), ValidationError);
  EXPECT_THROW(SuccessScore(one, StageWeights::Uniform(4)), ValidationError);
  EXPECT_THROW(SuccessScore({}, StageWeights::Uniform()), ValidationError);
  EXPECT_NO_THROW((StageWeights{{0.2, 0.2, 0.2, 0.2, 0.2 + 5e-10}}.Validate()));
}

TEST(SuccessRateTest, HandCases) {
  std::vector<EpisodeOutcome> eps(50);
  for (int i = 0; i < 37; ++i) eps[i].success = true;
  EXPECT_DOUBLE_EQ(SuccessRate(eps), 0.74);
  std::vector<EpisodeOutcome> fail(7);
  EXPECT_DOUBLE_EQ(SuccessRate(fail), 0.0);
  for (auto& e : fail) e.success = true;
  EXPECT_DOUBLE_EQ(SuccessRate(fail), 1.0);
  EXPECT_THROW(SuccessRate({}), ValidationError);
}

TEST(CycleTimeTest, HandCases) {
  const std::vector<std::optional<double>> one{32.6};
  EXPECT_DOUBLE_EQ(*FirstAttemptCycleTime(one), 32.6);
  const std::vector<std::optional<double>> retried{std::nullopt, std::nullopt};
  EXPECT_FALSE(FirstAttemptCycleTime(retried).has_value());
  const std::vector<std::optional<double>> two{10.0, std::nullopt, 20.0};
  EXPECT_DOUBLE_EQ(*FirstAttemptCycleTime(two), 15.0);
}

TEST(DamageRateTest, HandCases) {
  EXPECT_DOUBLE_EQ(DamageRate(std::vector<int>{0, 0, 0}), 0.0);
  EXPECT_DOUBLE_EQ(DamageRate(std::vector<int>{5}), 1.0);
  EXPECT_NEAR(DamageRate(std::vector<int>{1, 0, 2}), 0.2, 1e-12);
  EXPECT_THROW(DamageRate(std::vector<int>{}), ValidationError);
  EXPECT_THROW(DamageRate(std::vector<int>{6}), ValidationError);
  EXPECT_THROW(DamageRate(std::vector<int>{-1}), ValidationError);
}

TEST(StagewiseTest, HandCases) {
  const std::vector<StageFlags> full(2, Flags({1, 1, 1, 1, 1}));
  EXPECT_EQ(StagewiseSuccess(full), std::vector<double>(5, 1.0));
  const std::vector<StageFlags> mixed{Flags({1, 1, 0, 0, 0}), Flags({1, 1, 1, 1, 1})};
  EXPECT_EQ(StagewiseSuccess(mixed), (std::vector<double>{1, 1, 0.5, 0.5, 0.5}));
  EXPECT_THROW(StagewiseSuccess({}), ValidationError);
}

TEST(EvaluateTest, ReportRanges) {
  std::vector<EpisodeOutcome> eps(3);
  eps[0] = {Flags({1, 1, 1, 1, 1}), true, 12.0, {1}};
  eps[1] = {Flags({1, 1, 0, 0, 0}), false, std::nullopt, {}};
  eps[2] = {Flags({1, 1, 1, 1, 1}), true, std::nullopt, {3}};
  const MetricsReport r = Evaluate(eps, StageWeights::Uniform());
  EXPECT_NEAR(r.ss, 100.0 * (1.0 + 0.4 + 1.0) / 3.0, 1e-9);
  EXPECT_NEAR(r.sr, 2.0 / 3.0, 1e-12);
  EXPECT_DOUBLE_EQ(*r.cycle_time, 12.0);
  EXPECT_NEAR(*r.dr, 0.4, 1e-12);
  EXPECT_EQ(r.n_total, 3u);
  EXPECT_EQ(r.n_succ, 2u);
  std::vector<EpisodeOutcome> failed(2);
  failed[0].flags = failed[1].flags = Flags({1, 0, 0, 0, 0});
  EXPECT_FALSE(Evaluate(failed, StageWeights::Uniform()).dr.has_value());
}

TEST(OutcomeTest, BestAttemptAndFirstAttemptTime) {
  store::EpisodeManifest m;
  m.start_time = 1.0;
  sim::AttemptRecord failed;
  failed.flags = {true, true, false, false, false};
  failed.outcome = sim::AttemptOutcome::kFailed;
  sim::AttemptRecord won;
  won.index = 1;
  won.fruit_id = 4;
  won.flags = {true, true, true, true, true};
  won.stage_times = {2.0, 3.0, 4.0, 6.5, 8.0};
  won.outcome = sim::AttemptOutcome::kSucceeded;
  m.attempts = {failed, won};
  m.retries = 1;
  m.success = true;
  m.fruits = {{4, true, 2, sim::FruitLocation::kInTray}};
  EpisodeOutcome o = OutcomeFromManifest(m);
  EXPECT_EQ(o.flags, Flags({1, 1, 1, 1, 1}));
  EXPECT_TRUE(o.success);
  EXPECT_FALSE(o.first_attempt_time.has_value());
  EXPECT_EQ(o.pick_severities, std::vector<int>{2});

  m.attempts = {won};
  m.attempts[0].index = 0;
  m.retries = 0;
  o = OutcomeFromManifest(m);
  EXPECT_DOUBLE_EQ(*o.first_attempt_time, 5.5);
}

TEST(MetricsPropertyTest, ScoreBoundsRate) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto flags = RandomFlags(rng, 1 + trial % 30);
    std::vector<EpisodeOutcome> eps;
    for (const auto& f : flags) {
      eps.push_back({f, std::all_of(f.begin(), f.end(), [](bool b) { return b; }), {}, {}});
    }
    const double ss = SuccessScore(flags, StageWeights::Uniform());
    EXPECT_GE(ss, 100.0 * SuccessRate(eps) - 1e-9);
    EXPECT_GE(ss, 0.0);
    EXPECT_LE(ss, 100.0 + 1e-9);
  }
}

TEST(MetricsPropertyTest, ScoreLinearInWeights) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto flags = RandomFlags(rng, 10);
    const StageWeights a = RandomWeights(rng);
    const StageWeights b = RandomWeights(rng);
    const double lambda = u(rng);
    StageWeights mix;
    for (int k = 0; k < 5; ++k) mix.w.push_back(lambda * a.w[k] + (1.0 - lambda) * b.w[k]);
    EXPECT_NEAR(SuccessScore(flags, mix),
                lambda * SuccessScore(flags, a) + (1.0 - lambda) * SuccessScore(flags, b), 1e-9);
  }
}

TEST(MetricsPropertyTest, PermutationInvariant) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    auto flags = RandomFlags(rng, 20);
    std::vector<int> sev;
    for (int i = 0; i < 20; ++i) sev.push_back(static_cast<int>(rng() % 6));
    const StageWeights w = RandomWeights(rng);
    const double ss = SuccessScore(flags, w);
    const double dr = DamageRate(sev);
    const auto stages = StagewiseSuccess(flags);
    std::shuffle(flags.begin(), flags.end(), rng);
    std::shuffle(sev.begin(), sev.end(), rng);
    EXPECT_NEAR(SuccessScore(flags, w), ss, 1e-9);
    EXPECT_NEAR(DamageRate(sev), dr, 1e-12);
    EXPECT_EQ(StagewiseSuccess(flags), stages);
  }
}

TEST(MetricsPropertyTest, DamageRateMonotone) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> sev;
    for (int i = 0; i < 10; ++i) sev.push_back(static_cast<int>(rng() % 5));
    const double before = DamageRate(sev);
    sev[rng() % sev.size()] += 1;
    EXPECT_GE(DamageRate(sev), before);
  }
}

}  // namespace
}  // namespace harvest::metrics
