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

#include "harvest/sim/scene.h"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "harvest/common/error.h"
#include "harvest/common/rng.h"

namespace harvest::sim {

namespace {

template <std::size_t N>
void ValidateFactor(const std::array<double, N>& r, const char* name) {
  double sum = 0.0;
  for (double v : r) {
    if (!(v >= 0.0)) throw ValidationError(std::string("ratios.") + name + " has a negative entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ValidationError(std::string("ratios.") + name + " must sum to 1, got " +
                          std::to_string(sum));
  }
}

template <std::size_t N>
int SampleCategory(const std::array<double, N>& ratios, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double x = u(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    acc += ratios[i];
    if (x < acc) return static_cast<int>(i);
  }
  // x landed in the rounding slack above the cumulative sum.
  for (std::size_t i = N; i-- > 0;) {
    if (ratios[i] > 0.0) return static_cast<int>(i);
  }
  return 0;
}

double Uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Vec3 UniformIn(const Box& b, Rng& rng) {
  return {Uniform(rng, b.min.x, b.max.x), Uniform(rng, b.min.y, b.max.y),
          Uniform(rng, b.min.z, b.max.z)};
}

}  // namespace

void FactorRatios::Validate() const {
  ValidateFactor(illumination, "illumination");
  ValidateFactor(occlusion, "occlusion");
  ValidateFactor(visible_targets, "visible_targets");
  ValidateFactor(maturity, "maturity");
}

void SceneConfig::Validate() const {
  ratios.Validate();
  if (!(workspace.Volume() > 0.0)) throw ValidationError("scene.workspace has no volume");
  if (!workspace.Contains(tray.min) || !workspace.Contains(tray.max)) {
    throw ValidationError("scene.tray must lie inside the workspace");
  }
  if (!workspace.Contains(home)) throw ValidationError("scene.home must lie inside the workspace");
  if (max_targets < 3) throw ValidationError("scene.max_targets must be >= 3");
  for (int i = 0; i < 3; ++i) {
    if (min_leaves[i] < 0 || max_leaves[i] < min_leaves[i]) {
      throw ValidationError("scene leaf count ranges are invalid");
    }
  }
}

PlantScene GenerateScene(const SceneConfig& config, std::uint64_t seed) {
  config.Validate();
  Rng rng(DeriveSeed(seed, rng_stream::kScene));

  PlantScene scene;
  scene.tray = config.tray;
  scene.workspace = config.workspace;
  scene.home = config.home;
  scene.tags.illumination = static_cast<Illumination>(SampleCategory(config.ratios.illumination, rng));
  scene.tags.occlusion = static_cast<Occlusion>(SampleCategory(config.ratios.occlusion, rng));
  const int target_bucket = SampleCategory(config.ratios.visible_targets, rng);
  scene.tags.maturity = static_cast<Maturity>(SampleCategory(config.ratios.maturity, rng));

  int ripe = target_bucket + 1;
  if (target_bucket == 2) {
    ripe = std::uniform_int_distribution<int>(3, config.max_targets)(rng);
  }
  scene.tags.visible_targets = ripe;
  const int unripe =
      scene.tags.maturity == Maturity::kMixed ? std::uniform_int_distribution<int>(1, 2)(rng) : 0;

  // Rejection sampling keeps fruits apart; the attempt budget makes it total.
  std::vector<Vec3> centres;
  for (int n = 0; n < ripe + unripe; ++n) {
    Vec3 p = UniformIn(config.fruit_region, rng);
    for (int tries = 0; tries < 200; ++tries) {
      bool clear = true;
      for (const Vec3& c : centres) {
        if (Distance(c, p) < config.min_fruit_separation) clear = false;
      }
      if (clear) break;
      p = UniformIn(config.fruit_region, rng);
    }
    centres.push_back(p);
  }

  for (int n = 0; n < ripe + unripe; ++n) {
    Fruit f;
    f.id = n;
    f.position = centres[n];
    f.ripeness = n < ripe ? Uniform(rng, 0.85, 1.0) : Uniform(rng, 0.15, 0.5);
    f.occlusion = scene.tags.occlusion;
    scene.fruits.push_back(f);
  }

  const int level = static_cast<int>(scene.tags.occlusion);
  for (int n = 0; n < ripe; ++n) {
    const int leaves = std::uniform_int_distribution<int>(config.min_leaves[level],
                                                          config.max_leaves[level])(rng);
    for (int l = 0; l < leaves; ++l) {
      Obstacle o;
      o.radius = Uniform(rng, config.leaf_radius_min, config.leaf_radius_max);
      const double angle = Uniform(rng, 0.0, 2.0 * std::numbers::pi);
      const double lateral = o.radius + Uniform(rng, 0.02, 0.04);
      o.center = centres[n] + Vec3{lateral * std::cos(angle), lateral * std::sin(angle),
                                   Uniform(rng, -0.05, 0.01)};
      scene.obstacles.push_back(o);
    }
  }
  return scene;
}

PlantScene SingleFruitScene(const SceneConfig& config, Vec3 fruit_position) {
  PlantScene scene;
  scene.tray = config.tray;
  scene.workspace = config.workspace;
  scene.home = config.home;
  scene.tags = SceneTags{Illumination::kNormal, Occlusion::kMild, 1, Maturity::kRedOnly};
  Fruit f;
  f.id = 0;
  f.position = fruit_position;
  f.ripeness = 0.95;
  scene.fruits.push_back(f);
  return scene;
}

}  // namespace harvest::sim
