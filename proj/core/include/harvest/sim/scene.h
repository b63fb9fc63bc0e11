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

#ifndef HARVEST_SIM_SCENE_H_
#define HARVEST_SIM_SCENE_H_

#include <array>
#include <cstdint>

#include "harvest/common/geometry.h"
#include "harvest/sim/types.h"

namespace harvest::sim {

// Per-factor category probabilities. Defaults are the dataset coverage
// ratios of the real demonstration set.
struct FactorRatios {
  std::array<double, 3> illumination{0.18, 0.62, 0.20};  // low, normal, strong specular
  std::array<double, 3> occlusion{0.60, 0.25, 0.15};     // mild, moderate, heavy
  std::array<double, 3> visible_targets{0.62, 0.30, 0.08};  // 1, 2, >=3
  std::array<double, 2> maturity{0.71, 0.29};            // red only, mixed

  // Throws ValidationError when a factor has a negative entry or does not sum
  // to 1 within 1e-9.
  void Validate() const;
};

struct SceneConfig {
  FactorRatios ratios;
  Box workspace{{-0.40, -0.40, 0.00}, {0.40, 0.40, 0.60}};
  Box tray{{-0.32, -0.30, 0.04}, {-0.16, -0.14, 0.14}};
  Vec3 home{0.0, -0.10, 0.20};
  // Region fruit centres are drawn from.
  Box fruit_region{{-0.06, 0.10, 0.30}, {0.22, 0.24, 0.42}};
  double min_fruit_separation = 0.06;
  int max_targets = 4;  // the ">= 3" category draws uniformly from 3..max_targets
  // Leaves per ripe fruit by occlusion level (inclusive ranges).
  std::array<int, 3> min_leaves{0, 1, 2};
  std::array<int, 3> max_leaves{1, 2, 3};
  double leaf_radius_min = 0.015;
  double leaf_radius_max = 0.025;

  void Validate() const;
};

// Deterministic per seed. Ripe targets are counted by `visible_targets`;
// mixed-maturity scenes add one or two unripe fruits on top.
PlantScene GenerateScene(const SceneConfig& config, std::uint64_t seed);

// Single ripe, unoccluded fruit straight above-ahead of home; used by the
// acceptance timing comparison and examples.
PlantScene SingleFruitScene(const SceneConfig& config, Vec3 fruit_position);

}  // namespace harvest::sim

#endif  // HARVEST_SIM_SCENE_H_
