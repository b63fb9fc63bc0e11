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

#ifndef HARVEST_POLICY_OBSERVATION_H_
#define HARVEST_POLICY_OBSERVATION_H_

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "harvest/common/geometry.h"
#include "harvest/sim/types.h"

namespace harvest::policy {

inline constexpr std::string_view kDefaultPrompt =
    "Pick all ripe strawberries and place them into the tray.";

enum class ViewId { kLeftScene = 0, kRightScene = 1, kWrist = 2 };
inline constexpr int kNumViews = 3;

std::string_view ViewName(ViewId v);

struct FruitPercept {
  int fruit_id = -1;
  Vec3 position;
  double ripeness = 0.0;
  bool attached = true;
  bool held = false;
  bool in_tray = false;

  bool IsRipe() const { return ripeness >= sim::kRipeThreshold; }
  bool operator==(const FruitPercept&) const = default;
};

struct ViewPercepts {
  ViewId view = ViewId::kLeftScene;
  bool occluded = false;
  std::vector<FruitPercept> fruits;
};

// What a policy may see. Fruit positions are noisy per view; `fused` is the
// inverse-variance combination of the views that saw each fruit. Tray and
// home are fixed task context.
struct Observation {
  double timestamp = 0.0;
  std::vector<ViewPercepts> views;
  std::vector<FruitPercept> fused;
  std::vector<sim::Obstacle> obstacles;
  std::array<double, sim::kStateDims> state{};
  std::string goal{kDefaultPrompt};
  Box tray;
  Vec3 home;

  Vec3 ee_position() const { return {state[0], state[1], state[2]}; }
  double bend() const { return state[6]; }
};

}  // namespace harvest::policy

#endif  // HARVEST_POLICY_OBSERVATION_H_
