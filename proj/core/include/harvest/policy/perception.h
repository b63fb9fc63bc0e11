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

#ifndef HARVEST_POLICY_PERCEPTION_H_
#define HARVEST_POLICY_PERCEPTION_H_

#include <array>
#include <string>

#include "harvest/common/rng.h"
#include "harvest/policy/observation.h"
#include "harvest/sim/types.h"

namespace harvest::policy {

struct ViewSettings {
  bool enabled = true;
  double noise_scale = 0.0;        // metres (1-sigma, per axis)
  bool close_range_only = false;   // only reports fruits within wrist_range
};

// Camera-view configuration. Scene views lose precision as the gripper
// closes in: sigma = scale * (1 + near_reference / max(d, min_distance)).
// The wrist view is precise but short-sighted and may be occluded at
// engage range.
struct ViewConfig {
  std::array<ViewSettings, kNumViews> views{{
      {true, 0.0020, false},
      {true, 0.0020, false},
      {true, 0.0008, true},
  }};
  double near_reference = 0.02;
  double min_distance = 0.005;
  double wrist_range = 0.15;
  double wrist_occlusion_probability = 0.1;
  double engage_distance = 0.03;
  // Scene-view noise multipliers indexed by Illumination / Occlusion.
  std::array<double, 3> illumination_factor{1.5, 1.0, 1.3};
  std::array<double, 3> occlusion_factor{1.0, 1.4, 2.0};

  static ViewConfig AllViews();
  static ViewConfig DualScene();
  static ViewConfig SingleScene();

  bool enabled(ViewId v) const { return views[static_cast<int>(v)].enabled; }
  std::string Label() const;
  void Validate() const;
};

// Per-view noise sigma for a fruit at distance `d` from the end effector.
double ViewNoiseSigma(const ViewConfig& config, ViewId view, double d,
                      sim::Illumination illumination, sim::Occlusion occlusion);

// Builds the observation of `scene` as seen through `config`. Draws are made
// in a fixed order (fruit-major, view-minor), so the result is a pure function
// of the inputs and the rng state.
Observation DegradeObservation(const sim::PlantScene& scene, const sim::EEState& ee,
                               const ViewConfig& config, Rng& rng, double now,
                               const std::string& goal = std::string(kDefaultPrompt));

}  // namespace harvest::policy

#endif  // HARVEST_POLICY_PERCEPTION_H_
