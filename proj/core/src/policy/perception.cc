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

#include "harvest/policy/perception.h"

#include <cmath>
#include <limits>

#include "harvest/common/error.h"

namespace harvest::policy {

std::string_view ViewName(ViewId v) {
  switch (v) {
    case ViewId::kLeftScene:
      return "left_scene";
    case ViewId::kRightScene:
      return "right_scene";
    case ViewId::kWrist:
      return "wrist";
  }
  return "unknown";
}

ViewConfig ViewConfig::AllViews() { return ViewConfig{}; }

ViewConfig ViewConfig::DualScene() {
  ViewConfig c;
  c.views[static_cast<int>(ViewId::kWrist)].enabled = false;
  return c;
}

ViewConfig ViewConfig::SingleScene() {
  ViewConfig c = DualScene();
  c.views[static_cast<int>(ViewId::kRightScene)].enabled = false;
  return c;
}

std::string ViewConfig::Label() const {
  std::string out;
  for (int i = 0; i < kNumViews; ++i) {
    if (!views[i].enabled) continue;
    if (!out.empty()) out += '+';
    out += ViewName(static_cast<ViewId>(i));
  }
  return out.empty() ? "none" : out;
}

void ViewConfig::Validate() const {
  bool any = false;
  for (const auto& v : views) {
    if (!(v.noise_scale >= 0.0) || !std::isfinite(v.noise_scale)) {
      throw ValidationError("view noise_scale must be finite and >= 0");
    }
    any = any || v.enabled;
  }
  if (!any) throw ValidationError("at least one camera view must be enabled");
  if (!(near_reference >= 0.0) || !(min_distance > 0.0) || !(wrist_range > 0.0) ||
      !(engage_distance >= 0.0)) {
    throw ValidationError("view distances out of range");
  }
  if (!(wrist_occlusion_probability >= 0.0 && wrist_occlusion_probability <= 1.0)) {
    throw ValidationError("wrist_occlusion_probability must lie in [0, 1]");
  }
  for (int i = 0; i < 3; ++i) {
    if (!(illumination_factor[i] > 0.0) || !(occlusion_factor[i] > 0.0)) {
      throw ValidationError("view noise factors must be positive");
    }
  }
}

double ViewNoiseSigma(const ViewConfig& config, ViewId view, double d,
                      sim::Illumination illumination, sim::Occlusion occlusion) {
  const ViewSettings& s = config.views[static_cast<int>(view)];
  if (view == ViewId::kWrist) return s.noise_scale;
  const double near = 1.0 + config.near_reference / std::max(d, config.min_distance);
  return s.noise_scale * near * config.illumination_factor[static_cast<int>(illumination)] *
         config.occlusion_factor[static_cast<int>(occlusion)];
}

Observation DegradeObservation(const sim::PlantScene& scene, const sim::EEState& ee,
                               const ViewConfig& config, Rng& rng, double now,
                               const std::string& goal) {
  Observation obs;
  obs.timestamp = now;
  obs.goal = goal;
  obs.tray = scene.tray;
  obs.home = scene.home;
  obs.obstacles = scene.obstacles;
  obs.state = sim::ToStateVector(ee);
  for (int v = 0; v < kNumViews; ++v) {
    if (config.views[v].enabled) obs.views.push_back({static_cast<ViewId>(v), false, {}});
  }

  std::normal_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (const sim::Fruit& f : scene.fruits) {
    if (f.location == sim::FruitLocation::kDropped) continue;
    const double d = Distance(ee.position, f.position);
    double weight_sum = 0.0;
    Vec3 weighted;
    int exact = 0;
    Vec3 exact_sum;
    bool seen = false;
    for (ViewPercepts& vp : obs.views) {
      const ViewSettings& s = config.views[static_cast<int>(vp.view)];
      if (s.close_range_only && d > config.wrist_range) continue;
      if (vp.view == ViewId::kWrist && d <= config.engage_distance &&
          uniform(rng) < config.wrist_occlusion_probability) {
        vp.occluded = true;
        continue;
      }
      const double sigma = ViewNoiseSigma(config, vp.view, d, scene.tags.illumination, f.occlusion);
      Vec3 noise{unit(rng), unit(rng), unit(rng)};
      FruitPercept p;
      p.fruit_id = f.id;
      p.position = f.position + noise * sigma;
      p.ripeness = f.ripeness;
      p.attached = f.attached;
      p.held = f.location == sim::FruitLocation::kHeld;
      p.in_tray = f.location == sim::FruitLocation::kInTray;
      vp.fruits.push_back(p);
      seen = true;
      if (sigma == 0.0) {
        ++exact;
        exact_sum = exact_sum + p.position;
      } else {
        const double w = 1.0 / (sigma * sigma);
        weight_sum += w;
        weighted = weighted + p.position * w;
      }
    }
    if (!seen) continue;
    FruitPercept fused;
    fused.fruit_id = f.id;
    fused.ripeness = f.ripeness;
    fused.attached = f.attached;
    fused.held = f.location == sim::FruitLocation::kHeld;
    fused.in_tray = f.location == sim::FruitLocation::kInTray;
    fused.position = exact > 0 ? exact_sum * (1.0 / exact) : weighted * (1.0 / weight_sum);
    obs.fused.push_back(fused);
  }
  return obs;
}

}  // namespace harvest::policy
