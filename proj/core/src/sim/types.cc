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

#include "harvest/sim/types.h"

#include <algorithm>

namespace harvest::sim {

std::array<double, kStateDims> ToStateVector(const EEState& ee) {
  return {ee.position.x,    ee.position.y,    ee.position.z,
          ee.orientation.x, ee.orientation.y, ee.orientation.z,
          ee.bend,          static_cast<double>(static_cast<int>(ee.pump))};
}

namespace {

template <typename E, std::size_t N>
std::optional<E> ParseByName(std::string_view s, const std::array<std::string_view, N>& names) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == s) return static_cast<E>(i);
  }
  return std::nullopt;
}

constexpr std::array<std::string_view, 3> kOcclusionNames = {"mild", "moderate", "heavy"};
constexpr std::array<std::string_view, 3> kIlluminationNames = {"low", "normal",
                                                                "strong_specular"};
constexpr std::array<std::string_view, 2> kMaturityNames = {"red_only", "mixed"};
constexpr std::array<std::string_view, 10> kEventNames = {
    "stage_entered", "detached",  "slip",  "rotate_no_suction", "placed",
    "released",      "collision", "damage", "retry",            "estop"};
constexpr std::array<std::string_view, 3> kOutcomeNames = {"in_progress", "succeeded",
                                                            "failed"};

}  // namespace

std::string_view OcclusionName(Occlusion o) { return kOcclusionNames[static_cast<int>(o)]; }
std::string_view IlluminationName(Illumination i) {
  return kIlluminationNames[static_cast<int>(i)];
}
std::string_view MaturityName(Maturity m) { return kMaturityNames[static_cast<int>(m)]; }
std::optional<Occlusion> ParseOcclusion(std::string_view s) {
  return ParseByName<Occlusion>(s, kOcclusionNames);
}
std::optional<Illumination> ParseIllumination(std::string_view s) {
  return ParseByName<Illumination>(s, kIlluminationNames);
}
std::optional<Maturity> ParseMaturity(std::string_view s) {
  return ParseByName<Maturity>(s, kMaturityNames);
}
std::string_view EventKindName(EventKind k) { return kEventNames[static_cast<int>(k)]; }
std::optional<EventKind> ParseEventKind(std::string_view s) {
  return ParseByName<EventKind>(s, kEventNames);
}
std::string_view AttemptOutcomeName(AttemptOutcome o) {
  return kOutcomeNames[static_cast<int>(o)];
}
std::optional<AttemptOutcome> ParseAttemptOutcome(std::string_view s) {
  return ParseByName<AttemptOutcome>(s, kOutcomeNames);
}

int PlantScene::RipeCount() const {
  return static_cast<int>(
      std::count_if(fruits.begin(), fruits.end(), [](const Fruit& f) { return f.IsRipe(); }));
}

const Fruit* PlantScene::FindFruit(int id) const {
  auto it = std::find_if(fruits.begin(), fruits.end(), [id](const Fruit& f) { return f.id == id; });
  return it == fruits.end() ? nullptr : &*it;
}

Fruit* PlantScene::FindFruit(int id) {
  auto it = std::find_if(fruits.begin(), fruits.end(), [id](const Fruit& f) { return f.id == id; });
  return it == fruits.end() ? nullptr : &*it;
}

int AttemptRecord::CompletedStages() const {
  return static_cast<int>(std::count(flags.begin(), flags.end(), true));
}

}  // namespace harvest::sim
