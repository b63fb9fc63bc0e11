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

#ifndef HARVEST_STORE_JSON_CODEC_H_
#define HARVEST_STORE_JSON_CODEC_H_

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "harvest/policy/perception.h"
#include "harvest/policy/policy.h"
#include "harvest/policy/scripted_policy.h"
#include "harvest/runtime/config.h"
#include "harvest/runtime/episode_log.h"
#include "harvest/runtime/timing.h"
#include "harvest/sim/scene.h"
#include "harvest/sim/simulator.h"
#include "harvest/stream/action.h"

// JSON encoding of every type that is persisted or configured from a file.
// Decoders start from the type's defaults, so partial objects are fine;
// unknown keys and type mismatches raise ValidationError.
namespace harvest::store {

using Json = nlohmann::json;

// Throws ValidationError when `j` is not an object or holds a key outside
// `allowed`.
void CheckKeys(const Json& j, std::initializer_list<std::string_view> allowed,
               std::string_view context);

std::string_view LocationName(sim::FruitLocation l);
std::optional<sim::FruitLocation> ParseLocation(std::string_view s);

// Timestamps are persisted with microsecond resolution.
double QuantizeTime(double seconds);

// FNV-1a 64-bit over the compact dump, as 16 lowercase hex digits.
std::string ConfigDigest(const Json& config);

Json ToJson(const Vec3& v);
Vec3 Vec3FromJson(const Json& j);
Json ToJson(const Box& b);
Box BoxFromJson(const Json& j);

Json ToJson(const stream::ActionVector& a);
stream::ActionVector ActionFromJson(const Json& j);
Json ToJson(const stream::TimedAction& a);
stream::TimedAction TimedActionFromJson(const Json& j);

Json ToJson(const sim::SimEvent& e);
sim::SimEvent EventFromJson(const Json& j);
Json ToJson(const sim::AttemptRecord& a);
sim::AttemptRecord AttemptFromJson(const Json& j);
Json ToJson(const sim::SceneTags& t);
sim::SceneTags TagsFromJson(const Json& j);
Json ToJson(const sim::PlantScene& s);
sim::PlantScene SceneFromJson(const Json& j);

Json ToJson(const sim::SceneConfig& c);
sim::SceneConfig SceneConfigFromJson(const Json& j);
Json ToJson(const sim::SimConfig& c);
sim::SimConfig SimConfigFromJson(const Json& j);

Json ToJson(const policy::ViewConfig& c);
policy::ViewConfig ViewConfigFromJson(const Json& j);
Json ToJson(const policy::LatencyModel& m);
policy::LatencyModel LatencyFromJson(const Json& j);
Json ToJson(const policy::PolicySpec& s);
policy::PolicySpec PolicySpecFromJson(const Json& j);
Json ToJson(const policy::ScriptedPolicyConfig& c);
policy::ScriptedPolicyConfig ScriptedConfigFromJson(const Json& j);

Json ToJson(const runtime::ControlConfig& c);
runtime::ControlConfig ControlConfigFromJson(const Json& j);
Json ToJson(const runtime::TickStats& t);
runtime::TickStats TickFromJson(const Json& j);
Json ToJson(const runtime::StateSample& s);
runtime::StateSample StateFromJson(const Json& j);
Json ToJson(const runtime::TimingReport& r);
runtime::TimingReport TimingFromJson(const Json& j);

}  // namespace harvest::store

#endif  // HARVEST_STORE_JSON_CODEC_H_
