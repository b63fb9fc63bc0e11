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

#ifndef HARVEST_STORE_RECORD_H_
#define HARVEST_STORE_RECORD_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "harvest/runtime/episode_log.h"
#include "harvest/runtime/timing.h"
#include "harvest/sim/types.h"
#include "harvest/stream/action.h"

namespace harvest::store {

inline constexpr int kSchemaVersion = 1;

struct FruitSummary {
  int id = 0;
  bool ripe = false;
  int severity = 0;
  sim::FruitLocation location = sim::FruitLocation::kAttached;

  bool operator==(const FruitSummary&) const = default;
};

struct EpisodeManifest {
  int schema_version = kSchemaVersion;
  std::string id;
  std::uint64_t seed = 0;
  std::string source = "sim";  // "sim" or "teleop"
  std::string prompt;
  nlohmann::json config = nlohmann::json::object();
  std::string config_digest;
  sim::SceneTags tags;
  sim::PlantScene scene;  // initial scene
  double start_time = 0.0;
  double end_time = 0.0;
  std::size_t tick_count = 0;
  bool success = false;
  int retries = 0;
  std::vector<sim::AttemptRecord> attempts;
  std::vector<FruitSummary> fruits;
  runtime::TimingReport timing;
  std::optional<std::string> fault;
  std::string observations = "perceived fruit summaries only; no image payloads";

  bool operator==(const EpisodeManifest&) const = default;
};

struct EpisodeRecord {
  EpisodeManifest manifest;
  std::vector<stream::TimedAction> actions;
  std::vector<runtime::StateSample> states;
  std::vector<sim::SimEvent> events;
  std::vector<runtime::TickStats> ticks;

  bool operator==(const EpisodeRecord&) const = default;
};

// Throws ValidationError unless every stream is sorted by timestamp.
void CheckSorted(const EpisodeRecord& record);

// Writes `root/<id>/` atomically (staging directory + rename). Refuses
// unsorted streams, empty ids and ids that already exist. Returns the
// episode directory.
std::filesystem::path WriteEpisode(const std::filesystem::path& root, const EpisodeRecord& record);

// Throws ValidationError on a malformed or missing episode and on an
// unsupported schema version.
EpisodeRecord LoadEpisode(const std::filesystem::path& dir);

// Episode directories under root, sorted by name.
std::vector<std::filesystem::path> ListEpisodes(const std::filesystem::path& root);

nlohmann::json ManifestToJson(const EpisodeManifest& m);
EpisodeManifest ManifestFromJson(const nlohmann::json& j);

}  // namespace harvest::store

#endif  // HARVEST_STORE_RECORD_H_
