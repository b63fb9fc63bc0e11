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

#ifndef HARVEST_STORE_ANALYSIS_H_
#define HARVEST_STORE_ANALYSIS_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "harvest/store/record.h"

namespace harvest::store {

struct AlignedRow {
  std::size_t tick = 0;
  double time = 0.0;
  std::optional<runtime::StateSample> state;  // empty marks a gap
  std::optional<stream::ActionVector> action;
  std::vector<sim::SimEvent> events;
};

// One row per tick. Tick k owns events in [t_k, t_{k+1}), so an event on a
// boundary goes to the later tick; events before the first tick go to the
// first row and events after the last tick to the last row. States are
// joined when they lie within half a period of the tick.
std::vector<AlignedRow> AlignStreams(const EpisodeRecord& record);

struct CoverageReport {
  std::map<std::string, double> illumination;
  std::map<std::string, double> occlusion;
  std::map<std::string, double> visible_targets;  // "1", "2", "3+"
  std::map<std::string, double> maturity;
  std::size_t episodes = 0;
  double total_hours = 0.0;
  std::size_t attempts = 0;  // ended attempts plus unfinished ones that made progress
  std::size_t successful_attempts = 0;
  std::optional<double> mean_pick_duration;  // seconds, over successful attempts
  std::optional<double> mean_retries;        // failed attempts per successful pick
};

// Throws ValidationError on an empty set.
CoverageReport DatasetStats(std::span<const EpisodeManifest> manifests);
nlohmann::json ToJson(const CoverageReport& report);

struct ReplayOptions {
  std::optional<std::uint64_t> seed_override;  // negative controls only
};

struct ReplayResult {
  std::vector<runtime::StateSample> states;
  std::vector<sim::SimEvent> events;  // timestamps rounded like stored ones
  // First tick whose state or simulator events differ from the record.
  std::optional<std::size_t> first_divergence;
  bool truncated = false;  // the record holds fewer actions than ticks
  std::size_t replayed = 0;
};

// Re-executes the recorded actions through a fresh simulator built from the
// manifest scene and `run_config["sim"]`, comparing states and simulator
// events (estops excluded) against the record. Throws ValidationError carrying a
// JSON diff when the digest of `run_config` differs from the record's.
ReplayResult Replay(const EpisodeRecord& record, const nlohmann::json& run_config,
                    const ReplayOptions& options = {});

}  // namespace harvest::store

#endif  // HARVEST_STORE_ANALYSIS_H_
