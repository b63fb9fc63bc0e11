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

#include "harvest/store/analysis.h"

#include <algorithm>
#include <cmath>

#include "harvest/common/error.h"
#include "harvest/sim/simulator.h"
#include "harvest/store/json_codec.h"

namespace harvest::store {

std::vector<AlignedRow> AlignStreams(const EpisodeRecord& record) {
  std::vector<AlignedRow> rows;
  const auto& ticks = record.ticks;
  if (ticks.empty()) return rows;
  rows.reserve(ticks.size());
  for (const auto& t : ticks) {
    AlignedRow row;
    row.tick = t.index;
    row.time = t.scheduled;
    rows.push_back(std::move(row));
  }
  const double half = ticks.size() > 1 ? 0.5 * (ticks[1].scheduled - ticks[0].scheduled) : 0.0;

  auto row_for = [&](double ts) {
    // Last tick whose start is <= ts; earlier timestamps clamp to row 0.
    auto it = std::upper_bound(ticks.begin(), ticks.end(), ts,
                               [](double v, const runtime::TickStats& t) { return v < t.scheduled; });
    return it == ticks.begin() ? std::size_t{0} : static_cast<std::size_t>(it - ticks.begin()) - 1;
  };
  for (const auto& e : record.events) rows[row_for(e.timestamp)].events.push_back(e);
  for (const auto& a : record.actions) {
    const std::size_t r = row_for(a.timestamp + half);
    if (std::abs(rows[r].time - a.timestamp) <= half + 1e-9) rows[r].action = a.action;
  }
  for (const auto& s : record.states) {
    const std::size_t r = row_for(s.timestamp + half);
    if (std::abs(rows[r].time - s.timestamp) <= half + 1e-9) rows[r].state = s;
  }
  return rows;
}

namespace {

void Normalize(std::map<std::string, double>& counts, double n) {
  for (auto& [k, v] : counts) v /= n;
}

}  // namespace

CoverageReport DatasetStats(std::span<const EpisodeManifest> manifests) {
  if (manifests.empty()) throw ValidationError("dataset statistics need at least one episode");
  CoverageReport r;
  r.episodes = manifests.size();
  double seconds = 0.0;
  double pick_seconds = 0.0;
  std::size_t failed = 0;
  for (const EpisodeManifest& m : manifests) {
    seconds += m.end_time - m.start_time;
    r.illumination[std::string(sim::IlluminationName(m.tags.illumination))] += 1.0;
    r.occlusion[std::string(sim::OcclusionName(m.tags.occlusion))] += 1.0;
    r.visible_targets[m.tags.visible_targets >= 3 ? "3+" : std::to_string(m.tags.visible_targets)] +=
        1.0;
    r.maturity[std::string(sim::MaturityName(m.tags.maturity))] += 1.0;
    for (const sim::AttemptRecord& a : m.attempts) {
      if (a.outcome == sim::AttemptOutcome::kSucceeded) {
        ++r.attempts;
        ++r.successful_attempts;
        pick_seconds += a.end_time.value_or(a.start_time) - a.start_time;
      } else if (a.outcome == sim::AttemptOutcome::kFailed || a.CompletedStages() > 0) {
        ++r.attempts;
        ++failed;
      }
    }
  }
  const double n = static_cast<double>(manifests.size());
  Normalize(r.illumination, n);
  Normalize(r.occlusion, n);
  Normalize(r.visible_targets, n);
  Normalize(r.maturity, n);
  r.total_hours = seconds / 3600.0;
  if (r.successful_attempts > 0) {
    const double s = static_cast<double>(r.successful_attempts);
    r.mean_pick_duration = pick_seconds / s;
    r.mean_retries = static_cast<double>(failed) / s;
  }
  return r;
}

nlohmann::json ToJson(const CoverageReport& r) {
  auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
  return {{"illumination", r.illumination},
          {"occlusion", r.occlusion},
          {"visible_targets", r.visible_targets},
          {"maturity", r.maturity},
          {"episodes", r.episodes},
          {"total_hours", r.total_hours},
          {"attempts", r.attempts},
          {"successful_attempts", r.successful_attempts},
          {"mean_pick_duration", opt(r.mean_pick_duration)},
          {"mean_retries", opt(r.mean_retries)}};
}

ReplayResult Replay(const EpisodeRecord& record, const nlohmann::json& run_config,
                    const ReplayOptions& options) {
  const EpisodeManifest& m = record.manifest;
  if (ConfigDigest(run_config) != m.config_digest) {
    throw ValidationError("config digest mismatch; refusing to replay. diff: " +
                          Json::diff(m.config, run_config).dump());
  }
  sim::SimConfig sim_config;
  if (run_config.contains("sim")) sim_config = SimConfigFromJson(run_config["sim"]);
  double dt = 1.0 / 30.0;
  if (run_config.contains("control")) dt = ControlConfigFromJson(run_config["control"]).period();

  // Estop events come from the runtime, not the simulator.
  std::vector<sim::SimEvent> expected;
  for (const sim::SimEvent& e : record.events) {
    if (e.kind != sim::EventKind::kEStop) expected.push_back(e);
  }
  std::size_t matched = 0;

  sim::Simulator simulator(m.scene, sim_config, options.seed_override.value_or(m.seed));
  ReplayResult out;
  out.truncated = record.actions.size() < m.tick_count;
  for (std::size_t i = 0; i < record.actions.size(); ++i) {
    // Stored times are rounded; the runtime stepped at index * period.
    const std::size_t index = i < record.ticks.size() ? record.ticks[i].index : i;
    const double now = static_cast<double>(index) * dt;
    runtime::StateSample s{record.actions[i].timestamp, sim::ToStateVector(simulator.ee())};
    if (!out.first_divergence &&
        (i >= record.states.size() || s.state != record.states[i].state)) {
      out.first_divergence = i;
    }
    out.states.push_back(s);
    for (sim::SimEvent e : simulator.Step(record.actions[i].action, now, dt)) {
      e.timestamp = QuantizeTime(e.timestamp);
      if (!out.first_divergence &&
          (matched >= expected.size() || !(EventFromJson(ToJson(expected[matched])) == e))) {
        out.first_divergence = i;
      }
      ++matched;
      out.events.push_back(e);
    }
    ++out.replayed;
  }
  if (!out.first_divergence && !out.truncated && matched < expected.size()) {
    out.first_divergence = out.replayed == 0 ? 0 : out.replayed - 1;
  }
  return out;
}

}  // namespace harvest::store
