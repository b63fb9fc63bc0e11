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

#include "harvest/store/record.h"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <system_error>

#include "harvest/common/error.h"
#include "harvest/store/json_codec.h"

namespace harvest::store {

namespace fs = std::filesystem;

namespace {

constexpr const char* kManifest = "manifest.json";
constexpr const char* kActions = "actions.ndjson";
constexpr const char* kStates = "states.ndjson";
constexpr const char* kEvents = "events.ndjson";
constexpr const char* kTicks = "ticks.ndjson";

template <typename T, typename Key>
bool Sorted(const std::vector<T>& v, Key key, bool strict) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (strict ? !(key(v[i - 1]) < key(v[i])) : key(v[i]) < key(v[i - 1])) return false;
  }
  return true;
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.close();
  if (!out) throw RuntimeFault("failed writing " + path.string());
}

template <typename T>
std::string ToNdjson(const std::vector<T>& items) {
  std::string out;
  for (const T& item : items) {
    out += ToJson(item).dump();
    out += '\n';
  }
  return out;
}

std::string ReadText(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("missing episode file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename T, typename Decode>
std::vector<T> FromNdjson(const fs::path& path, Decode decode) {
  std::vector<T> out;
  std::istringstream lines(ReadText(path));
  std::string line;
  std::size_t n = 0;
  while (std::getline(lines, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      out.push_back(decode(Json::parse(line)));
    } catch (const Json::exception& e) {
      throw ValidationError(path.filename().string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

sim::FruitLocation LocationOrThrow(const std::string& s) {
  if (auto l = ParseLocation(s)) return *l;
  throw ValidationError("unknown fruit location '" + s + "'");
}

}  // namespace

void CheckSorted(const EpisodeRecord& r) {
  auto ts = [](const auto& x) { return x.timestamp; };
  if (!Sorted(r.actions, ts, true)) throw ValidationError("action stream is not sorted");
  if (!Sorted(r.states, ts, true)) throw ValidationError("state stream is not sorted");
  if (!Sorted(r.events, ts, false)) throw ValidationError("event stream is not sorted");
  if (!Sorted(r.ticks, [](const runtime::TickStats& t) { return t.scheduled; }, true)) {
    throw ValidationError("tick stream is not sorted");
  }
}

Json ManifestToJson(const EpisodeManifest& m) {
  Json attempts = Json::array();
  for (const auto& a : m.attempts) attempts.push_back(ToJson(a));
  Json fruits = Json::array();
  for (const auto& f : m.fruits) {
    fruits.push_back({{"id", f.id},
                      {"ripe", f.ripe},
                      {"severity", f.severity},
                      {"location", LocationName(f.location)}});
  }
  return {{"schema_version", m.schema_version},
          {"id", m.id},
          {"seed", m.seed},
          {"source", m.source},
          {"prompt", m.prompt},
          {"config", m.config},
          {"config_digest", m.config_digest},
          {"tags", ToJson(m.tags)},
          {"scene", ToJson(m.scene)},
          {"start_time", QuantizeTime(m.start_time)},
          {"end_time", QuantizeTime(m.end_time)},
          {"tick_count", m.tick_count},
          {"success", m.success},
          {"retries", m.retries},
          {"attempts", attempts},
          {"fruits", fruits},
          {"timing", ToJson(m.timing)},
          {"fault", m.fault ? Json(*m.fault) : Json(nullptr)},
          {"observations", m.observations}};
}

EpisodeManifest ManifestFromJson(const Json& j) {
  CheckKeys(j,
            {"schema_version", "id", "seed", "source", "prompt", "config", "config_digest", "tags",
             "scene", "start_time", "end_time", "tick_count", "success", "retries", "attempts",
             "fruits", "timing", "fault", "observations"},
            "manifest");
  EpisodeManifest m;
  try {
    m.schema_version = j.at("schema_version").get<int>();
    if (m.schema_version != kSchemaVersion) {
      throw ValidationError("unsupported schema_version " + std::to_string(m.schema_version));
    }
    m.id = j.at("id").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.source = j.value("source", m.source);
    m.prompt = j.value("prompt", m.prompt);
    m.config = j.value("config", Json::object());
    m.config_digest = j.at("config_digest").get<std::string>();
    if (j.contains("tags")) m.tags = TagsFromJson(j["tags"]);
    if (j.contains("scene")) m.scene = SceneFromJson(j["scene"]);
    m.start_time = j.value("start_time", 0.0);
    m.end_time = j.value("end_time", 0.0);
    m.tick_count = j.value("tick_count", std::size_t{0});
    m.success = j.value("success", false);
    m.retries = j.value("retries", 0);
    for (const Json& a : j.value("attempts", Json::array())) m.attempts.push_back(AttemptFromJson(a));
    for (const Json& f : j.value("fruits", Json::array())) {
      m.fruits.push_back({f.at("id").get<int>(), f.at("ripe").get<bool>(),
                          f.at("severity").get<int>(),
                          LocationOrThrow(f.at("location").get<std::string>())});
    }
    if (j.contains("timing")) m.timing = TimingFromJson(j["timing"]);
    if (j.contains("fault") && !j["fault"].is_null()) m.fault = j["fault"].get<std::string>();
    m.observations = j.value("observations", m.observations);
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("manifest: ") + e.what());
  }
  if (ConfigDigest(m.config) != m.config_digest) {
    throw ValidationError("manifest config digest does not match the stored config");
  }
  return m;
}

fs::path WriteEpisode(const fs::path& root, const EpisodeRecord& record) {
  const std::string& id = record.manifest.id;
  if (id.empty() || id.find('/') != std::string::npos || id.front() == '.') {
    throw ValidationError("episode id must be a non-empty plain name");
  }
  CheckSorted(record);
  fs::create_directories(root);
  const fs::path final_dir = root / id;
  if (fs::exists(final_dir)) throw ValidationError("episode '" + id + "' already exists");

  const fs::path staging = root / ("." + id + ".staging");
  fs::remove_all(staging);
  fs::create_directory(staging);
  WriteText(staging / kManifest, ManifestToJson(record.manifest).dump(2) + "\n");
  WriteText(staging / kActions, ToNdjson(record.actions));
  WriteText(staging / kStates, ToNdjson(record.states));
  WriteText(staging / kEvents, ToNdjson(record.events));
  WriteText(staging / kTicks, ToNdjson(record.ticks));
  std::error_code ec;
  fs::rename(staging, final_dir, ec);
  if (ec) {
    fs::remove_all(staging);
    throw RuntimeFault("could not publish episode '" + id + "': " + ec.message());
  }
  return final_dir;
}

EpisodeRecord LoadEpisode(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ValidationError("no episode at " + dir.string());
  EpisodeRecord r;
  try {
    r.manifest = ManifestFromJson(Json::parse(ReadText(dir / kManifest)));
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("manifest.json: ") + e.what());
  }
  r.actions = FromNdjson<stream::TimedAction>(dir / kActions, TimedActionFromJson);
  r.states = FromNdjson<runtime::StateSample>(dir / kStates, StateFromJson);
  r.events = FromNdjson<sim::SimEvent>(dir / kEvents, EventFromJson);
  r.ticks = FromNdjson<runtime::TickStats>(dir / kTicks, TickFromJson);
  CheckSorted(r);
  return r;
}

std::vector<fs::path> ListEpisodes(const fs::path& root) {
  std::vector<fs::path> out;
  if (!fs::is_directory(root)) return out;
  for (const auto& entry : fs::directory_iterator(root)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_directory() && !name.empty() && name.front() != '.' &&
        fs::exists(entry.path() / kManifest)) {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace harvest::store
