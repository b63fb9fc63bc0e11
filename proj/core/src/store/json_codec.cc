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

#include "harvest/store/json_codec.h"

#include <cmath>
#include <cstdio>
#include <string>

#include "harvest/common/error.h"

namespace harvest::store {

namespace {

template <typename T>
void Get(const Json& j, const char* key, T& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("field '") + key + "': " + e.what());
  }
}

template <typename E, typename Parse>
void GetEnum(const Json& j, const char* key, E& out, Parse parse) {
  auto it = j.find(key);
  if (it == j.end()) return;
  if (!it->is_string()) throw ValidationError(std::string("field '") + key + "' must be a string");
  auto v = parse(it->get<std::string>());
  if (!v) {
    throw ValidationError(std::string("field '") + key + "': unknown value '" +
                          it->get<std::string>() + "'");
  }
  out = *v;
}

void RequireObject(const Json& j, std::string_view context) {
  if (!j.is_object()) throw ValidationError(std::string(context) + " must be a JSON object");
}

std::string_view BlendModeName(stream::BlendMode m) {
  return m == stream::BlendMode::kConstant ? "constant" : "linear_ramp";
}

std::optional<stream::BlendMode> ParseBlendMode(std::string_view s) {
  if (s == "constant") return stream::BlendMode::kConstant;
  if (s == "linear_ramp") return stream::BlendMode::kLinearRamp;
  return std::nullopt;
}

std::optional<policy::LatencyModel::Kind> ParseLatencyKind(std::string_view s) {
  if (s == "constant") return policy::LatencyModel::Kind::kConstant;
  if (s == "lognormal") return policy::LatencyModel::Kind::kLognormal;
  return std::nullopt;
}

Json OptionalTime(const std::optional<double>& t) {
  return t ? Json(QuantizeTime(*t)) : Json(nullptr);
}

std::optional<double> OptionalTimeFromJson(const Json& j) {
  if (j.is_null()) return std::nullopt;
  if (!j.is_number()) throw ValidationError("time must be a number or null");
  return j.get<double>();
}

}  // namespace

std::string_view LocationName(sim::FruitLocation l) {
  switch (l) {
    case sim::FruitLocation::kAttached:
      return "attached";
    case sim::FruitLocation::kHeld:
      return "held";
    case sim::FruitLocation::kInTray:
      return "in_tray";
    case sim::FruitLocation::kDropped:
      return "dropped";
  }
  return "attached";
}

std::optional<sim::FruitLocation> ParseLocation(std::string_view s) {
  for (auto l : {sim::FruitLocation::kAttached, sim::FruitLocation::kHeld,
                 sim::FruitLocation::kInTray, sim::FruitLocation::kDropped}) {
    if (LocationName(l) == s) return l;
  }
  return std::nullopt;
}

void CheckKeys(const Json& j, std::initializer_list<std::string_view> allowed,
               std::string_view context) {
  RequireObject(j, context);
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (std::string_view a : allowed) ok = ok || a == key;
    if (!ok) throw ValidationError("unknown key '" + key + "' in " + std::string(context));
  }
}

double QuantizeTime(double seconds) { return std::round(seconds * 1e6) / 1e6; }

std::string ConfigDigest(const Json& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json ToJson(const Vec3& v) { return Json::array({v.x, v.y, v.z}); }

Vec3 Vec3FromJson(const Json& j) {
  if (!j.is_array() || j.size() != 3) throw ValidationError("vector must be an array of 3 numbers");
  try {
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("vector: ") + e.what());
  }
}

Json ToJson(const Box& b) { return {{"min", ToJson(b.min)}, {"max", ToJson(b.max)}}; }

Box BoxFromJson(const Json& j) {
  CheckKeys(j, {"min", "max"}, "box");
  if (!j.contains("min") || !j.contains("max")) throw ValidationError("box needs min and max");
  return {Vec3FromJson(j["min"]), Vec3FromJson(j["max"])};
}

Json ToJson(const stream::ActionVector& a) {
  return {{"arm", a.arm}, {"pump", stream::PumpName(a.pump)}};
}

stream::ActionVector ActionFromJson(const Json& j) {
  CheckKeys(j, {"arm", "pump", "t"}, "action");
  stream::ActionVector a;
  Get(j, "arm", a.arm);
  GetEnum(j, "pump", a.pump, stream::ParsePump);
  return a;
}

Json ToJson(const stream::TimedAction& a) {
  Json j = ToJson(a.action);
  j["t"] = QuantizeTime(a.timestamp);
  return j;
}

stream::TimedAction TimedActionFromJson(const Json& j) {
  stream::TimedAction a;
  a.action = ActionFromJson(j);
  if (!j.contains("t")) throw ValidationError("timed action needs 't'");
  Get(j, "t", a.timestamp);
  return a;
}

Json ToJson(const sim::SimEvent& e) {
  return {{"t", QuantizeTime(e.timestamp)}, {"kind", sim::EventKindName(e.kind)},
          {"fruit", e.fruit_id},           {"stage", e.stage},
          {"delta", e.delta},              {"attempt", e.attempt}};
}

sim::SimEvent EventFromJson(const Json& j) {
  CheckKeys(j, {"t", "kind", "fruit", "stage", "delta", "attempt"}, "event");
  sim::SimEvent e;
  Get(j, "t", e.timestamp);
  GetEnum(j, "kind", e.kind, sim::ParseEventKind);
  Get(j, "fruit", e.fruit_id);
  Get(j, "stage", e.stage);
  Get(j, "delta", e.delta);
  Get(j, "attempt", e.attempt);
  return e;
}

Json ToJson(const sim::AttemptRecord& a) {
  Json times = Json::array();
  for (const auto& t : a.stage_times) times.push_back(OptionalTime(t));
  return {{"index", a.index},
          {"fruit", a.fruit_id},
          {"flags", a.flags},
          {"stage_times", times},
          {"start", QuantizeTime(a.start_time)},
          {"end", OptionalTime(a.end_time)},
          {"outcome", sim::AttemptOutcomeName(a.outcome)}};
}

sim::AttemptRecord AttemptFromJson(const Json& j) {
  CheckKeys(j, {"index", "fruit", "flags", "stage_times", "start", "end", "outcome"}, "attempt");
  sim::AttemptRecord a;
  Get(j, "index", a.index);
  Get(j, "fruit", a.fruit_id);
  Get(j, "flags", a.flags);
  if (j.contains("stage_times")) {
    const Json& t = j["stage_times"];
    if (!t.is_array() || t.size() != sim::kNumStages) {
      throw ValidationError("stage_times must hold one entry per stage");
    }
    for (int k = 0; k < sim::kNumStages; ++k) a.stage_times[k] = OptionalTimeFromJson(t[k]);
  }
  Get(j, "start", a.start_time);
  if (j.contains("end")) a.end_time = OptionalTimeFromJson(j["end"]);
  GetEnum(j, "outcome", a.outcome, sim::ParseAttemptOutcome);
  return a;
}

Json ToJson(const sim::SceneTags& t) {
  return {{"illumination", sim::IlluminationName(t.illumination)},
          {"occlusion", sim::OcclusionName(t.occlusion)},
          {"visible_targets", t.visible_targets},
          {"maturity", sim::MaturityName(t.maturity)}};
}

sim::SceneTags TagsFromJson(const Json& j) {
  CheckKeys(j, {"illumination", "occlusion", "visible_targets", "maturity"}, "tags");
  sim::SceneTags t;
  GetEnum(j, "illumination", t.illumination, sim::ParseIllumination);
  GetEnum(j, "occlusion", t.occlusion, sim::ParseOcclusion);
  Get(j, "visible_targets", t.visible_targets);
  GetEnum(j, "maturity", t.maturity, sim::ParseMaturity);
  return t;
}

Json ToJson(const sim::PlantScene& s) {
  Json fruits = Json::array();
  for (const sim::Fruit& f : s.fruits) {
    fruits.push_back({{"id", f.id},
                      {"position", ToJson(f.position)},
                      {"ripeness", f.ripeness},
                      {"occlusion", sim::OcclusionName(f.occlusion)},
                      {"attached", f.attached},
                      {"severity", f.severity},
                      {"location", LocationName(f.location)}});
  }
  Json obstacles = Json::array();
  for (const sim::Obstacle& o : s.obstacles) {
    obstacles.push_back({{"center", ToJson(o.center)}, {"radius", o.radius}});
  }
  return {{"fruits", fruits},         {"obstacles", obstacles},  {"tray", ToJson(s.tray)},
          {"workspace", ToJson(s.workspace)}, {"home", ToJson(s.home)}, {"tags", ToJson(s.tags)}};
}

sim::PlantScene SceneFromJson(const Json& j) {
  CheckKeys(j, {"fruits", "obstacles", "tray", "workspace", "home", "tags"}, "scene");
  sim::PlantScene s;
  if (j.contains("fruits")) {
    for (const Json& f : j["fruits"]) {
      CheckKeys(f, {"id", "position", "ripeness", "occlusion", "attached", "severity", "location"},
                "fruit");
      sim::Fruit fruit;
      Get(f, "id", fruit.id);
      if (f.contains("position")) fruit.position = Vec3FromJson(f["position"]);
      Get(f, "ripeness", fruit.ripeness);
      GetEnum(f, "occlusion", fruit.occlusion, sim::ParseOcclusion);
      Get(f, "attached", fruit.attached);
      Get(f, "severity", fruit.severity);
      GetEnum(f, "location", fruit.location, ParseLocation);
      s.fruits.push_back(fruit);
    }
  }
  if (j.contains("obstacles")) {
    for (const Json& o : j["obstacles"]) {
      CheckKeys(o, {"center", "radius"}, "obstacle");
      sim::Obstacle ob;
      if (o.contains("center")) ob.center = Vec3FromJson(o["center"]);
      Get(o, "radius", ob.radius);
      s.obstacles.push_back(ob);
    }
  }
  if (j.contains("tray")) s.tray = BoxFromJson(j["tray"]);
  if (j.contains("workspace")) s.workspace = BoxFromJson(j["workspace"]);
  if (j.contains("home")) s.home = Vec3FromJson(j["home"]);
  if (j.contains("tags")) s.tags = TagsFromJson(j["tags"]);
  return s;
}

Json ToJson(const sim::SceneConfig& c) {
  return {{"ratios",
           {{"illumination", c.ratios.illumination},
            {"occlusion", c.ratios.occlusion},
            {"visible_targets", c.ratios.visible_targets},
            {"maturity", c.ratios.maturity}}},
          {"workspace", ToJson(c.workspace)},
          {"tray", ToJson(c.tray)},
          {"home", ToJson(c.home)},
          {"fruit_region", ToJson(c.fruit_region)},
          {"min_fruit_separation", c.min_fruit_separation},
          {"max_targets", c.max_targets},
          {"min_leaves", c.min_leaves},
          {"max_leaves", c.max_leaves},
          {"leaf_radius_min", c.leaf_radius_min},
          {"leaf_radius_max", c.leaf_radius_max}};
}

sim::SceneConfig SceneConfigFromJson(const Json& j) {
  CheckKeys(j,
            {"ratios", "workspace", "tray", "home", "fruit_region", "min_fruit_separation",
             "max_targets", "min_leaves", "max_leaves", "leaf_radius_min", "leaf_radius_max"},
            "scene config");
  sim::SceneConfig c;
  if (j.contains("ratios")) {
    const Json& r = j["ratios"];
    CheckKeys(r, {"illumination", "occlusion", "visible_targets", "maturity"}, "ratios");
    Get(r, "illumination", c.ratios.illumination);
    Get(r, "occlusion", c.ratios.occlusion);
    Get(r, "visible_targets", c.ratios.visible_targets);
    Get(r, "maturity", c.ratios.maturity);
  }
  if (j.contains("workspace")) c.workspace = BoxFromJson(j["workspace"]);
  if (j.contains("tray")) c.tray = BoxFromJson(j["tray"]);
  if (j.contains("home")) c.home = Vec3FromJson(j["home"]);
  if (j.contains("fruit_region")) c.fruit_region = BoxFromJson(j["fruit_region"]);
  Get(j, "min_fruit_separation", c.min_fruit_separation);
  Get(j, "max_targets", c.max_targets);
  Get(j, "min_leaves", c.min_leaves);
  Get(j, "max_leaves", c.max_leaves);
  Get(j, "leaf_radius_min", c.leaf_radius_min);
  Get(j, "leaf_radius_max", c.leaf_radius_max);
  c.Validate();
  return c;
}

Json ToJson(const sim::SimConfig& c) {
  return {{"contact",
           {{"p_base", c.contact.p_base},
            {"alignment_scale", c.contact.alignment_scale},
            {"snap_speed_scale", c.contact.snap_speed_scale},
            {"max_alignment_error", c.contact.max_alignment_error},
            {"engage_distance", c.contact.engage_distance},
            {"snap_threshold", c.contact.snap_threshold},
            {"rearm_rest", c.contact.rearm_rest}}},
          {"damage",
           {{"collision", c.damage.collision},
            {"slip", c.damage.slip},
            {"rotate_no_suction", c.damage.rotate_no_suction},
            {"retry", c.damage.retry},
            {"hard_approach", c.damage.hard_approach},
            {"collision_radius", c.damage.collision_radius},
            {"hard_approach_speed", c.damage.hard_approach_speed}}},
          {"stages",
           {{"designation_window", c.stages.designation_window},
            {"approach_threshold", c.stages.approach_threshold},
            {"clean_approach_window", c.stages.clean_approach_window},
            {"home_tolerance", c.stages.home_tolerance}}},
          {"retry_cap", c.retry_cap},
          {"ee_radius", c.ee_radius},
          {"bend_limit", c.bend_limit}};
}

sim::SimConfig SimConfigFromJson(const Json& j) {
  CheckKeys(j, {"contact", "damage", "stages", "retry_cap", "ee_radius", "bend_limit"},
            "sim config");
  sim::SimConfig c;
  if (j.contains("contact")) {
    const Json& x = j["contact"];
    CheckKeys(x,
              {"p_base", "alignment_scale", "snap_speed_scale", "max_alignment_error",
               "engage_distance", "snap_threshold", "rearm_rest"},
              "contact");
    Get(x, "p_base", c.contact.p_base);
    Get(x, "alignment_scale", c.contact.alignment_scale);
    Get(x, "snap_speed_scale", c.contact.snap_speed_scale);
    Get(x, "max_alignment_error", c.contact.max_alignment_error);
    Get(x, "engage_distance", c.contact.engage_distance);
    Get(x, "snap_threshold", c.contact.snap_threshold);
    Get(x, "rearm_rest", c.contact.rearm_rest);
  }
  if (j.contains("damage")) {
    const Json& x = j["damage"];
    CheckKeys(x,
              {"collision", "slip", "rotate_no_suction", "retry", "hard_approach",
               "collision_radius", "hard_approach_speed"},
              "damage");
    Get(x, "collision", c.damage.collision);
    Get(x, "slip", c.damage.slip);
    Get(x, "rotate_no_suction", c.damage.rotate_no_suction);
    Get(x, "retry", c.damage.retry);
    Get(x, "hard_approach", c.damage.hard_approach);
    Get(x, "collision_radius", c.damage.collision_radius);
    Get(x, "hard_approach_speed", c.damage.hard_approach_speed);
  }
  if (j.contains("stages")) {
    const Json& x = j["stages"];
    CheckKeys(x,
              {"designation_window", "approach_threshold", "clean_approach_window",
               "home_tolerance"},
              "stages");
    Get(x, "designation_window", c.stages.designation_window);
    Get(x, "approach_threshold", c.stages.approach_threshold);
    Get(x, "clean_approach_window", c.stages.clean_approach_window);
    Get(x, "home_tolerance", c.stages.home_tolerance);
  }
  Get(j, "retry_cap", c.retry_cap);
  Get(j, "ee_radius", c.ee_radius);
  Get(j, "bend_limit", c.bend_limit);
  c.Validate();
  return c;
}

Json ToJson(const policy::ViewConfig& c) {
  Json views = Json::object();
  for (int i = 0; i < policy::kNumViews; ++i) {
    const auto& v = c.views[i];
    views[std::string(policy::ViewName(static_cast<policy::ViewId>(i)))] = {
        {"enabled", v.enabled},
        {"noise_scale", v.noise_scale},
        {"close_range_only", v.close_range_only}};
  }
  return {{"views", views},
          {"near_reference", c.near_reference},
          {"min_distance", c.min_distance},
          {"wrist_range", c.wrist_range},
          {"wrist_occlusion_probability", c.wrist_occlusion_probability},
          {"engage_distance", c.engage_distance},
          {"illumination_factor", c.illumination_factor},
          {"occlusion_factor", c.occlusion_factor}};
}

policy::ViewConfig ViewConfigFromJson(const Json& j) {
  CheckKeys(j,
            {"preset", "views", "near_reference", "min_distance", "wrist_range",
             "wrist_occlusion_probability", "engage_distance", "illumination_factor",
             "occlusion_factor"},
            "view config");
  policy::ViewConfig c;
  if (j.contains("preset")) {
    const std::string p = j["preset"].is_string() ? j["preset"].get<std::string>() : "";
    if (p == "all") c = policy::ViewConfig::AllViews();
    else if (p == "dual_scene") c = policy::ViewConfig::DualScene();
    else if (p == "single_scene") c = policy::ViewConfig::SingleScene();
    else throw ValidationError("unknown view preset '" + p + "'");
  }
  if (j.contains("views")) {
    const Json& views = j["views"];
    CheckKeys(views, {"left_scene", "right_scene", "wrist"}, "views");
    for (int i = 0; i < policy::kNumViews; ++i) {
      const std::string name(policy::ViewName(static_cast<policy::ViewId>(i)));
      if (!views.contains(name)) continue;
      const Json& v = views[name];
      CheckKeys(v, {"enabled", "noise_scale", "close_range_only"}, name);
      Get(v, "enabled", c.views[i].enabled);
      Get(v, "noise_scale", c.views[i].noise_scale);
      Get(v, "close_range_only", c.views[i].close_range_only);
    }
  }
  Get(j, "near_reference", c.near_reference);
  Get(j, "min_distance", c.min_distance);
  Get(j, "wrist_range", c.wrist_range);
  Get(j, "wrist_occlusion_probability", c.wrist_occlusion_probability);
  Get(j, "engage_distance", c.engage_distance);
  Get(j, "illumination_factor", c.illumination_factor);
  Get(j, "occlusion_factor", c.occlusion_factor);
  c.Validate();
  return c;
}

Json ToJson(const policy::LatencyModel& m) {
  Json j = {{"spike_probability", m.spike_probability}, {"spike_max", m.spike_max}};
  if (m.kind == policy::LatencyModel::Kind::kConstant) {
    j["kind"] = "constant";
    j["seconds"] = m.constant;
  } else {
    j["kind"] = "lognormal";
    j["log_mean"] = m.log_mean;
    j["log_sigma"] = m.log_sigma;
  }
  return j;
}

policy::LatencyModel LatencyFromJson(const Json& j) {
  CheckKeys(j,
            {"kind", "seconds", "log_mean", "log_sigma", "median", "spike_probability",
             "spike_max"},
            "latency");
  policy::LatencyModel m;
  GetEnum(j, "kind", m.kind, ParseLatencyKind);
  Get(j, "seconds", m.constant);
  Get(j, "log_mean", m.log_mean);
  Get(j, "log_sigma", m.log_sigma);
  if (j.contains("median")) {
    double median = 0.0;
    Get(j, "median", median);
    if (!(median > 0.0)) throw ValidationError("latency median must be positive");
    m.log_mean = std::log(median);
  }
  Get(j, "spike_probability", m.spike_probability);
  Get(j, "spike_max", m.spike_max);
  m.Validate();
  return m;
}

Json ToJson(const policy::PolicySpec& s) {
  return {{"kind", policy::PolicyKindName(s.kind)},
          {"chunk_length", s.chunk_length},
          {"latency", ToJson(s.latency)},
          {"action_noise", s.action_noise},
          {"seed", s.seed}};
}

policy::PolicySpec PolicySpecFromJson(const Json& j) {
  CheckKeys(j, {"kind", "chunk_length", "latency", "action_noise", "seed", "scripted", "source"},
            "policy");
  policy::PolicySpec s;
  GetEnum(j, "kind", s.kind, policy::ParsePolicyKind);
  Get(j, "chunk_length", s.chunk_length);
  if (j.contains("latency")) s.latency = LatencyFromJson(j["latency"]);
  Get(j, "action_noise", s.action_noise);
  Get(j, "seed", s.seed);
  s.Validate();
  return s;
}

Json ToJson(const policy::ScriptedPolicyConfig& c) {
  return {{"max_speed", c.max_speed},
          {"gain", c.gain},
          {"contact_speed", c.contact_speed},
          {"slow_radius", c.slow_radius},
          {"obstacle_margin", c.obstacle_margin},
          {"obstacle_slowdown", c.obstacle_slowdown},
          {"ee_radius", c.ee_radius},
          {"engage_tolerance", c.engage_tolerance},
          {"engage_hysteresis", c.engage_hysteresis},
          {"envelop_steps", c.envelop_steps},
          {"snap_half_period", c.snap_half_period},
          {"snap_cycles", c.snap_cycles},
          {"rest_steps", c.rest_steps},
          {"snap_rate", c.snap_rate},
          {"align_gain", c.align_gain},
          {"align_max_speed", c.align_max_speed},
          {"bend_gain", c.bend_gain},
          {"bend_max_rate", c.bend_max_rate},
          {"home_tolerance", c.home_tolerance},
          {"tray_margin", c.tray_margin},
          {"use_pump", c.use_pump}};
}

policy::ScriptedPolicyConfig ScriptedConfigFromJson(const Json& j) {
  RequireObject(j, "scripted policy config");
  policy::ScriptedPolicyConfig c;
  const Json defaults = ToJson(c);
  for (const auto& [key, value] : j.items()) {
    if (!defaults.contains(key)) throw ValidationError("unknown key '" + key + "' in scripted");
  }
  Get(j, "max_speed", c.max_speed);
  Get(j, "gain", c.gain);
  Get(j, "contact_speed", c.contact_speed);
  Get(j, "slow_radius", c.slow_radius);
  Get(j, "obstacle_margin", c.obstacle_margin);
  Get(j, "obstacle_slowdown", c.obstacle_slowdown);
  Get(j, "ee_radius", c.ee_radius);
  Get(j, "engage_tolerance", c.engage_tolerance);
  Get(j, "engage_hysteresis", c.engage_hysteresis);
  Get(j, "envelop_steps", c.envelop_steps);
  Get(j, "snap_half_period", c.snap_half_period);
  Get(j, "snap_cycles", c.snap_cycles);
  Get(j, "rest_steps", c.rest_steps);
  Get(j, "snap_rate", c.snap_rate);
  Get(j, "align_gain", c.align_gain);
  Get(j, "align_max_speed", c.align_max_speed);
  Get(j, "bend_gain", c.bend_gain);
  Get(j, "bend_max_rate", c.bend_max_rate);
  Get(j, "home_tolerance", c.home_tolerance);
  Get(j, "tray_margin", c.tray_margin);
  Get(j, "use_pump", c.use_pump);
  c.Validate();
  return c;
}

Json ToJson(const runtime::ControlConfig& c) {
  return {{"frequency", c.frequency},
          {"mode", runtime::ControlModeName(c.mode)},
          {"alpha", c.alpha},
          {"blend_mode", BlendModeName(c.blend_mode)},
          {"horizon", c.horizon},
          {"seed", c.seed},
          {"refill_threshold", c.refill_threshold},
          {"capacity", c.capacity},
          {"starvation", runtime::StarvationModeName(c.starvation)},
          {"clock", runtime::ClockModeName(c.clock)}};
}

runtime::ControlConfig ControlConfigFromJson(const Json& j) {
  CheckKeys(j,
            {"frequency", "mode", "alpha", "blend_mode", "horizon", "seed", "refill_threshold",
             "capacity", "starvation", "clock"},
            "control");
  runtime::ControlConfig c;
  Get(j, "frequency", c.frequency);
  GetEnum(j, "mode", c.mode, runtime::ParseControlMode);
  Get(j, "alpha", c.alpha);
  GetEnum(j, "blend_mode", c.blend_mode, ParseBlendMode);
  Get(j, "horizon", c.horizon);
  Get(j, "seed", c.seed);
  Get(j, "refill_threshold", c.refill_threshold);
  Get(j, "capacity", c.capacity);
  GetEnum(j, "starvation", c.starvation, runtime::ParseStarvationMode);
  GetEnum(j, "clock", c.clock, runtime::ParseClockMode);
  c.Validate();
  return c;
}

Json ToJson(const runtime::TickStats& t) {
  return {{"i", t.index},
          {"scheduled", QuantizeTime(t.scheduled)},
          {"dispatched", QuantizeTime(t.dispatched)},
          {"source", runtime::ActionSourceName(t.source)},
          {"in_flight", t.inference_in_flight},
          {"clamped", t.clamped}};
}

runtime::TickStats TickFromJson(const Json& j) {
  CheckKeys(j, {"i", "scheduled", "dispatched", "source", "in_flight", "clamped"}, "tick");
  runtime::TickStats t;
  Get(j, "i", t.index);
  Get(j, "scheduled", t.scheduled);
  Get(j, "dispatched", t.dispatched);
  GetEnum(j, "source", t.source, runtime::ParseActionSource);
  Get(j, "in_flight", t.inference_in_flight);
  Get(j, "clamped", t.clamped);
  return t;
}

Json ToJson(const runtime::StateSample& s) {
  return {{"t", QuantizeTime(s.timestamp)}, {"state", s.state}};
}

runtime::StateSample StateFromJson(const Json& j) {
  CheckKeys(j, {"t", "state"}, "state");
  runtime::StateSample s;
  Get(j, "t", s.timestamp);
  Get(j, "state", s.state);
  return s;
}

Json ToJson(const runtime::TimingReport& r) {
  return {{"effective_rate", r.effective_rate},
          {"jitter_p50", r.jitter_p50},
          {"jitter_p95", r.jitter_p95},
          {"jitter_max", r.jitter_max},
          {"starvation_ticks", r.starvation_ticks},
          {"must_go_count", r.must_go_count},
          {"mean_inference_latency", r.mean_inference_latency},
          {"ticks", r.ticks}};
}

runtime::TimingReport TimingFromJson(const Json& j) {
  CheckKeys(j,
            {"effective_rate", "jitter_p50", "jitter_p95", "jitter_max", "starvation_ticks",
             "must_go_count", "mean_inference_latency", "ticks"},
            "timing");
  runtime::TimingReport r;
  Get(j, "effective_rate", r.effective_rate);
  Get(j, "jitter_p50", r.jitter_p50);
  Get(j, "jitter_p95", r.jitter_p95);
  Get(j, "jitter_max", r.jitter_max);
  Get(j, "starvation_ticks", r.starvation_ticks);
  Get(j, "must_go_count", r.must_go_count);
  Get(j, "mean_inference_latency", r.mean_inference_latency);
  Get(j, "ticks", r.ticks);
  return r;
}

}  // namespace harvest::store
