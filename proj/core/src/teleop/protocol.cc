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


#include "harvest/teleop/protocol.h"

#include <string>

#include <nlohmann/json.hpp>

#include "harvest/common/error.h"
#include "harvest/store/json_codec.h"

namespace harvest::teleop {

namespace {

using Json = nlohmann::json;
using store::ToJson;

double Number(const Json& j, std::string_view field) {
  if (!j.is_number()) throw ValidationError(std::string(field) + " must be a number");
  return j.get<double>();
}

TeleopCommand ParseCommandFields(const Json& j) {
  TeleopCommand c;
  if (j.contains("twist")) {
    const Json& t = j["twist"];
    if (!t.is_array() || t.size() != 6) throw ValidationError("twist must be an array of 6 numbers");
    for (int i = 0; i < 6; ++i) c.twist[i] = Number(t[i], "twist");
  }
  if (j.contains("bend_rate")) c.bend_rate = Number(j["bend_rate"], "bend_rate");
  if (j.contains("pump")) {
    if (!j["pump"].is_string()) throw ValidationError("pump must be a string");
    const auto p = stream::ParsePump(j["pump"].get<std::string>());
    if (!p) throw ValidationError("unknown pump state '" + j["pump"].get<std::string>() + "'");
    c.pump = *p;
  }
  if (j.contains("buttons")) {
    const Json& bs = j["buttons"];
    if (!bs.is_array()) throw ValidationError("buttons must be an array of strings");
    for (const Json& b : bs) {
      if (!b.is_string()) throw ValidationError("buttons must be an array of strings");
      const auto parsed = ParseButton(b.get<std::string>());
      if (!parsed) throw ValidationError("unknown button '" + b.get<std::string>() + "'");
      if (c.Has(*parsed)) throw ValidationError("duplicate button '" + b.get<std::string>() + "'");
      c.buttons.push_back(*parsed);
    }
  }
  return c;
}

Json EeJson(const sim::EEState& ee) {
  Json j = {{"position", ToJson(ee.position)},
            {"orientation", ToJson(ee.orientation)},
            {"bend", ee.bend},
            {"pump", stream::PumpName(ee.pump)}};
  j["holding"] = ee.holding ? Json(*ee.holding) : Json(nullptr);
  return j;
}

Json ArmJson(const stream::ActionVector& a) {
  return {{"arm", Json(a.arm)}, {"pump", stream::PumpName(a.pump)}};
}

}  // namespace

ClientFrame ParseClientFrame(std::string_view text) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ValidationError("frame is not valid JSON");
  if (!j.is_object()) throw ValidationError("frame must be a JSON object");
  if (!j.contains("type") || !j["type"].is_string()) {
    throw ValidationError("frame needs a string 'type'");
  }
  const std::string type = j["type"].get<std::string>();
  if (type == "hello") {
    store::CheckKeys(j, {"type", "version", "token", "client"}, "hello frame");
    ClientHello h;
    if (!j.contains("version") || !j["version"].is_number_integer()) {
      throw ValidationError("hello needs an integer 'version'");
    }
    h.version = j["version"].get<int>();
    if (j.contains("token")) {
      if (!j["token"].is_string()) throw ValidationError("token must be a string");
      h.token = j["token"].get<std::string>();
    }
    if (j.contains("client")) {
      if (!j["client"].is_string()) throw ValidationError("client must be a string");
      h.client = j["client"].get<std::string>();
    }
    return h;
  }
  if (type == "command") {
    store::CheckKeys(j, {"type", "seq", "twist", "bend_rate", "pump", "buttons", "ack"},
                     "command frame");
    CommandFrame f;
    if (!j.contains("seq") || !j["seq"].is_number_unsigned()) {
      throw ValidationError("command needs a non-negative integer 'seq'");
    }
    f.seq = j["seq"].get<std::uint64_t>();
    f.command = ParseCommandFields(j);
    if (j.contains("ack") && !j["ack"].is_null()) f.ack = Number(j["ack"], "ack");
    return f;
  }
  throw ValidationError("unknown frame type '" + type + "'");
}

std::string EncodeHello(const ServerHello& hello) {
  Json j = {{"type", "hello"},
            {"protocol", kProtocolName},
            {"version", kProtocolVersion},
            {"schemas", {{"command", 1}, {"telemetry", 1}, {"error", 1}, {"session", 1}, {"scene", 1}}},
            {"control_hz", hello.control_hz},
            {"workspace", ToJson(hello.workspace)},
            {"interpolation_s", hello.interpolation_duration},
            {"limits",
             {{"max_linear", hello.limits.max_linear},
              {"max_angular", hello.limits.max_angular},
              {"max_bend_rate", hello.limits.max_bend_rate}}},
            {"buttons", Json::array()}};
  for (Button b : {Button::kEStop, Button::kStop, Button::kPause, Button::kEndEpisode,
                   Button::kMarkRetry, Button::kResume, Button::kStartEpisode}) {
    j["buttons"].push_back(ButtonName(b));
  }
  return j.dump();
}

std::string EncodeTelemetry(const Telemetry& t) {
  Json fruits = Json::array();
  for (const FruitTelemetry& f : t.fruits) {
    fruits.push_back({{"id", f.id},
                      {"position", ToJson(f.position)},
                      {"ripe", f.ripe},
                      {"location", store::LocationName(f.location)},
                      {"severity", f.severity}});
  }
  Json j = {{"type", "telemetry"},
            {"t", t.time},
            {"tick", t.tick},
            {"phase", PhaseName(t.phase)},
            {"ee", EeJson(t.ee)},
            {"command", ArmJson(t.command)},
            {"stage_flags", Json(t.stage_flags)},
            {"fruits", fruits},
            {"scene_revision", t.scene_revision},
            {"estop", t.estop},
            {"ack_seq", t.ack_seq}};
  j["episode"] = t.episode ? Json(*t.episode) : Json(nullptr);
  j["rtt_ms"] = {{"last", t.rtt_last_ms ? Json(*t.rtt_last_ms) : Json(nullptr)},
                 {"p95", t.rtt_p95_ms ? Json(*t.rtt_p95_ms) : Json(nullptr)}};
  return j.dump();
}

std::string EncodeError(std::string_view code, std::string_view message,
                        std::optional<std::uint64_t> seq) {
  Json j = {{"type", "error"}, {"code", code}, {"message", message}};
  j["seq"] = seq ? Json(*seq) : Json(nullptr);
  return j.dump();
}

std::string EncodeSessionEvent(Phase phase, const std::optional<std::string>& episode,
                               std::uint64_t seq) {
  Json j = {{"type", "session"}, {"phase", PhaseName(phase)}, {"seq", seq}};
  j["episode"] = episode ? Json(*episode) : Json(nullptr);
  return j.dump();
}

std::string EncodeScene(const sim::PlantScene& scene, std::uint64_t revision) {
  return Json{{"type", "scene"}, {"revision", revision}, {"scene", ToJson(scene)}}.dump();
}

std::string EncodeClientHello(const ClientHello& hello) {
  return Json{{"type", "hello"},
              {"version", hello.version},
              {"token", hello.token},
              {"client", hello.client}}
      .dump();
}

std::string EncodeCommand(const CommandFrame& frame) {
  Json buttons = Json::array();
  for (Button b : frame.command.buttons) buttons.push_back(ButtonName(b));
  Json j = {{"type", "command"},
            {"seq", frame.seq},
            {"twist", Json(frame.command.twist)},
            {"bend_rate", frame.command.bend_rate},
            {"pump", stream::PumpName(frame.command.pump)},
            {"buttons", buttons}};
  if (frame.ack) j["ack"] = *frame.ack;
  return j.dump();
}

}  // namespace harvest::teleop
