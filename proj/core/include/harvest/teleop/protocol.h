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


#ifndef HARVEST_TELEOP_PROTOCOL_H_
#define HARVEST_TELEOP_PROTOCOL_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "harvest/common/geometry.h"
#include "harvest/sim/types.h"
#include "harvest/teleop/session.h"

namespace harvest::teleop {

inline constexpr std::string_view kProtocolName = "harvest-teleop";
inline constexpr int kProtocolVersion = 1;

// First client frame. The token is compared against the server's static
// token when one is configured.
struct ClientHello {
  int version = kProtocolVersion;
  std::string token;
  std::string client;
};

struct CommandFrame {
  std::uint64_t seq = 0;
  TeleopCommand command;
  std::optional<double> ack;  // server time of the newest telemetry seen
};

using ClientFrame = std::variant<ClientHello, CommandFrame>;

// Throws ValidationError describing the first problem found.
ClientFrame ParseClientFrame(std::string_view text);

struct ServerHello {
  double control_hz = 30.0;
  Box workspace;
  double interpolation_duration = 1.0;
  OperatorLimits limits;
};

struct FruitTelemetry {
  int id = 0;
  Vec3 position;
  bool ripe = false;
  sim::FruitLocation location = sim::FruitLocation::kAttached;
  int severity = 0;
};

struct Telemetry {
  double time = 0.0;
  std::uint64_t tick = 0;
  Phase phase = Phase::kIdle;
  std::optional<std::string> episode;
  sim::EEState ee;
  stream::ActionVector command;
  std::array<bool, sim::kNumStages> stage_flags{};
  std::vector<FruitTelemetry> fruits;
  std::uint64_t scene_revision = 0;
  bool estop = false;
  std::uint64_t ack_seq = 0;
  std::optional<double> rtt_last_ms;
  std::optional<double> rtt_p95_ms;
};

std::string EncodeHello(const ServerHello& hello);
std::string EncodeTelemetry(const Telemetry& t);
std::string EncodeError(std::string_view code, std::string_view message,
                        std::optional<std::uint64_t> seq = std::nullopt);
std::string EncodeSessionEvent(Phase phase, const std::optional<std::string>& episode,
                               std::uint64_t seq);
std::string EncodeScene(const sim::PlantScene& scene, std::uint64_t revision);

// Client-side helpers, used by the test client and tools.
std::string EncodeClientHello(const ClientHello& hello);
std::string EncodeCommand(const CommandFrame& frame);

}  // namespace harvest::teleop

#endif  // HARVEST_TELEOP_PROTOCOL_H_
