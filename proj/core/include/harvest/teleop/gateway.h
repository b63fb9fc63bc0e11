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


#ifndef HARVEST_TELEOP_GATEWAY_H_
#define HARVEST_TELEOP_GATEWAY_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "harvest/teleop/session.h"
#include "harvest/teleop/teleop_runtime.h"

namespace harvest::teleop {

struct GatewayConfig {
  std::string address = "127.0.0.1";
  unsigned short port = 8765;  // 0 picks a free port
  std::string token;           // empty: no token check
  SessionConfig session;
  std::size_t max_frame_bytes = 64 * 1024;

  void Validate() const;
};

struct GatewayStats {
  std::size_t frames = 0;
  std::size_t errors = 0;
  std::size_t refused_connections = 0;
  std::size_t telemetry_sent = 0;
  std::optional<double> processing_p95_ms;
  std::optional<double> processing_max_ms;
  std::optional<double> rtt_p95_ms;
  std::size_t rtt_samples = 0;
};

// WebSocket front end for one operator. Owns the session state machine and
// talks to the runtime only through its target cell and estop flag.
class Gateway {
 public:
  Gateway(GatewayConfig config, TeleopRuntime& runtime);
  ~Gateway();
  Gateway(const Gateway&) = delete;
  Gateway& operator=(const Gateway&) = delete;

  // Binds, starts the network thread and returns the bound port.
  unsigned short Start();
  void Stop();

  GatewayStats Stats() const;
  Phase phase() const;

 private:
  friend class Connection;
  class Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace harvest::teleop

#endif  // HARVEST_TELEOP_GATEWAY_H_
