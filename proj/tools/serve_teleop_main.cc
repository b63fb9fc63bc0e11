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


// Runs the simulated greenhouse in teleop mode behind the WebSocket gateway.

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "harvest/common/error.h"
#include "harvest/teleop/gateway.h"
#include "harvest/teleop/teleop_runtime.h"

namespace {

namespace ht = harvest::teleop;

std::atomic<bool> g_stop{false};

void OnSignal(int) { g_stop.store(true); }

int Run(int argc, char** argv) {
  CLI::App app{"Teleoperation gateway for the simulated greenhouse"};
  ht::GatewayConfig gw;
  ht::TeleopRuntimeConfig rt;
  rt.control.clock = harvest::runtime::ClockMode::kWallClock;
  std::string scene_kind = "single_fruit";
  std::vector<double> fruit{0.08, 0.17, 0.36};
  std::string store = "teleop_episodes";
  double duration = 0.0;

  app.add_option("--bind", gw.address, "Bind address")->capture_default_str();
  app.add_option("--port", gw.port, "Bind port (0 picks a free one)")
      ->envname("HARVEST_TELEOP_PORT")
      ->capture_default_str();
  app.add_option("--token", gw.token, "Static token clients must present");
  app.add_option("--store", store, "Episode store directory")->capture_default_str();
  app.add_option("--seed", rt.seed, "Scene seed")->capture_default_str();
  app.add_option("--scene", scene_kind, "single_fruit or generated")
      ->check(CLI::IsMember({"single_fruit", "generated"}))
      ->capture_default_str();
  app.add_option("--fruit", fruit, "Fruit position for the single-fruit scene")->expected(3);
  app.add_option("--rate", rt.control.frequency, "Control frequency in Hz")->capture_default_str();
  app.add_option("--interpolation", gw.session.interpolation_duration,
                 "Resume ramp duration in seconds")
      ->capture_default_str();
  app.add_option("--max-linear", gw.session.limits.max_linear, "Operator linear limit (m/s)")
      ->capture_default_str();
  app.add_option("--max-angular", gw.session.limits.max_angular,
                 "Operator angular limit (rad/s)")
      ->capture_default_str();
  app.add_option("--max-frame-bytes", gw.max_frame_bytes, "Largest accepted frame")
      ->capture_default_str();
  app.add_option("--duration", duration, "Stop after this many seconds (0 runs until signalled)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  if (scene_kind == "single_fruit") rt.single_fruit = harvest::Vec3{fruit[0], fruit[1], fruit[2]};
  rt.store_root = store;

  ht::TeleopRuntime runtime(rt);
  ht::Gateway gateway(gw, runtime);
  const unsigned short port = gateway.Start();
  std::cout << "listening on ws://" << gw.address << ":" << port << std::endl;

  std::signal(SIGINT, OnSignal);
  std::signal(SIGTERM, OnSignal);
  std::jthread loop([&runtime](std::stop_token st) { runtime.Run(st); });
  const auto start = std::chrono::steady_clock::now();
  while (!g_stop.load()) {
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
    if (duration > 0.0 &&
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() >= duration) {
      break;
    }
  }
  gateway.Stop();
  loop.request_stop();
  loop.join();
  const ht::GatewayStats s = gateway.Stats();
  std::cout << "frames " << s.frames << ", errors " << s.errors << ", refused "
            << s.refused_connections << ", episodes " << runtime.written().size() << "\n";
  for (const auto& p : runtime.written()) std::cout << "  " << p.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return Run(argc, argv);
  } catch (const harvest::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "fault: " << e.what() << "\n";
    return 2;
  }
}
