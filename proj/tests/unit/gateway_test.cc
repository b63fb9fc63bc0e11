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

#include <algorithm>
#include <chrono>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "harvest/common/error.h"
#include "harvest/metrics/metrics.h"
#include "harvest/policy/scripted_policy.h"
#include "harvest/store/json_codec.h"
#include "harvest/teleop/gateway.h"
#include "harvest/teleop/protocol.h"
#include "harvest/teleop/teleop_runtime.h"
#include "support/fixtures.h"
#include "support/ws_client.h"

namespace harvest::teleop {
namespace {

using harvest::testing::WsClient;
using nlohmann::json;
using namespace std::chrono_literals;

std::string Hello(std::string token = "") { return EncodeClientHello({kProtocolVersion, token, "test"}); }

std::string Command(std::uint64_t seq, std::vector<Button> buttons = {}, double vx = 0.0,
                    std::optional<double> ack = std::nullopt) {
  CommandFrame f;
  f.seq = seq;
  f.command.twist[0] = vx;
  f.command.buttons = std::move(buttons);
  f.ack = ack;
  return EncodeCommand(f);
}

auto ErrorCode(const std::string& code) {
  return [code](const json& j) { return j.value("type", "") == "error" && j.value("code", "") == code; };
}

class GatewayTest : public ::testing::Test {
 protected:
  void SetUp() override { StartWith({}); }

  void StartWith(GatewayConfig cfg) {
    gateway_.reset();
    TeleopRuntimeConfig rc;
    rc.single_fruit = harvest::testing::kFruit;
    runtime_ = std::make_unique<TeleopRuntime>(rc);
    cfg.port = 0;
    gateway_ = std::make_unique<Gateway>(cfg, *runtime_);
    port_ = gateway_->Start();
  }

  void TearDown() override {
    if (gateway_) gateway_->Stop();
  }

  // Blocks until the gateway has handled `n` frames in total.
  bool AwaitFrames(std::size_t n) {
    const auto deadline = std::chrono::steady_clock::now() + 3s;
    while (gateway_->Stats().frames < n) {
      if (std::chrono::steady_clock::now() > deadline) return false;
      std::this_thread::sleep_for(100us);
    }
    return true;
  }

  std::unique_ptr<TeleopRuntime> runtime_;
  std::unique_ptr<Gateway> gateway_;
  unsigned short port_ = 0;
};

TEST_F(GatewayTest, GreetsWithHelloSceneAndSession) {
  WsClient c;
  ASSERT_TRUE(c.Connect(port_));
  const auto hello = c.WaitType("hello");
  ASSERT_TRUE(hello);
  EXPECT_EQ((*hello)["protocol"], "harvest-teleop");
  const auto scene = c.WaitType("scene");
  ASSERT_TRUE(scene);
  EXPECT_EQ(store::SceneFromJson((*scene)["scene"]), runtime_->Scene());
  const auto session = c.WaitType("session");
  ASSERT_TRUE(session);
  EXPECT_EQ((*session)["phase"], "idle");
  EXPECT_TRUE(c.WaitType("telemetry"));
}

TEST_F(GatewayTest, CommandBeforeHelloIsRejected) {
  WsClient c;
  ASSERT_TRUE(c.Connect(port_));
  c.Send(Command(1, {Button::kResume}, 0.1));
  const auto err = c.WaitFor(ErrorCode("handshake_required"));
  ASSERT_TRUE(err);
  EXPECT_EQ((*err)["seq"], 1);
  EXPECT_EQ(gateway_->phase(), Phase::kIdle);
  c.Send(Hello());
  c.Send(Command(2, {Button::kResume}));
  const auto live = c.WaitFor([](const json& j) { return j.value("phase", "") == "live"; });
  ASSERT_TRUE(live);
  EXPECT_EQ((*live)["seq"], 2);
}

TEST_F(GatewayTest, MalformedFrameKeepsConnection) {
  WsClient c;
  ASSERT_TRUE(c.Connect(port_));
  c.Send(Hello());
  c.Send("{not json");
  c.Send(R"({"type":"command","seq":1,"twist":[1]})");
  ASSERT_TRUE(c.WaitFor(ErrorCode("malformed")));
  ASSERT_TRUE(c.WaitFor(ErrorCode("malformed")));
  c.Send(Command(2, {Button::kResume}));
  EXPECT_TRUE(c.WaitFor([](const json& j) { return j.value("phase", "") == "live"; }));
  EXPECT_FALSE(c.closed());
  EXPECT_GE(gateway_->Stats().errors, 2u);
}

TEST_F(GatewayTest, RejectedTransitionReportsError) {
  WsClient c;
  ASSERT_TRUE(c.Connect(port_));
  c.Send(Hello());
  c.Send(Command(1, {Button::kStartEpisode}));
  const auto err = c.WaitFor([](const json& j) { return j.value("type", "") == "error"; });
  ASSERT_TRUE(err);
  EXPECT_EQ((*err)["seq"], 1);
  EXPECT_EQ(gateway_->phase(), Phase::kIdle);
}

TEST_F(GatewayTest, SecondOperatorIsRefused) {
  WsClient a;
  ASSERT_TRUE(a.Connect(port_));
  a.Send(Hello());
  ASSERT_TRUE(a.WaitType("hello"));
  WsClient b;
  ASSERT_TRUE(b.Connect(port_));
  EXPECT_TRUE(b.WaitFor(ErrorCode("busy")));
  EXPECT_TRUE(b.WaitClosed());
  EXPECT_EQ(gateway_->Stats().refused_connections, 1u);
  // The first operator is unaffected.
  a.Send(Command(1, {Button::kResume}));
  EXPECT_TRUE(a.WaitFor([](const json& j) { return j.value("phase", "") == "live"; }));
}

TEST_F(GatewayTest, TokenIsChecked) {
  GatewayConfig cfg;
  cfg.token = "s3cret";
  StartWith(cfg);
  {
    WsClient c;
    ASSERT_TRUE(c.Connect(port_));
    c.Send(Hello("wrong"));
    EXPECT_TRUE(c.WaitFor(ErrorCode("unauthorized")));
    EXPECT_TRUE(c.WaitClosed());
  }
  WsClient c;
  ASSERT_TRUE(c.Connect(port_));
  c.Send(Hello("s3cret"));
  c.Send(Command(1, {Button::kResume}));
  EXPECT_TRUE(c.WaitFor([](const json& j) { return j.value("phase", "") == "live"; }));
}

TEST_F(GatewayTest, DisconnectPausesAndZeroes) {
  {
    WsClient c;
    ASSERT_TRUE(c.Connect(port_));
    c.Send(Hello());
    c.Send(Command(1, {Button::kResume}, 0.05));
    ASSERT_TRUE(AwaitFrames(2));
    for (int i = 0; i < 40; ++i) runtime_->Tick();
    ASSERT_GT(runtime_->Snapshot().command.arm[0], 0.0);
    c.Close();
  }
  const auto deadline = std::chrono::steady_clock::now() + 3s;
  while (gateway_->phase() != Phase::kPaused && std::chrono::steady_clock::now() < deadline) {
    std::this_thread::sleep_for(1ms);
  }
  EXPECT_EQ(gateway_->phase(), Phase::kPaused);
  runtime_->Tick();
  EXPECT_EQ(runtime_->Snapshot().command, ActionVector::Zero());
}

TEST_F(GatewayTest, EStopReachesRuntime) {
  WsClient c;
  ASSERT_TRUE(c.Connect(port_));
  c.Send(Hello());
  c.Send(Command(1, {Button::kResume}, 0.05));
  c.Send(Command(2, {Button::kEStop}, 0.05));
  ASSERT_TRUE(AwaitFrames(3));
  EXPECT_TRUE(runtime_->estop_raised());
  runtime_->Tick();
  EXPECT_EQ(runtime_->Snapshot().command, ActionVector::Zero());
  EXPECT_TRUE(c.WaitFor([](const json& j) { return j.value("phase", "") == "estopped"; }));
}

policy::Observation ObservationFrom(const Telemetry& t, const sim::PlantScene& scene, double now) {
  policy::Observation obs;
  obs.timestamp = now;
  obs.state = sim::ToStateVector(t.ee);
  obs.obstacles = scene.obstacles;
  obs.tray = scene.tray;
  obs.home = scene.home;
  for (const FruitTelemetry& f : t.fruits) {
    policy::FruitPercept p;
    p.fruit_id = f.id;
    p.position = f.position;
    p.ripeness = f.ripe ? 1.0 : 0.0;
    p.attached = f.location == sim::FruitLocation::kAttached;
    p.held = f.location == sim::FruitLocation::kHeld;
    p.in_tray = f.location == sim::FruitLocation::kInTray;
    obs.fused.push_back(p);
  }
  return obs;
}

// A scripted operator drives the single-fruit task over the wire in
// lockstep with a virtual-clock runtime.
TEST_F(GatewayTest, ScriptedOperatorHarvestsOverTheWire) {
  WsClient c;
  ASSERT_TRUE(c.Connect(port_));
  const auto scene_frame = c.WaitType("scene");
  ASSERT_TRUE(scene_frame);
  c.Send(Hello());
  std::uint64_t seq = 0;
  std::size_t frames = 1;
  auto send = [&](const ActionVector& a, std::vector<Button> buttons) {
    CommandFrame f;
    f.seq = ++seq;
    std::copy_n(a.arm.begin(), 6, f.command.twist.begin());
    f.command.bend_rate = a.arm[6];
    f.command.pump = a.pump;
    f.command.buttons = std::move(buttons);
    c.Send(EncodeCommand(f));
    ASSERT_TRUE(AwaitFrames(++frames));
  };
  send(ActionVector::Zero(), {Button::kResume});
  for (int i = 0; i < 30; ++i) runtime_->Tick();
  send(ActionVector::Zero(), {Button::kStartEpisode});
  ASSERT_EQ(gateway_->phase(), Phase::kRecording);
  runtime_->Tick();
  // Starting an episode swaps in a fresh plant.
  const auto fresh = c.WaitFor([](const json& j) { return j.value("type", "") == "scene"; }, 3000ms);
  ASSERT_TRUE(fresh);
  const sim::PlantScene scene = store::SceneFromJson((*fresh)["scene"]);
  EXPECT_EQ(scene, runtime_->Scene());

  policy::ScriptedPolicy policy(policy::PolicySpec{}, runtime_->period());
  bool placed = false;
  for (int k = 0; k < 900 && !placed; ++k) {
    const Telemetry t = runtime_->Snapshot();
    placed = t.stage_flags[sim::kNumStages - 1];
    const double now = runtime_->Now();
    const auto result = policy.Infer(ObservationFrom(t, scene, now), now);
    send(result.chunk.actions.front(), {});
    runtime_->Tick();
  }
  EXPECT_TRUE(placed);
  send(ActionVector::Zero(), {Button::kEndEpisode});
  runtime_->Tick();

  const auto records = runtime_->records();
  ASSERT_EQ(records.size(), 1u);
  const store::EpisodeRecord& r = records[0];
  EXPECT_EQ(r.manifest.source, "teleop");
  EXPECT_TRUE(r.manifest.success);
  const metrics::EpisodeOutcome outcome = metrics::OutcomeFromManifest(r.manifest);
  const std::vector<metrics::StageFlags> flags{outcome.flags};
  EXPECT_DOUBLE_EQ(metrics::SuccessScore(flags, metrics::StageWeights::Uniform()), 100.0);
  EXPECT_EQ(gateway_->Stats().errors, 0u);
}

TEST(GatewayLatencyTest, RoundTripP95UnderBudget) {
  TeleopRuntimeConfig rc;
  rc.single_fruit = harvest::testing::kFruit;
  rc.control.frequency = 100.0;
  rc.control.clock = runtime::ClockMode::kWallClock;
  TeleopRuntime rt(rc);
  GatewayConfig gc;
  gc.port = 0;
  Gateway gw(gc, rt);
  const unsigned short port = gw.Start();
  std::jthread loop([&rt](std::stop_token st) { rt.Run(st); });

  WsClient c;
  ASSERT_TRUE(c.Connect(port));
  c.Send(Hello());
  c.Send(Command(1, {Button::kResume}));
  std::uint64_t seq = 1;
  std::uint64_t last_tick = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto t = c.WaitFor(
        [&](const json& j) { return j.value("type", "") == "telemetry" && j["tick"] > last_tick; });
    ASSERT_TRUE(t) << i;
    last_tick = (*t)["tick"];
    c.Send(Command(++seq, {}, 0.0, (*t)["t"].get<double>()));
  }
  const auto deadline = std::chrono::steady_clock::now() + 3s;
  while (gw.Stats().rtt_samples < 1000 && std::chrono::steady_clock::now() < deadline) {
    std::this_thread::sleep_for(1ms);
  }
  const GatewayStats s = gw.Stats();
  ASSERT_TRUE(s.rtt_p95_ms);
  EXPECT_GE(s.rtt_samples, 900u);
  EXPECT_LT(*s.rtt_p95_ms, 100.0);
  ASSERT_TRUE(s.processing_p95_ms);
  EXPECT_LT(*s.processing_p95_ms, 5.0);
  loop.request_stop();
  loop.join();
  gw.Stop();
}

}  // namespace
}  // namespace harvest::teleop
