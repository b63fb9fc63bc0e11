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
#include <cmath>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "harvest/common/error.h"
#include "harvest/store/record.h"
#include "harvest/teleop/protocol.h"
#include "harvest/teleop/session.h"
#include "harvest/teleop/teleop_runtime.h"
#include "support/fixtures.h"
#include "support/temp_dir.h"

namespace harvest::teleop {
namespace {

using nlohmann::json;

constexpr double kDt = 1.0 / 30.0;

TeleopCommand Move(double vx, std::vector<Button> buttons = {}) {
  TeleopCommand c;
  c.twist[0] = vx;
  c.buttons = std::move(buttons);
  return c;
}

TeleopCommand Press(Button b) { return Move(0.0, {b}); }

bool IsZero(const ActionVector& a) { return a == ActionVector::Zero(); }

// Session driven into `phase` from a fresh start.
Session In(Phase phase) {
  Session s;
  switch (phase) {
    case Phase::kIdle:
      break;
    case Phase::kLive:
      s.HandleCommand(Press(Button::kResume), 0.0);
      break;
    case Phase::kRecording:
      s.HandleCommand(Move(0.0, {Button::kResume, Button::kStartEpisode}), 0.0);
      break;
    case Phase::kPaused:
      s.HandleCommand(Press(Button::kResume), 0.0);
      s.HandleCommand(Press(Button::kPause), 0.1);
      break;
    case Phase::kStopped:
      s.HandleCommand(Press(Button::kResume), 0.0);
      s.HandleCommand(Press(Button::kStop), 0.1);
      break;
    case Phase::kEStopped:
      s.HandleCommand(Press(Button::kEStop), 0.0);
      break;
  }
  EXPECT_EQ(s.phase(), phase);
  return s;
}

const std::vector<Phase> kPhases{Phase::kIdle,    Phase::kLive,    Phase::kRecording,
                                 Phase::kPaused,  Phase::kStopped, Phase::kEStopped};

TEST(SessionTest, NamesRoundTrip) {
  for (Phase p : kPhases) EXPECT_EQ(ParsePhase(PhaseName(p)), p);
  for (int i = 0; i < kNumButtons; ++i) {
    const Button b = static_cast<Button>(i);
    EXPECT_EQ(ParseButton(ButtonName(b)), b);
  }
  EXPECT_FALSE(ParseButton("jump").has_value());
}

TEST(SessionTest, TransitionTable) {
  struct Case {
    Phase from;
    Button b;
    std::optional<Phase> to;  // empty: rejected
  };
  const std::vector<Case> cases{
      {Phase::kIdle, Button::kResume, Phase::kLive},
      {Phase::kIdle, Button::kPause, std::nullopt},
      {Phase::kIdle, Button::kStartEpisode, std::nullopt},
      {Phase::kIdle, Button::kStop, std::nullopt},
      {Phase::kLive, Button::kResume, std::nullopt},
      {Phase::kLive, Button::kPause, Phase::kPaused},
      {Phase::kLive, Button::kStop, Phase::kStopped},
      {Phase::kLive, Button::kStartEpisode, Phase::kRecording},
      {Phase::kLive, Button::kEndEpisode, std::nullopt},
      {Phase::kLive, Button::kMarkRetry, std::nullopt},
      {Phase::kRecording, Button::kEndEpisode, Phase::kLive},
      {Phase::kRecording, Button::kMarkRetry, Phase::kRecording},
      {Phase::kRecording, Button::kPause, Phase::kPaused},
      {Phase::kRecording, Button::kStartEpisode, std::nullopt},
      {Phase::kPaused, Button::kResume, Phase::kLive},
      {Phase::kPaused, Button::kPause, std::nullopt},
      {Phase::kPaused, Button::kStop, Phase::kStopped},
      {Phase::kStopped, Button::kResume, Phase::kLive},
      {Phase::kStopped, Button::kStop, std::nullopt},
      {Phase::kEStopped, Button::kResume, std::nullopt},
      {Phase::kEStopped, Button::kStop, std::nullopt},
  };
  for (const Case& c : cases) {
    Session s = In(c.from);
    const Phase before = s.phase();
    const auto id = s.episode_id();
    const Effect e = s.HandleCommand(Press(c.b), 1.0);
    SCOPED_TRACE(std::string(PhaseName(c.from)) + " + " + std::string(ButtonName(c.b)));
    if (c.to) {
      EXPECT_TRUE(e.accepted) << e.message;
      EXPECT_EQ(s.phase(), *c.to);
    } else {
      EXPECT_FALSE(e.accepted);
      EXPECT_FALSE(e.error_code.empty());
      EXPECT_EQ(s.phase(), before);
      EXPECT_EQ(s.episode_id(), id);
    }
  }
}

TEST(SessionTest, EStopFromEveryPhase) {
  for (Phase p : kPhases) {
    Session s = In(p);
    const Effect e = s.HandleCommand(Move(0.1, {Button::kEStop}), 2.0);
    EXPECT_TRUE(e.accepted);
    EXPECT_TRUE(e.estop);
    EXPECT_EQ(s.phase(), Phase::kEStopped);
    EXPECT_FALSE(s.episode_id().has_value());
    EXPECT_TRUE(IsZero(s.Output(2.0)));
    EXPECT_TRUE(IsZero(s.Output(5.0)));
  }
  Session s = In(Phase::kEStopped);
  EXPECT_EQ(s.HandleCommand(Press(Button::kResume), 3.0).error_code, "estopped");
}

TEST(SessionTest, EpisodeLifecycle) {
  Session s;
  Effect e = s.HandleCommand(Move(0.0, {Button::kResume, Button::kStartEpisode}), 0.0);
  ASSERT_TRUE(e.accepted);
  EXPECT_EQ(e.started_episode, "teleop-0001");
  EXPECT_TRUE(s.HandleCommand(Press(Button::kMarkRetry), 0.5).mark_retry);
  e = s.HandleCommand(Press(Button::kEndEpisode), 1.0);
  EXPECT_EQ(e.ended_episode, "teleop-0001");
  EXPECT_EQ(s.phase(), Phase::kLive);
  e = s.HandleCommand(Press(Button::kStartEpisode), 2.0);
  EXPECT_EQ(e.started_episode, "teleop-0002");
  e = s.HandleCommand(Press(Button::kStop), 3.0);
  EXPECT_EQ(e.ended_episode, "teleop-0002");
  EXPECT_EQ(s.phase(), Phase::kStopped);
}

TEST(SessionTest, RejectedFrameLeavesStateUntouched) {
  Session s = In(Phase::kLive);
  s.HandleCommand(Move(0.05), 2.0, 7);
  const CommandTarget before = s.Target();
  // Pause is fine on its own but the start that follows it is not.
  const Effect e = s.HandleCommand(Move(0.1, {Button::kPause, Button::kStartEpisode}), 3.0, 8);
  EXPECT_FALSE(e.accepted);
  EXPECT_EQ(s.phase(), Phase::kLive);
  EXPECT_EQ(s.Target(), before);
}

TEST(SessionTest, PauseZeroesImmediately) {
  Session s = In(Phase::kLive);
  s.HandleCommand(Move(0.1), 2.0, 1);
  EXPECT_DOUBLE_EQ(s.Output(2.0).arm[0], 0.1);
  s.HandleCommand(Move(0.1, {Button::kPause}), 2.5, 2);
  EXPECT_TRUE(IsZero(s.Output(2.5)));
  // Motion while paused is ignored.
  s.HandleCommand(Move(0.1), 2.6, 3);
  EXPECT_TRUE(IsZero(s.Output(2.6)));
}

TEST(SessionTest, DisconnectPausesLivePhases) {
  for (Phase p : kPhases) {
    Session s = In(p);
    if (IsLive(p)) s.HandleCommand(Move(0.1), 1.0);
    s.Disconnect(1.5);
    EXPECT_EQ(s.phase(), IsLive(p) ? Phase::kPaused : p);
    EXPECT_TRUE(IsZero(s.Output(1.5)));
  }
}

TEST(SessionTest, ClampsToOperatorLimits) {
  Session s;
  TeleopCommand c;
  c.twist = {1.0, -1.0, 0.05, 5.0, -5.0, NAN};
  c.bend_rate = 3.0;
  const TeleopCommand out = s.ClampToLimits(c);
  EXPECT_EQ(out.twist, (std::array<double, 6>{0.15, -0.15, 0.05, 1.0, -1.0, 0.0}));
  EXPECT_DOUBLE_EQ(out.bend_rate, 1.0);
  SessionConfig bad;
  bad.interpolation_duration = 0.0;
  EXPECT_THROW(Session{bad}, ValidationError);
}

TEST(InterpolationTest, Endpoints) {
  ActionVector to;
  to.arm = {0.2, 0.1, -0.1, 0.0, 0.3, 0.0, 0.5};
  to.pump = PumpState::kIn;
  InterpolationPlan p{ActionVector::Zero(), to, 1.0, 0.0};
  EXPECT_EQ(p.Evaluate(), ActionVector::Zero());
  p.elapsed = 0.5;
  const ActionVector half = p.Evaluate();
  for (int i = 0; i < stream::kArmDims; ++i) EXPECT_DOUBLE_EQ(half.arm[i], 0.5 * to.arm[i]);
  EXPECT_EQ(half.pump, PumpState::kIdle);
  p.elapsed = 1.0;
  EXPECT_EQ(p.Evaluate(), to);
  EXPECT_TRUE(p.Done());
}

TEST(InterpolationTest, ResumeInterpolateCapsElapsed) {
  ActionVector to;
  to.arm[0] = 0.2;
  InterpolationPlan p{ActionVector::Zero(), to, 1.0, 0.0};
  for (int i = 0; i < 40; ++i) {
    auto [next, cmd] = ResumeInterpolate(p, kDt);
    EXPECT_GE(next.elapsed, 0.0);
    EXPECT_LE(next.elapsed, next.duration);
    EXPECT_LE(std::abs(cmd.arm[0] - p.Evaluate().arm[0]), 0.2 * kDt + 1e-12);
    p = next;
  }
  EXPECT_TRUE(p.Done());
  EXPECT_EQ(p.Evaluate(), to);
}

TEST(InterpolationTest, ResumeRampIsBoundedPerTick) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    SessionConfig cfg;
    cfg.interpolation_duration = 0.5 + std::abs(u(rng));
    Session s(cfg);
    TeleopCommand c;
    for (double& v : c.twist) v = 0.2 * u(rng);
    c.bend_rate = u(rng);
    c.pump = PumpState::kIn;
    c.buttons = {Button::kResume};
    const double t0 = 10.0 * std::abs(u(rng));
    s.HandleCommand(c, t0);
    const ActionVector to = s.ClampToLimits(c).ToAction();
    ActionVector prev = s.Output(t0);
    EXPECT_TRUE(IsZero(prev));
    const int ticks = static_cast<int>(std::ceil(cfg.interpolation_duration / kDt)) + 2;
    for (int k = 1; k <= ticks; ++k) {
      const ActionVector out = s.Output(t0 + k * kDt);
      for (int i = 0; i < stream::kArmDims; ++i) {
        const double bound = std::abs(to.arm[i]) / (cfg.interpolation_duration / kDt);
        EXPECT_LE(std::abs(out.arm[i] - prev.arm[i]), bound + 1e-9) << i;
      }
      const bool done = k * kDt >= cfg.interpolation_duration;
      EXPECT_EQ(out.pump, done ? PumpState::kIn : PumpState::kIdle) << k;
      prev = out;
    }
    EXPECT_EQ(prev, to);
  }
}

TEST(SessionPropertyTest, FailsafeOutsideLivePhases) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> pick(0, kNumButtons);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  Session s;
  double now = 0.0;
  for (int i = 0; i < 5000; ++i) {
    now += kDt;
    TeleopCommand c;
    for (double& v : c.twist) v = u(rng);
    c.pump = static_cast<PumpState>(rng() % 3);
    const int b = pick(rng);
    // Keep estops rare so the walk explores the other phases.
    if (b < kNumButtons && (b != 0 || rng() % 50 == 0)) c.buttons.push_back(static_cast<Button>(b));
    s.HandleCommand(c, now, i + 1);
    if (s.phase() == Phase::kEStopped && rng() % 20 == 0) s = Session();
    if (!IsLive(s.phase())) {
      EXPECT_TRUE(IsZero(s.Output(now)));
      EXPECT_TRUE(IsZero(s.Output(now + 1.0)));
    }
    if (s.phase() == Phase::kRecording) {
      EXPECT_TRUE(s.episode_id().has_value());
    }
  }
}

TEST(ProtocolTest, ParsesFrames) {
  const ClientFrame h = ParseClientFrame(R"({"type":"hello","version":1,"token":"t"})");
  ASSERT_TRUE(std::holds_alternative<ClientHello>(h));
  EXPECT_EQ(std::get<ClientHello>(h).token, "t");
  const ClientFrame c = ParseClientFrame(
      R"({"type":"command","seq":4,"twist":[0.1,0,0,0,0,0],"bend_rate":0.2,"pump":"in",
          "buttons":["resume","start_episode"],"ack":1.5})");
  ASSERT_TRUE(std::holds_alternative<CommandFrame>(c));
  const CommandFrame& f = std::get<CommandFrame>(c);
  EXPECT_EQ(f.seq, 4u);
  EXPECT_DOUBLE_EQ(f.command.twist[0], 0.1);
  EXPECT_EQ(f.command.pump, PumpState::kIn);
  EXPECT_TRUE(f.command.Has(Button::kStartEpisode));
  EXPECT_DOUBLE_EQ(*f.ack, 1.5);
}

TEST(ProtocolTest, RejectsMalformedFrames) {
  for (const char* bad : {
           "not json",
           "[]",
           R"({"seq":1})",
           R"({"type":"dance"})",
           R"({"type":"hello"})",
           R"({"type":"hello","version":"1"})",
           R"({"type":"command"})",
           R"({"type":"command","seq":-1})",
           R"({"type":"command","seq":1,"twist":[1,2,3]})",
           R"({"type":"command","seq":1,"twist":[1,2,3,4,5,"x"]})",
           R"({"type":"command","seq":1,"pump":"blow"})",
           R"({"type":"command","seq":1,"buttons":["jump"]})",
           R"({"type":"command","seq":1,"buttons":["pause","pause"]})",
           R"({"type":"command","seq":1,"extra":true})",
       }) {
    EXPECT_THROW(ParseClientFrame(bad), ValidationError) << bad;
  }
}

TEST(ProtocolTest, EncodersRoundTrip) {
  CommandFrame f;
  f.seq = 9;
  f.command = Move(0.05, {Button::kPause, Button::kMarkRetry});
  f.command.pump = PumpState::kOut;
  f.ack = 2.25;
  const CommandFrame back = std::get<CommandFrame>(ParseClientFrame(EncodeCommand(f)));
  EXPECT_EQ(back.seq, 9u);
  EXPECT_EQ(back.command.ToAction(), f.command.ToAction());
  EXPECT_EQ(back.command.buttons, f.command.buttons);
  EXPECT_EQ(back.ack, f.ack);
  const ClientHello hb =
      std::get<ClientHello>(ParseClientFrame(EncodeClientHello({1, "tok", "test"})));
  EXPECT_EQ(hb.client, "test");

  ServerHello sh;
  sh.workspace = {{-0.4, -0.4, 0.0}, {0.4, 0.4, 0.6}};
  const json hello = json::parse(EncodeHello(sh));
  EXPECT_EQ(hello["protocol"], "harvest-teleop");
  EXPECT_EQ(hello["version"], kProtocolVersion);
  EXPECT_EQ(hello["buttons"].size(), static_cast<std::size_t>(kNumButtons));
  EXPECT_DOUBLE_EQ(hello["control_hz"].get<double>(), 30.0);

  Telemetry t;
  t.phase = Phase::kRecording;
  t.episode = "teleop-0001";
  t.stage_flags = {true, true, false, false, false};
  t.fruits.push_back({3, {0.1, 0.2, 0.3}, true, sim::FruitLocation::kHeld, 1});
  const json tj = json::parse(EncodeTelemetry(t));
  EXPECT_EQ(tj["phase"], "recording");
  EXPECT_EQ(tj["stage_flags"], json({true, true, false, false, false}));
  EXPECT_EQ(tj["fruits"][0]["location"], "held");
  EXPECT_TRUE(tj["rtt_ms"]["p95"].is_null());

  const json err = json::parse(EncodeError("malformed", "bad", 5));
  EXPECT_EQ(err["seq"], 5);
}

TeleopRuntimeConfig RuntimeConfig() {
  TeleopRuntimeConfig c;
  c.single_fruit = harvest::testing::kFruit;
  return c;
}

void Write(TeleopRuntime& rt, const Session& s, const EpisodeControl& ep = {}) {
  rt.cell().Write({s.Target(), ep});
}

TEST(TeleopRuntimeTest, PauseZeroesWithinOneTick) {
  TeleopRuntime rt(RuntimeConfig());
  Session s;
  s.HandleCommand(Move(0.05, {Button::kResume}), rt.Now(), 1);
  Write(rt, s);
  for (int i = 0; i < 40; ++i) rt.Tick();
  ASSERT_DOUBLE_EQ(rt.Snapshot().command.arm[0], 0.05);
  s.HandleCommand(Move(0.05, {Button::kPause}), rt.Now(), 2);
  Write(rt, s);
  rt.Tick();
  EXPECT_TRUE(IsZero(rt.Snapshot().command));
  const Vec3 p = rt.Snapshot().ee.position;
  for (int i = 0; i < 10; ++i) rt.Tick();
  EXPECT_EQ(rt.Snapshot().ee.position, p);
}

TEST(TeleopRuntimeTest, EStopZeroesNextTickAndLatches) {
  TeleopRuntime rt(RuntimeConfig());
  Session s;
  s.HandleCommand(Move(0.05, {Button::kResume}), rt.Now(), 1);
  Write(rt, s);
  for (int i = 0; i < 40; ++i) rt.Tick();
  rt.RaiseEStop();
  rt.Tick();
  EXPECT_TRUE(rt.Snapshot().estop);
  EXPECT_TRUE(IsZero(rt.Snapshot().command));
  // Even a stale nonzero target stays unexecuted.
  for (int i = 0; i < 10; ++i) {
    rt.Tick();
    EXPECT_TRUE(IsZero(rt.Snapshot().command));
  }
}

TEST(TeleopRuntimeTest, RecordsOperatorEpisode) {
  harvest::testing::TempDir dir;
  TeleopRuntimeConfig cfg = RuntimeConfig();
  cfg.store_root = dir.path();
  TeleopRuntime rt(cfg);
  Session s;
  EpisodeControl ep;
  Effect e = s.HandleCommand(Move(0.0, {Button::kResume, Button::kStartEpisode}), rt.Now(), 1);
  ep = {1, e.started_episode, 0};
  Write(rt, s, ep);
  for (int i = 0; i < 5; ++i) rt.Tick();
  s.HandleCommand(Move(0.05), rt.Now(), 2);
  Write(rt, s, ep);
  for (int i = 0; i < 40; ++i) rt.Tick();
  s.HandleCommand(Press(Button::kMarkRetry), rt.Now(), 3);
  ep.retry_marks = 1;
  Write(rt, s, ep);
  for (int i = 0; i < 5; ++i) rt.Tick();
  e = s.HandleCommand(Press(Button::kEndEpisode), rt.Now(), 4);
  ep = {2, std::nullopt, 1};
  Write(rt, s, ep);
  rt.Tick();

  const auto records = rt.records();
  ASSERT_EQ(records.size(), 1u);
  const store::EpisodeRecord& r = records[0];
  EXPECT_EQ(r.manifest.id, "teleop-0001");
  EXPECT_EQ(r.manifest.source, "teleop");
  EXPECT_EQ(r.ticks.size(), 50u);
  EXPECT_EQ(r.ticks.front().scheduled, 0.0);
  EXPECT_EQ(r.manifest.retries, 1);
  EXPECT_TRUE(std::any_of(r.events.begin(), r.events.end(),
                          [](const sim::SimEvent& ev) { return ev.kind == sim::EventKind::kRetry; }));
  for (const auto& t : r.ticks) EXPECT_EQ(t.source, runtime::ActionSource::kOperator);
  EXPECT_TRUE(std::any_of(r.actions.begin(), r.actions.end(),
                          [](const auto& a) { return a.action.arm[0] > 0.0; }));
  ASSERT_EQ(rt.written().size(), 1u);
  EXPECT_EQ(store::LoadEpisode(rt.written()[0]).manifest.id, "teleop-0001");
}

TEST(TeleopRuntimeTest, NoHiddenMotion) {
  TeleopRuntime rt(RuntimeConfig());
  Session s;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  std::vector<std::uint64_t> received;
  std::uint64_t seq = 0;
  for (int i = 0; i < 2000; ++i) {
    if (rng() % 4 == 0) {
      TeleopCommand c = Move(u(rng));
      const auto r = rng() % 40;
      if (r == 0) c.buttons = {Button::kPause};
      if (r == 1) c.buttons = {Button::kResume};
      if (r == 2) c.buttons = {Button::kStop};
      ++seq;
      if (s.HandleCommand(c, rt.Now(), seq).accepted) received.push_back(seq);
      Write(rt, s);
    }
    rt.Tick();
  }
  const auto audit = rt.audit();
  ASSERT_EQ(audit.size(), 2000u);
  std::size_t moving = 0;
  for (const TickAudit& a : audit) {
    if (!a.nonzero) continue;
    ++moving;
    EXPECT_NE(a.frame_seq, 0u) << a.tick;
    EXPECT_TRUE(std::binary_search(received.begin(), received.end(), a.frame_seq)) << a.tick;
  }
  EXPECT_GT(moving, 100u);
}

TEST(TeleopRuntimeTest, NewEpisodeResetsScene) {
  TeleopRuntimeConfig cfg;
  cfg.seed = 40;
  TeleopRuntime rt(cfg);
  const std::uint64_t rev = rt.scene_revision();
  EXPECT_EQ(rt.Scene(), sim::GenerateScene({}, 40));
  rt.cell().Write({CommandTarget{}, {1, std::string("teleop-0001"), 0}});
  rt.Tick();
  EXPECT_GT(rt.scene_revision(), rev);
  EXPECT_EQ(rt.Scene(), sim::GenerateScene({}, 41));
  rt.cell().Write({CommandTarget{}, {2, std::nullopt, 0}});
  rt.Tick();
  const auto records = rt.records();
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].manifest.seed, 41u);
  EXPECT_EQ(records[0].manifest.scene, sim::GenerateScene({}, 41));
  EXPECT_EQ(records[0].manifest.config["scene"]["kind"], "generated");
}

}  // namespace
}  // namespace harvest::teleop
