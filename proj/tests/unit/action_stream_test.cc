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
#include <vector>

#include <gtest/gtest.h>

#include "harvest/common/error.h"
#include "harvest/stream/action.h"
#include "harvest/stream/action_queue.h"

namespace harvest::stream {
namespace {

constexpr double kDt = 1.0 / 30.0;

ActionVector Filled(double v, PumpState pump = PumpState::kIdle) {
  ActionVector a;
  a.arm.fill(v);
  a.pump = pump;
  return a;
}

ActionChunk Chunk(double start, std::size_t n, double value = 0.0,
                  PumpState pump = PumpState::kIdle) {
  ActionChunk c;
  c.start_timestamp = start;
  c.period = kDt;
  c.actions.assign(n, Filled(value, pump));
  return c;
}

std::vector<TimedAction> Timed(double start, std::initializer_list<double> values,
                               PumpState pump = PumpState::kIdle) {
  std::vector<TimedAction> out;
  int i = 0;
  for (double v : values) out.push_back({start + kDt * i++, Filled(v, pump)});
  return out;
}

bool StrictlyIncreasing(const std::vector<TimedAction>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i - 1].timestamp < v[i].timestamp)) return false;
  }
  return true;
}

TEST(ChunkToTimedTest, SingleElement) {
  ActionChunk c{2.0, 0.1, {Filled(0.3)}};
  const auto t = ChunkToTimed(c);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0].timestamp, 2.0);
  EXPECT_EQ(t[0].action, Filled(0.3));
}

TEST(ChunkToTimedTest, TimestampsFollowPeriod) {
  ActionChunk c{0.0, kDt, {Filled(1), Filled(2), Filled(3)}};
  const auto t = ChunkToTimed(c);
  ASSERT_EQ(t.size(), 3u);
  EXPECT_DOUBLE_EQ(t[0].timestamp, 0.0);
  EXPECT_DOUBLE_EQ(t[1].timestamp, 1.0 / 30.0);
  EXPECT_DOUBLE_EQ(t[2].timestamp, 2.0 / 30.0);
  EXPECT_EQ(t[2].action, Filled(3));
}

TEST(ChunkToTimedTest, RejectsBadChunks) {
  EXPECT_THROW(ChunkToTimed({0.0, 0.0, {Filled(0)}}), ValidationError);
  EXPECT_THROW(ChunkToTimed({0.0, -kDt, {Filled(0)}}), ValidationError);
  EXPECT_THROW(ChunkToTimed({0.0, kDt, {}}), ValidationError);
  EXPECT_THROW(ChunkToTimed({-1.0, kDt, {Filled(0)}}), ValidationError);
  ActionVector nan = Filled(0);
  nan.arm[2] = std::nan("");
  EXPECT_THROW(ChunkToTimed({0.0, kDt, {nan}}), ValidationError);
}

TEST(BlendOverlapTest, AlphaOneKeepsOldArmAndNewPump) {
  const auto old = Timed(0.0, {1, 2, 3}, PumpState::kOut);
  const auto fresh = Timed(0.0, {7, 8, 9}, PumpState::kIn);
  const auto out = BlendOverlap(old, fresh, 1.0, kDt);
  ASSERT_EQ(out.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(out[i].action.arm, old[i].action.arm);
    EXPECT_EQ(out[i].action.pump, PumpState::kIn);
  }
}

TEST(BlendOverlapTest, AlphaZeroIsNew) {
  const auto old = Timed(0.0, {1, 2, 3}, PumpState::kOut);
  const auto fresh = Timed(0.0, {7, 8, 9, 10}, PumpState::kIn);
  EXPECT_EQ(BlendOverlap(old, fresh, 0.0, kDt), fresh);
}

TEST(BlendOverlapTest, HalfBlendOfOnesAndZeros) {
  const auto out = BlendOverlap(Timed(0.0, {1, 1}), Timed(0.0, {0, 0}, PumpState::kIn), 0.5, kDt);
  ASSERT_EQ(out.size(), 2u);
  for (const auto& e : out) {
    for (double v : e.action.arm) EXPECT_EQ(v, 0.5);
    EXPECT_EQ(e.action.pump, PumpState::kIn);
  }
}

TEST(BlendOverlapTest, RejectsBadInputs) {
  const auto a = Timed(0.0, {1, 2});
  EXPECT_THROW(BlendOverlap(a, a, -0.1, kDt), ValidationError);
  EXPECT_THROW(BlendOverlap(a, a, 1.1, kDt), ValidationError);
  auto bad = a;
  std::swap(bad[0], bad[1]);
  EXPECT_THROW(BlendOverlap(bad, a, 0.5, kDt), ValidationError);
  EXPECT_THROW(BlendOverlap(a, bad, 0.5, kDt), ValidationError);
}

TEST(BlendOverlapTest, MatchesWithinHalfPeriodOnly) {
  // Old entries offset by 0.4 periods still pair up; 0.6 periods do not.
  auto old = Timed(0.4 * kDt, {1, 1});
  const auto fresh = Timed(0.0, {0, 0, 0});
  auto out = BlendOverlap(old, fresh, 0.5, kDt);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0].action.arm[0], 0.5);
  EXPECT_EQ(out[0].timestamp, fresh[0].timestamp);
}

TEST(BlendOverlapTest, LinearRampStartsOldEndsNew) {
  const auto old = Timed(0.0, {1, 1, 1, 1, 1});
  const auto fresh = Timed(0.0, {0, 0, 0, 0, 0});
  const auto out = BlendOverlap(old, fresh, 0.5, kDt, BlendMode::kLinearRamp);
  ASSERT_EQ(out.size(), 5u);
  EXPECT_DOUBLE_EQ(out.front().action.arm[0], 1.0);
  EXPECT_DOUBLE_EQ(out.back().action.arm[0], 0.0);
  for (std::size_t i = 1; i < out.size(); ++i) {
    EXPECT_LE(out[i].action.arm[0], out[i - 1].action.arm[0]);
  }
}

TEST(BlendOverlapTest, ConvexAndMonotoneOnRandomCases) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> len(0, 8), off(-4, 8), pump(0, 2);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<TimedAction> old, fresh;
    const int no = len(rng), nf = len(rng) + 1, shift = off(rng);
    for (int i = 0; i < no; ++i) {
      ActionVector a;
      for (double& v : a.arm) v = u(rng);
      old.push_back({1.0 + i * kDt, a});
    }
    for (int i = 0; i < nf; ++i) {
      ActionVector a;
      for (double& v : a.arm) v = u(rng);
      a.pump = static_cast<PumpState>(pump(rng));
      fresh.push_back({1.0 + (shift + i) * kDt, a});
    }
    const double alpha = (u(rng) + 1.0) / 2.0;
    for (BlendMode mode : {BlendMode::kConstant, BlendMode::kLinearRamp}) {
      const auto out = BlendOverlap(old, fresh, alpha, kDt, mode);
      ASSERT_TRUE(StrictlyIncreasing(out));
      for (const auto& e : out) {
        const int p = static_cast<int>(e.action.pump);
        ASSERT_TRUE(p >= 0 && p <= 2);
        // Every output arm value lies between some old and new value at its slot.
        const auto nf_it = std::find_if(fresh.begin(), fresh.end(), [&](const TimedAction& f) {
          return std::abs(f.timestamp - e.timestamp) < 1e-12;
        });
        if (nf_it == fresh.end()) continue;
        const auto no_it = std::find_if(old.begin(), old.end(), [&](const TimedAction& o) {
          return std::abs(o.timestamp - e.timestamp) <= kDt / 2;
        });
        for (int d = 0; d < kArmDims; ++d) {
          const double nv = nf_it->action.arm[d];
          const double ov = no_it == old.end() ? nv : no_it->action.arm[d];
          EXPECT_GE(e.action.arm[d], std::min(ov, nv) - 1e-15);
          EXPECT_LE(e.action.arm[d], std::max(ov, nv) + 1e-15);
        }
        EXPECT_EQ(e.action.pump, nf_it->action.pump);
      }
    }
  }
}

QueueConfig Config(std::size_t h = 5, std::size_t tau = 3, std::size_t cap = 10) {
  QueueConfig c;
  c.chunk_length = h;
  c.refill_threshold = tau;
  c.capacity = cap;
  c.period = kDt;
  return c;
}

TEST(QueueConfigTest, Validates) {
  EXPECT_NO_THROW(Config().Validate());
  EXPECT_THROW(Config(5, 0, 10).Validate(), ValidationError);
  EXPECT_THROW(Config(5, 6, 10).Validate(), ValidationError);
  EXPECT_THROW(Config(11, 3, 10).Validate(), ValidationError);
  QueueConfig c = Config();
  c.alpha = 1.5;
  EXPECT_THROW(c.Validate(), ValidationError);
  c = Config();
  c.period = 0;
  EXPECT_THROW(c.Validate(), ValidationError);
}

TEST(ActionQueueTest, EmptyPlusChunkIsChunk) {
  ActionQueue q(Config());
  const ActionChunk c = Chunk(0.0, 5, 0.2);
  const EnqueueResult r = q.EnqueueChunk(c, 0.0);
  EXPECT_EQ(r.appended, 5u);
  EXPECT_EQ(q.Snapshot(), ChunkToTimed(c));
}

TEST(ActionQueueTest, OverlapBlendedTailAppended) {
  // Tail covers steps 0..4, chunk covers 2..6 with alpha 0.5.
  ActionQueue q(Config(5, 3, 10));
  q.EnqueueChunk(Chunk(0.0, 5, 1.0, PumpState::kOut), 0.0);
  const EnqueueResult r = q.EnqueueChunk(Chunk(2 * kDt, 5, 0.0, PumpState::kIn), 0.0);
  EXPECT_EQ(r.blended, 3u);
  EXPECT_EQ(r.appended, 2u);
  const auto s = q.Snapshot();
  ASSERT_EQ(s.size(), 7u);
  const double expected[] = {1.0, 1.0, 0.5, 0.5, 0.5, 0.0, 0.0};
  const PumpState pumps[] = {PumpState::kOut, PumpState::kOut, PumpState::kIn, PumpState::kIn,
                             PumpState::kIn,  PumpState::kIn,  PumpState::kIn};
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(s[i].action.arm[0], expected[i]) << i;
    EXPECT_EQ(s[i].action.pump, pumps[i]) << i;
  }
}

TEST(ActionQueueTest, AllStaleChunkLeavesQueueUntouched) {
  ActionQueue q(Config());
  q.EnqueueChunk(Chunk(1.0, 3, 0.3), 1.0);
  const auto before = q.Snapshot();
  const EnqueueResult r = q.EnqueueChunk(Chunk(0.0, 5), 1.0);
  EXPECT_TRUE(r.all_stale);
  EXPECT_EQ(r.stale_dropped, 5u);
  EXPECT_EQ(q.Snapshot(), before);
}

TEST(ActionQueueTest, StaleHeadDropped) {
  ActionQueue q(Config());
  const EnqueueResult r = q.EnqueueChunk(Chunk(0.0, 5), 2.5 * kDt);
  EXPECT_EQ(r.stale_dropped, 3u);
  EXPECT_EQ(q.size(), 2u);
  EXPECT_GE(q.Snapshot().front().timestamp, 2.5 * kDt);
}

TEST(ActionQueueTest, TruncatesToCapacity) {
  ActionQueue q(Config(5, 3, 6));
  q.EnqueueChunk(Chunk(0.0, 5), 0.0);
  const EnqueueResult r = q.EnqueueChunk(Chunk(5 * kDt, 5), 0.0);
  EXPECT_EQ(q.size(), 6u);
  EXPECT_EQ(r.truncated, 4u);
  EXPECT_DOUBLE_EQ(q.Snapshot().back().timestamp, 5 * kDt);
}

TEST(ActionQueueTest, PopDue) {
  ActionQueue q(Config());
  EXPECT_FALSE(q.PopDue(0.0));
  ActionChunk c{0.0, kDt, {Filled(1), Filled(2)}};
  c.period = 0.033;
  ActionQueue q2(Config());
  q2.EnqueueChunk(c, 0.0);
  auto a = q2.PopDue(0.0);
  ASSERT_TRUE(a);
  EXPECT_EQ(a->timestamp, 0.0);
  EXPECT_FALSE(q2.PopDue(0.0));
  ActionQueue q3(Config());
  q3.EnqueueChunk({10.0, kDt, {Filled(1)}}, 0.0);
  EXPECT_FALSE(q3.PopDue(0.0));
}

TEST(ActionQueueTest, DrainsInExactlyNCalls) {
  ActionQueue q(Config(5, 3, 10));
  q.EnqueueChunk(Chunk(0.0, 5), 0.0);
  q.EnqueueChunk(Chunk(5 * kDt, 5), 0.0);
  int pops = 0;
  double last = -1.0;
  while (auto a = q.PopDue(100.0)) {
    EXPECT_GT(a->timestamp, last);
    last = a->timestamp;
    ++pops;
  }
  EXPECT_EQ(pops, 10);
}

TEST(ActionQueueTest, NeedsRefillIsStrict) {
  QueueConfig c;
  c.period = kDt;
  ActionQueue q(c);
  EXPECT_TRUE(q.NeedsRefill());
  q.EnqueueChunk(Chunk(0.0, 25), 0.0);
  EXPECT_FALSE(q.NeedsRefill());
  q.PopDue(0.0);
  EXPECT_EQ(q.size(), 24u);
  EXPECT_TRUE(q.NeedsRefill());
}

TEST(ActionQueueTest, MustGoIsEdgeTriggered) {
  ActionQueue q(Config());
  auto e1 = q.RaiseMustGo(0.0);
  ASSERT_TRUE(e1);
  EXPECT_EQ(e1->sequence, 1u);
  EXPECT_FALSE(q.RaiseMustGo(kDt));
  EXPECT_FALSE(q.RaiseMustGo(2 * kDt));
  q.EnqueueChunk(Chunk(3 * kDt, 2), 3 * kDt);
  EXPECT_FALSE(q.RaiseMustGo(3 * kDt));
  q.PopDue(3 * kDt);
  q.PopDue(4 * kDt);
  auto e2 = q.RaiseMustGo(5 * kDt);
  ASSERT_TRUE(e2);
  EXPECT_EQ(e2->sequence, 2u);
  EXPECT_EQ(q.must_go_count(), 2u);
}

TEST(ActionQueueTest, NeverEmptyMeansNoMustGo) {
  ActionQueue q(Config(5, 3, 10));
  q.EnqueueChunk(Chunk(0.0, 5), 0.0);
  for (int k = 0; k < 40; ++k) {
    const double now = k * kDt;
    if (q.NeedsRefill()) q.EnqueueChunk(Chunk(now + kDt, 5), now);
    EXPECT_FALSE(q.RaiseMustGo(now));
    q.PopDue(now);
  }
  EXPECT_EQ(q.must_go_count(), 0u);
}

TEST(ActionQueueTest, RandomOperationSequencesStayOrdered) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> op(0, 3), len(1, 6), off(-3, 6);
  for (int trial = 0; trial < 300; ++trial) {
    ActionQueue q(Config(6, 3, 12));
    double now = 0.0;
    for (int step = 0; step < 40; ++step) {
      switch (op(rng)) {
        case 0:
        case 1: {
          const double start = std::max(0.0, now + off(rng) * kDt);
          q.EnqueueChunk(Chunk(start, static_cast<std::size_t>(len(rng)), 0.1), now);
          break;
        }
        case 2:
          q.PopDue(now);
          break;
        default:
          now += kDt;
          break;
      }
      const auto s = q.Snapshot();
      ASSERT_TRUE(StrictlyIncreasing(s));
      ASSERT_LE(s.size(), 12u);
    }
  }
}

TEST(ActionQueueTest, ClearEmpties) {
  ActionQueue q(Config());
  q.EnqueueChunk(Chunk(0.0, 5), 0.0);
  q.Clear();
  EXPECT_TRUE(q.empty());
}

}  // namespace
}  // namespace harvest::stream
