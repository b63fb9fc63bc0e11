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

#include "harvest/runtime/timing.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "harvest/common/error.h"

namespace harvest::runtime {

double Percentile(std::span<const double> values, double q) {
  if (values.empty()) throw ValidationError("percentile of an empty sample");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const double rank = std::ceil(std::clamp(q, 0.0, 1.0) * static_cast<double>(v.size()));
  const std::size_t idx = rank < 1.0 ? 0 : static_cast<std::size_t>(rank) - 1;
  return v[std::min(idx, v.size() - 1)];
}

TimingReport ComputeTimingReport(const EpisodeLog& log) {
  if (log.ticks.empty()) throw ValidationError("timing report needs a non-empty log");
  TimingReport r;
  r.ticks = log.ticks.size();
  std::size_t from_queue = 0;
  std::vector<double> jitter;
  jitter.reserve(log.ticks.size());
  for (const TickStats& t : log.ticks) {
    if (t.source == ActionSource::kQueue || t.source == ActionSource::kOperator) ++from_queue;
    if (t.source == ActionSource::kHold) ++r.starvation_ticks;
    jitter.push_back(t.dispatched - t.scheduled);
  }
  r.effective_rate =
      static_cast<double>(from_queue) / (static_cast<double>(log.ticks.size()) * log.period);
  r.jitter_p50 = Percentile(jitter, 0.50);
  r.jitter_p95 = Percentile(jitter, 0.95);
  r.jitter_max = *std::max_element(jitter.begin(), jitter.end());
  r.must_go_count = log.must_go.size();
  if (!log.inferences.empty()) {
    double sum = 0.0;
    for (const auto& i : log.inferences) sum += i.ready_time - i.request_time;
    r.mean_inference_latency = sum / static_cast<double>(log.inferences.size());
  }
  return r;
}

}  // namespace harvest::runtime
