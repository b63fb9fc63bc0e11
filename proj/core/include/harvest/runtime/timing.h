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

#ifndef HARVEST_RUNTIME_TIMING_H_
#define HARVEST_RUNTIME_TIMING_H_

#include <cstddef>
#include <span>

#include "harvest/runtime/episode_log.h"

namespace harvest::runtime {

struct TimingReport {
  double effective_rate = 0.0;  // queue-sourced ticks per second of episode time
  double jitter_p50 = 0.0;
  double jitter_p95 = 0.0;
  double jitter_max = 0.0;
  std::size_t starvation_ticks = 0;
  std::size_t must_go_count = 0;
  double mean_inference_latency = 0.0;
  std::size_t ticks = 0;

  bool operator==(const TimingReport&) const = default;
};

// Nearest-rank percentile, q in [0, 1]. Throws ValidationError on empty input.
double Percentile(std::span<const double> values, double q);

// Throws ValidationError when the log has no ticks.
TimingReport ComputeTimingReport(const EpisodeLog& log);

}  // namespace harvest::runtime

#endif  // HARVEST_RUNTIME_TIMING_H_
