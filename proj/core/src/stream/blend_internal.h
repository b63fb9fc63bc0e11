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

#ifndef HARVEST_STREAM_BLEND_INTERNAL_H_
#define HARVEST_STREAM_BLEND_INTERNAL_H_

#include <cstddef>
#include <span>
#include <vector>

#include "harvest/stream/action.h"

namespace harvest::stream {

struct BlendOutcome {
  std::vector<TimedAction> merged;
  std::size_t matched = 0;
  std::size_t superseded = 0;
};

BlendOutcome BlendOverlapDetailed(std::span<const TimedAction> old_tail,
                                  std::span<const TimedAction> fresh, double alpha,
                                  double period, BlendMode mode);

}  // namespace harvest::stream

#endif  // HARVEST_STREAM_BLEND_INTERNAL_H_
