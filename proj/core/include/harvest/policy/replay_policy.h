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

#ifndef HARVEST_POLICY_REPLAY_POLICY_H_
#define HARVEST_POLICY_REPLAY_POLICY_H_

#include <vector>

#include "harvest/policy/policy.h"

namespace harvest::policy {

// Re-emits a recorded action stream. The chunk starting at time t holds the
// recorded actions from the slot nearest t onward; past the end it holds
// zeros with the pump idle.
class ReplayPolicy : public Policy {
 public:
  // Throws ValidationError on an empty stream, non-increasing timestamps or
  // a gap longer than one period.
  ReplayPolicy(std::vector<stream::TimedAction> recorded, PolicySpec spec, double period);

  const std::vector<stream::TimedAction>& recorded() const { return recorded_; }

 protected:
  std::vector<stream::ActionVector> Plan(const Observation& obs, double start_time) override;

 private:
  std::vector<stream::TimedAction> recorded_;
};

}  // namespace harvest::policy

#endif  // HARVEST_POLICY_REPLAY_POLICY_H_
