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

#ifndef HARVEST_POLICY_IMITATION_LOSS_H_
#define HARVEST_POLICY_IMITATION_LOSS_H_

#include <array>
#include <span>

#include "harvest/stream/action.h"

namespace harvest::policy {

struct LossWeights {
  double lambda_arm = 1.0;
  double lambda_pump = 0.1;

  void Validate() const;
};

// Probabilities indexed by the PumpState encoding (in, out, idle).
using PumpDistribution = std::array<double, 3>;

inline constexpr double kProbabilityFloor = 1e-7;
inline constexpr double kNormalizationTolerance = 1e-9;

PumpDistribution OneHot(stream::PumpState pump);

// Natural-log cross entropy of `label` under `pred`. Probabilities below
// kProbabilityFloor are floored so a confident miss stays finite. Throws
// ValidationError unless pred is a probability triple.
double PumpCrossEntropy(const PumpDistribution& pred, stream::PumpState label);

double ArmSquaredError(const stream::ArmCommand& pred, const stream::ArmCommand& demo);

double ImitationLoss(const stream::ArmCommand& pred_arm, const PumpDistribution& pred_pump,
                     const stream::ActionVector& demo, const LossWeights& w);

// Hard pump prediction, treated as one-hot.
double ImitationLoss(const stream::ActionVector& pred, const stream::ActionVector& demo,
                     const LossWeights& w);

// Mean per-step loss. Throws ValidationError on empty or mismatched inputs.
double MeanImitationLoss(std::span<const stream::ActionVector> pred,
                         std::span<const stream::ActionVector> demo, const LossWeights& w);

}  // namespace harvest::policy

#endif  // HARVEST_POLICY_IMITATION_LOSS_H_
