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

#include "harvest/policy/imitation_loss.h"

#include <algorithm>
#include <cmath>

#include "harvest/common/error.h"

namespace harvest::policy {

void LossWeights::Validate() const {
  if (!(lambda_arm >= 0.0) || !(lambda_pump >= 0.0) || !std::isfinite(lambda_arm) ||
      !std::isfinite(lambda_pump)) {
    throw ValidationError("loss weights must be finite and >= 0");
  }
  if (lambda_arm == 0.0 && lambda_pump == 0.0) {
    throw ValidationError("loss weights must not both be zero");
  }
}

PumpDistribution OneHot(stream::PumpState pump) {
  PumpDistribution d{};
  d[static_cast<int>(pump)] = 1.0;
  return d;
}

double PumpCrossEntropy(const PumpDistribution& pred, stream::PumpState label) {
  double sum = 0.0;
  for (double p : pred) {
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("pump probabilities must lie in [0, 1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kNormalizationTolerance) {
    throw ValidationError("pump probabilities must sum to 1");
  }
  return -std::log(std::max(pred[static_cast<int>(label)], kProbabilityFloor));
}

double ArmSquaredError(const stream::ArmCommand& pred, const stream::ArmCommand& demo) {
  double s = 0.0;
  for (int i = 0; i < stream::kArmDims; ++i) {
    const double d = pred[i] - demo[i];
    s += d * d;
  }
  return s;
}

double ImitationLoss(const stream::ArmCommand& pred_arm, const PumpDistribution& pred_pump,
                     const stream::ActionVector& demo, const LossWeights& w) {
  w.Validate();
  const double ce = PumpCrossEntropy(pred_pump, demo.pump);
  // -log(1) is exactly zero, but keep a matched one-hot from reporting -0.
  return w.lambda_arm * ArmSquaredError(pred_arm, demo.arm) + w.lambda_pump * (ce == 0.0 ? 0.0 : ce);
}

double ImitationLoss(const stream::ActionVector& pred, const stream::ActionVector& demo,
                     const LossWeights& w) {
  return ImitationLoss(pred.arm, OneHot(pred.pump), demo, w);
}

double MeanImitationLoss(std::span<const stream::ActionVector> pred,
                         std::span<const stream::ActionVector> demo, const LossWeights& w) {
  if (pred.empty() || pred.size() != demo.size()) {
    throw ValidationError("loss inputs must be non-empty and of equal length");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) total += ImitationLoss(pred[i], demo[i], w);
  return total / static_cast<double>(pred.size());
}

}  // namespace harvest::policy
