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

#include "harvest/policy/policy.h"

#include <cmath>
#include <utility>

#include "harvest/common/error.h"

namespace harvest::policy {

LatencyModel LatencyModel::Constant(double seconds) {
  LatencyModel m;
  m.kind = Kind::kConstant;
  m.constant = seconds;
  return m;
}

LatencyModel LatencyModel::Lognormal(double median_seconds, double log_sigma) {
  LatencyModel m;
  m.kind = Kind::kLognormal;
  m.log_mean = std::log(median_seconds);
  m.log_sigma = log_sigma;
  return m;
}

double LatencyModel::Sample(Rng& rng) const {
  double v = constant;
  if (kind == Kind::kLognormal) {
    std::normal_distribution<double> n(log_mean, log_sigma);
    v = std::exp(n(rng));
  }
  if (spike_probability > 0.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (u(rng) < spike_probability) v += spike_max * u(rng);
  }
  return v;
}

void LatencyModel::Validate() const {
  if (kind == Kind::kConstant && !(constant >= 0.0 && std::isfinite(constant))) {
    throw ValidationError("constant latency must be finite and >= 0");
  }
  if (kind == Kind::kLognormal && !(std::isfinite(log_mean) && log_sigma >= 0.0)) {
    throw ValidationError("lognormal latency needs finite log_mean and log_sigma >= 0");
  }
  if (!(spike_probability >= 0.0 && spike_probability <= 1.0) || !(spike_max >= 0.0)) {
    throw ValidationError("latency spike parameters out of range");
  }
}

std::string_view PolicyKindName(PolicyKind k) {
  switch (k) {
    case PolicyKind::kScripted:
      return "scripted_harvest";
    case PolicyKind::kReplay:
      return "replay";
    case PolicyKind::kZero:
      return "zero";
    case PolicyKind::kNeverPump:
      return "never_pump";
  }
  return "unknown";
}

std::optional<PolicyKind> ParsePolicyKind(std::string_view s) {
  for (PolicyKind k : {PolicyKind::kScripted, PolicyKind::kReplay, PolicyKind::kZero,
                       PolicyKind::kNeverPump}) {
    if (PolicyKindName(k) == s) return k;
  }
  return std::nullopt;
}

void PolicySpec::Validate() const {
  if (chunk_length == 0) throw ValidationError("chunk_length must be >= 1");
  if (!(action_noise >= 0.0)) throw ValidationError("action_noise must be >= 0");
  latency.Validate();
}

Policy::Policy(PolicySpec spec, double period) : spec_(std::move(spec)), period_(period) {
  spec_.Validate();
  if (!(period_ > 0.0)) throw ValidationError("policy period must be positive");
}

InferenceResult Policy::Infer(const Observation& obs, double request_time) {
  Rng rng(DeriveSeed(DeriveSeed(spec_.seed, rng_stream::kPolicy), DoubleBits(request_time)));
  const double latency = spec_.latency.Sample(rng);
  InferenceResult out;
  out.ready_time = request_time + latency;
  out.chunk.start_timestamp = out.ready_time;
  out.chunk.period = period_;
  out.chunk.actions = Plan(obs, out.ready_time);
  out.chunk.actions.resize(spec_.chunk_length);
  if (spec_.action_noise > 0.0) {
    std::normal_distribution<double> n(0.0, spec_.action_noise);
    for (auto& a : out.chunk.actions) {
      for (int i = 0; i < 3; ++i) a.arm[i] += n(rng);
    }
  }
  return out;
}

std::vector<stream::ActionVector> ZeroPolicy::Plan(const Observation&, double) {
  return std::vector<stream::ActionVector>(chunk_length(), stream::ActionVector::Zero());
}

}  // namespace harvest::policy
