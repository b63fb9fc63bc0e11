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

#ifndef HARVEST_POLICY_POLICY_H_
#define HARVEST_POLICY_POLICY_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "harvest/common/rng.h"
#include "harvest/policy/observation.h"
#include "harvest/stream/action.h"

namespace harvest::policy {

// Inference latency. Lognormal draws are exp(N(log_mean, log_sigma)); with
// probability spike_probability a uniform extra delay in [0, spike_max] is
// added on top.
struct LatencyModel {
  enum class Kind { kConstant, kLognormal };
  Kind kind = Kind::kConstant;
  double constant = 0.0;
  double log_mean = 0.0;
  double log_sigma = 0.0;
  double spike_probability = 0.0;
  double spike_max = 0.0;

  static LatencyModel Constant(double seconds);
  static LatencyModel Lognormal(double median_seconds, double log_sigma);

  double Sample(Rng& rng) const;
  void Validate() const;
};

enum class PolicyKind { kScripted, kReplay, kZero, kNeverPump };

std::string_view PolicyKindName(PolicyKind k);
std::optional<PolicyKind> ParsePolicyKind(std::string_view s);

struct PolicySpec {
  PolicyKind kind = PolicyKind::kScripted;
  std::size_t chunk_length = 50;
  LatencyModel latency;
  double action_noise = 0.0;  // gaussian sigma added to linear arm velocities
  std::uint64_t seed = 0;

  void Validate() const;
};

struct InferenceResult {
  stream::ActionChunk chunk;
  double ready_time = 0.0;
};

class Policy {
 public:
  Policy(PolicySpec spec, double period);
  virtual ~Policy() = default;
  Policy(const Policy&) = delete;
  Policy& operator=(const Policy&) = delete;

  // Latency and noise draws are seeded from (seed, request_time), so a call
  // is reproducible regardless of how many calls preceded it.
  InferenceResult Infer(const Observation& obs, double request_time);

  const PolicySpec& spec() const { return spec_; }
  double period() const { return period_; }
  std::size_t chunk_length() const { return spec_.chunk_length; }

 protected:
  virtual std::vector<stream::ActionVector> Plan(const Observation& obs, double start_time) = 0;

 private:
  PolicySpec spec_;
  double period_;
};

// Emits all-zero chunks with the pump idle.
class ZeroPolicy : public Policy {
 public:
  using Policy::Policy;

 protected:
  std::vector<stream::ActionVector> Plan(const Observation& obs, double start_time) override;
};

}  // namespace harvest::policy

#endif  // HARVEST_POLICY_POLICY_H_
