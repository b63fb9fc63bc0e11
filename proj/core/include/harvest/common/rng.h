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

#ifndef HARVEST_COMMON_RNG_H_
#define HARVEST_COMMON_RNG_H_

#include <cstdint>
#include <cstring>
#include <random>

namespace harvest {

using Rng = std::mt19937_64;

// splitmix64 finalizer; decorrelates nearby seeds.
constexpr std::uint64_t MixSeed(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream) {
  return MixSeed(MixSeed(seed) ^ MixSeed(stream * 0xD1B54A32D192ED03ULL + 1));
}

inline std::uint64_t DoubleBits(double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  return bits;
}

// Named substreams so that perception, contact and scene draws never share
// state.
namespace rng_stream {
inline constexpr std::uint64_t kScene = 1;
inline constexpr std::uint64_t kContact = 2;
inline constexpr std::uint64_t kPerception = 3;
inline constexpr std::uint64_t kPolicy = 4;
}  // namespace rng_stream

}  // namespace harvest

#endif  // HARVEST_COMMON_RNG_H_
