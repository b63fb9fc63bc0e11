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

#ifndef HARVEST_COMMON_GEOMETRY_H_
#define HARVEST_COMMON_GEOMETRY_H_

#include <array>
#include <cmath>

namespace harvest {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr bool operator==(const Vec3&) const = default;

  double Norm() const { return std::sqrt(x * x + y * y + z * z); }
  constexpr double Dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
};

inline double Distance(const Vec3& a, const Vec3& b) { return (a - b).Norm(); }

// Axis-aligned box, inclusive bounds.
struct Box {
  Vec3 min;
  Vec3 max;

  constexpr bool Contains(const Vec3& p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y &&
           p.z >= min.z && p.z <= max.z;
  }
  constexpr double Volume() const {
    return (max.x - min.x) * (max.y - min.y) * (max.z - min.z);
  }
  constexpr Vec3 Center() const {
    return {(min.x + max.x) / 2, (min.y + max.y) / 2, (min.z + max.z) / 2};
  }
  constexpr bool operator==(const Box&) const = default;
};

}  // namespace harvest

#endif  // HARVEST_COMMON_GEOMETRY_H_
