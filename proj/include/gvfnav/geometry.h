// Copyright 2026 The gvfnav Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GVFNAV_GEOMETRY_H_
#define GVFNAV_GEOMETRY_H_

#include <cmath>
#include <numbers>

#include <Eigen/Core>

namespace gvfnav {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;

// 90 degree counter-clockwise rotation.
inline Mat2 RotationE() {
  Mat2 e;
  e << 0.0, -1.0, 1.0, 0.0;
  return e;
}

inline Vec2 RotateCcw90(const Vec2& v) { return {-v.y(), v.x()}; }

// z-component of the planar cross product a x b.
inline double Cross(const Vec2& a, const Vec2& b) {
  return a.x() * b.y() - a.y() * b.x();
}

// Wraps to (-pi, pi].
inline double WrapAngle(double angle) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double wrapped = std::remainder(angle, kTwoPi);
  if (wrapped <= -std::numbers::pi) wrapped += kTwoPi;
  return wrapped;
}

inline bool IsFinite(const Vec2& v) {
  return std::isfinite(v.x()) && std::isfinite(v.y());
}

}  // namespace gvfnav

#endif  // GVFNAV_GEOMETRY_H_
