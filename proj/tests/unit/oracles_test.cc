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

#include "oracles.h"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

namespace gvfnav::testing {
namespace {

TEST(DeCasteljau, LinearAndQuadraticClosedForms) {
  const std::vector<Vec2> line = {{0, 0}, {2, 4}};
  EXPECT_DOUBLE_EQ(DeCasteljau(line, 0.25).x(), 0.5);
  EXPECT_DOUBLE_EQ(DeCasteljau(line, 0.25).y(), 1.0);
  // B(t) = (1-t)^2 P0 + 2t(1-t) P1 + t^2 P2.
  const std::vector<Vec2> quad = {{0, 0}, {1, 2}, {2, 0}};
  const double t = 0.3;
  const Vec2 expected =
      2 * t * (1 - t) * Vec2(1, 2) + t * t * Vec2(2, 0);
  EXPECT_NEAR((DeCasteljau(quad, t) - expected).norm(), 0.0, 1e-15);
}

TEST(CentralDiff, PolynomialsAreExactUpToRounding) {
  const auto cubic = [](double x) { return x * x * x - 2 * x; };
  EXPECT_NEAR(CentralDiff(cubic, 1.5, 1e-3), 3 * 1.5 * 1.5 - 2, 1e-9);
  const auto curve = [](double x) { return Vec2(x * x, x * x * x); };
  EXPECT_NEAR((CentralDiff2(curve, 0.7, 1e-3) - Vec2(2, 6 * 0.7)).norm(), 0.0,
              1e-5);
}

TEST(FdCurvature, CircleHasInverseRadius) {
  const CirclePath circle({1, -2}, 4.0);
  const auto f = [&](double w) { return circle.Evaluate(w); };
  EXPECT_NEAR(FdCurvature(f, 0.9, 1e-3), 0.25, 1e-8);
}

TEST(CirclePath, DerivativesMatchFiniteDifferences) {
  const CirclePath circle({0, 0}, 3.0);
  const auto f = [&](double w) { return circle.Evaluate(w); };
  const double w = 2.1;
  EXPECT_NEAR((circle.Derivative(w, 1) - CentralDiff(f, w, 1e-3)).norm(), 0.0,
              1e-9);
  EXPECT_NEAR((circle.Derivative(w, 2) - CentralDiff2(f, w, 1e-3)).norm(), 0.0,
              1e-6);
}

TEST(PointInPolygon, SquareInteriorBoundaryAndExterior) {
  const std::vector<Vec2> square = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  EXPECT_TRUE(PointInPolygon({0.5, 0.5}, square));
  EXPECT_TRUE(PointInPolygon({1.0, 0.5}, square));
  EXPECT_TRUE(PointInPolygon({0.0, 0.0}, square));
  EXPECT_FALSE(PointInPolygon({1.5, 0.5}, square));
  EXPECT_FALSE(PointInPolygon({0.5, -0.01}, square));
}

TEST(PointInPolygon, NonConvexPolygon) {
  const std::vector<Vec2> l_shape = {{0, 0}, {2, 0}, {2, 1},
                                     {1, 1}, {1, 2}, {0, 2}};
  EXPECT_TRUE(PointInPolygon({0.5, 1.5}, l_shape));
  EXPECT_FALSE(PointInPolygon({1.5, 1.5}, l_shape));
}

}  // namespace
}  // namespace gvfnav::testing
