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

#include "gvfnav/vehicle.h"

#include <cmath>
#include <numbers>

#include <Eigen/Core>
#include <gtest/gtest.h>

#include "gvfnav/errors.h"
#include "gvfnav/integrator.h"

namespace gvfnav {
namespace {

// Global error of RK4 on x' = x over [0, 1].
double ExpError(int steps) {
  Eigen::Matrix<double, 1, 1> x;
  x << 1.0;
  const double dt = 1.0 / steps;
  for (int k = 0; k < steps; ++k) {
    x = Rk4Step(x, k * dt, dt, [](double, const auto& y) { return y; });
  }
  return std::abs(x(0) - std::exp(1.0));
}

Vec2 ArcPosition(double v, double omega, double theta0, double t) {
  return (v / omega) * Vec2(std::sin(theta0 + omega * t) - std::sin(theta0),
                            -std::cos(theta0 + omega * t) + std::cos(theta0));
}

double UnicycleError(int steps) {
  VehicleState s;
  s.theta = 0.3;
  const double v = 2.0, omega = 0.8, horizon = 5.0;
  const double dt = horizon / steps;
  for (int k = 0; k < steps; ++k) s = StepUnicycle(s, omega, v, dt);
  return (s.p - ArcPosition(v, omega, 0.3, horizon)).norm();
}

TEST(Rk4, FourthOrderOnExponential) {
  const double ratio = ExpError(20) / ExpError(40);
  EXPECT_NEAR(std::log2(ratio), 4.0, 0.1);
}

TEST(Rk4, FourthOrderOnUnicycleArc) {
  const double e1 = UnicycleError(50);
  const double e2 = UnicycleError(100);
  const double e3 = UnicycleError(200);
  EXPECT_NEAR(std::log2(e1 / e2), 4.0, 0.15);
  EXPECT_NEAR(std::log2(e2 / e3), 4.0, 0.15);
}

TEST(Unicycle, StraightLineAndWrap) {
  VehicleState s;
  s.theta = std::numbers::pi / 2;
  s = StepUnicycle(s, 0.0, 3.0, 0.5);
  EXPECT_NEAR((s.p - Vec2(0.0, 1.5)).norm(), 0.0, 1e-12);
  s.theta = std::numbers::pi - 0.01;
  s = StepUnicycle(s, 1.0, 0.0, 0.1);
  EXPECT_LT(s.theta, 0.0);  // wrapped into (-pi, pi]
  EXPECT_THROW(StepUnicycle(s, 0.0, 1.0, 0.0), InvalidArgumentError);
}

TEST(Steering, VirtualWheelAngle) {
  const VehicleParams params;
  const SteeringResult s = SteeringAngle(1.0, 2.0, params);
  EXPECT_DOUBLE_EQ(s.phi, std::atan(0.25 * 1.0 / 2.0));
  EXPECT_FALSE(s.clamped);
  EXPECT_NEAR(ActuatedYawRate(1.0, 2.0, params), 1.0, 1e-12);

  const SteeringResult c = SteeringAngle(50.0, 1.0, params);
  EXPECT_TRUE(c.clamped);
  EXPECT_DOUBLE_EQ(c.phi, params.phi_max);
  EXPECT_LT(ActuatedYawRate(50.0, 1.0, params), 50.0);
  EXPECT_DOUBLE_EQ(SteeringAngle(-50.0, 1.0, params).phi, -params.phi_max);

  const SteeringResult slow = SteeringAngle(1.0, 0.01, params);
  EXPECT_TRUE(slow.low_speed);
  EXPECT_EQ(slow.phi, 0.0);
  EXPECT_EQ(ActuatedYawRate(1.0, 0.01, params), 0.0);
}

TEST(Steering, MeasuredPreset) {
  EXPECT_NEAR(VehicleParams::MeasuredSteeringPreset().phi_max,
              15.0 * std::numbers::pi / 180.0, 1e-15);
  EXPECT_NEAR(VehicleParams{}.phi_max, std::numbers::pi / 6, 1e-15);
  VehicleParams bad;
  bad.phi_max = 2.0;
  EXPECT_THROW(bad.Validate(), InvalidArgumentError);
}

TEST(Car, IntegratesAndClampsWheelAngle) {
  const VehicleParams params;
  CarState s;
  s = StepCar(s, 0.0, 1.0, 0.1, params);
  EXPECT_NEAR(s.p.x(), 0.1, 1e-12);
  for (int k = 0; k < 100; ++k) s = StepCar(s, 5.0, 1.0, 0.01, params);
  EXPECT_DOUBLE_EQ(s.phi, params.phi_max);
  EXPECT_GT(s.theta, 0.0);
}

TEST(SpeedPlant, FirstOrderRate) {
  const SpeedPlantParams plant;
  EXPECT_DOUBLE_EQ(SpeedPlantRate(1.0, 2000.0, plant), (2.0 - 1.0) / 0.5);
  EXPECT_THROW((SpeedPlantParams{0.0, 0.5}).Validate(), InvalidArgumentError);
}

}  // namespace
}  // namespace gvfnav
