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

// Kinematic rover models: the unicycle used by the guidance loop and a
// front-steered car with steering-rate input, plus the first-order speed
// plant driven by throttle counts.

#ifndef GVFNAV_VEHICLE_H_
#define GVFNAV_VEHICLE_H_

#include <numbers>

#include "gvfnav/geometry.h"

namespace gvfnav {

struct VehicleState {
  Vec2 p = Vec2::Zero();
  double theta = 0.0;  // rad, wrapped to (-pi, pi]
  double v = 0.0;      // m/s

  Vec2 heading() const { return {std::cos(theta), std::sin(theta)}; }
};

struct VehicleParams {
  double wheelbase = 0.25;                 // m
  double phi_max = std::numbers::pi / 6;   // rad
  double eps_v = 0.05;                     // m/s, below it steering reads 0
  double max_speed = 10.0;                 // m/s, |v| clamp of the plant

  void Validate() const;
  // 15 degree limit of the measured steering stops.
  static VehicleParams MeasuredSteeringPreset();
};

// v' = (throttle_gain * u_v - v) / time_constant.
struct SpeedPlantParams {
  double throttle_gain = 1e-3;  // m/s per throttle count
  double time_constant = 0.5;   // s

  void Validate() const;
};

double SpeedPlantRate(double v, double u_v, const SpeedPlantParams& plant);

// p' = v (cos theta, sin theta), theta' = u_theta with v held at v_cmd.
VehicleState StepUnicycle(const VehicleState& state, double u_theta,
                          double v_cmd, double dt);

struct SteeringResult {
  double phi = 0.0;
  double raw = 0.0;     // arctan(l u_theta / v) before clamping
  bool clamped = false;
  bool low_speed = false;  // |v| <= eps_v, phi reported as 0
};

// phi = arctan(l u_theta / v) clamped to [-phi_max, phi_max].
SteeringResult SteeringAngle(double u_theta, double v,
                             const VehicleParams& params);

// theta' = v tan(phi) / l for the clamped virtual wheel angle.
double ActuatedYawRate(double u_theta, double v, const VehicleParams& params);

struct CarState {
  Vec2 p = Vec2::Zero();
  double theta = 0.0;
  double v = 0.0;
  double phi = 0.0;  // virtual front wheel angle
};

// p' = v (cos theta, sin theta), theta' = v tan(phi) / l, phi' = u_phi.
// phi is clamped to [-phi_max, phi_max] after the step.
CarState StepCar(const CarState& state, double u_phi, double v, double dt,
                 const VehicleParams& params);

}  // namespace gvfnav

#endif  // GVFNAV_VEHICLE_H_
