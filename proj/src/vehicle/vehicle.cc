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

#include <algorithm>
#include <cmath>

#include <Eigen/Core>

#include "gvfnav/errors.h"
#include "gvfnav/integrator.h"

namespace gvfnav {

void VehicleParams::Validate() const {
  if (!(wheelbase > 0.0) || !std::isfinite(wheelbase)) {
    throw InvalidArgumentError("wheelbase must be > 0");
  }
  if (!(phi_max > 0.0 && phi_max < std::numbers::pi / 2)) {
    throw InvalidArgumentError("phi_max must be in (0, pi/2)");
  }
  if (!(eps_v >= 0.0) || !(max_speed > 0.0)) {
    throw InvalidArgumentError("eps_v must be >= 0 and max_speed > 0");
  }
}

VehicleParams VehicleParams::MeasuredSteeringPreset() {
  VehicleParams params;
  params.phi_max = 15.0 * std::numbers::pi / 180.0;
  return params;
}

void SpeedPlantParams::Validate() const {
  if (!(throttle_gain > 0.0) || !(time_constant > 0.0) ||
      !std::isfinite(throttle_gain) || !std::isfinite(time_constant)) {
    throw InvalidArgumentError("plant throttle_gain and time_constant must be > 0");
  }
}

double SpeedPlantRate(double v, double u_v, const SpeedPlantParams& plant) {
  return (plant.throttle_gain * u_v - v) / plant.time_constant;
}

VehicleState StepUnicycle(const VehicleState& state, double u_theta,
                          double v_cmd, double dt) {
  if (!(dt > 0.0)) throw InvalidArgumentError("dt must be > 0");
  using Vec = Eigen::Vector3d;
  const Vec x0(state.p.x(), state.p.y(), state.theta);
  const Vec x1 = Rk4Step(x0, 0.0, dt, [&](double, const Vec& x) {
    return Vec(v_cmd * std::cos(x.z()), v_cmd * std::sin(x.z()), u_theta);
  });
  return {{x1.x(), x1.y()}, WrapAngle(x1.z()), v_cmd};
}

SteeringResult SteeringAngle(double u_theta, double v,
                             const VehicleParams& params) {
  SteeringResult out;
  if (std::abs(v) <= params.eps_v) {
    out.low_speed = true;
    return out;
  }
  out.raw = std::atan(params.wheelbase * u_theta / v);
  out.phi = std::clamp(out.raw, -params.phi_max, params.phi_max);
  out.clamped = out.phi != out.raw;
  return out;
}

double ActuatedYawRate(double u_theta, double v, const VehicleParams& params) {
  const SteeringResult steer = SteeringAngle(u_theta, v, params);
  return v * std::tan(steer.phi) / params.wheelbase;
}

CarState StepCar(const CarState& state, double u_phi, double v, double dt,
                 const VehicleParams& params) {
  if (!(dt > 0.0)) throw InvalidArgumentError("dt must be > 0");
  using Vec = Eigen::Vector4d;
  const Vec x0(state.p.x(), state.p.y(), state.theta, state.phi);
  const double l = params.wheelbase;
  const Vec x1 = Rk4Step(x0, 0.0, dt, [&](double, const Vec& x) {
    return Vec(v * std::cos(x.z()), v * std::sin(x.z()), v * std::tan(x.w()) / l,
               u_phi);
  });
  return {{x1.x(), x1.y()},
          WrapAngle(x1.z()),
          v,
          std::clamp(x1.w(), -params.phi_max, params.phi_max)};
}

}  // namespace gvfnav
