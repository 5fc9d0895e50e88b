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

// Curvature-scheduled speed setpoint, discrete feedforward + PID throttle
// controller and the moving-average speed filter.

#ifndef GVFNAV_SPEED_CONTROL_H_
#define GVFNAV_SPEED_CONTROL_H_

#include <cstddef>
#include <vector>

namespace gvfnav {

// Throttle commands are counts in [-kThrottleLimit, kThrottleLimit].
inline constexpr double kThrottleLimit = 9600.0;
inline constexpr int kDefaultFilterWindow = 200;

struct SpeedSetpointParams {
  double v_min = 1.4;    // m/s
  double v_max = 2.4;    // m/s
  double c_kappa = 15.0; // m^2

  // InvalidArgumentError unless 0 <= v_min <= v_max and c_kappa >= 0.
  void Validate() const;
};

// v_ref = (v_max - v_min) exp(-c_kappa kappa^2) + v_min.
double SpeedSetpoint(double kappa, const SpeedSetpointParams& params);

struct SpeedGains {
  double k_f = 1000.0;
  double k_p = 3000.0;
  double k_i = 300.0;
  double k_d = 2000.0;

  // InvalidArgumentError for negative or non-finite gains.
  void Validate() const;
};

struct PidOutput {
  double u_v = 0.0;   // clamped command
  double u_ff = 0.0;  // k_f v_ref
  double u_p = 0.0;
  double u_i = 0.0;
  double u_d = 0.0;
  bool clamped = false;
};

// u_v = k_f v_ref + k_p e + k_i integral(e) + k_d de/dt, e = v_ref - v.
//
// The integral uses backward Euler. The derivative acts on the filtered
// measurement (de/dt ~ -dv/dt), so setpoint steps do not kick it; it is zero
// on the first step. While the output saturates and the error pushes
// further into saturation the integral is held.
class SpeedPid {
 public:
  explicit SpeedPid(SpeedGains gains = {}, double limit = kThrottleLimit);

  PidOutput Step(double v_ref, double v_measured, double dt);
  void Reset();

  const SpeedGains& gains() const { return gains_; }
  void set_gains(const SpeedGains& gains);
  double limit() const { return limit_; }
  double integral() const { return integral_; }
  bool saturated() const { return saturated_; }

 private:
  SpeedGains gains_;
  double limit_;
  double integral_ = 0.0;
  double previous_measurement_ = 0.0;
  bool has_previous_ = false;
  bool saturated_ = false;
};

// Mean of the last min(count, window) samples.
class MovingAverageFilter {
 public:
  explicit MovingAverageFilter(int window = kDefaultFilterWindow);

  double Push(double sample);
  double value() const;
  int window() const { return static_cast<int>(buffer_.size()); }
  size_t count() const { return count_; }
  void Reset();

 private:
  std::vector<double> buffer_;
  size_t next_ = 0;
  size_t count_ = 0;
  double sum_ = 0.0;
  size_t pushes_since_resum_ = 0;
};

}  // namespace gvfnav

#endif  // GVFNAV_SPEED_CONTROL_H_
