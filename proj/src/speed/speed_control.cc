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

#include "gvfnav/speed_control.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gvfnav/errors.h"

namespace gvfnav {

void SpeedSetpointParams::Validate() const {
  if (!std::isfinite(v_min) || !std::isfinite(v_max) ||
      !std::isfinite(c_kappa) || v_min < 0.0 || v_max < v_min ||
      c_kappa < 0.0) {
    throw InvalidArgumentError(
        "speed setpoint needs 0 <= v_min <= v_max and c_kappa >= 0");
  }
}

double SpeedSetpoint(double kappa, const SpeedSetpointParams& params) {
  const double v =
      (params.v_max - params.v_min) * std::exp(-params.c_kappa * kappa * kappa) +
      params.v_min;
  if (std::isnan(v)) return params.v_min;
  // Rounding can leave v a few ulps outside the range near the limits.
  return std::clamp(v, params.v_min, params.v_max);
}

void SpeedGains::Validate() const {
  for (double g : {k_f, k_p, k_i, k_d}) {
    if (!std::isfinite(g) || g < 0.0) {
      throw InvalidArgumentError("speed gains must be finite and >= 0");
    }
  }
}

SpeedPid::SpeedPid(SpeedGains gains, double limit)
    : gains_(gains), limit_(limit) {
  gains_.Validate();
  if (!(limit_ > 0.0)) throw InvalidArgumentError("throttle limit must be > 0");
}

void SpeedPid::set_gains(const SpeedGains& gains) {
  gains.Validate();
  gains_ = gains;
}

void SpeedPid::Reset() {
  integral_ = 0.0;
  previous_measurement_ = 0.0;
  has_previous_ = false;
  saturated_ = false;
}

PidOutput SpeedPid::Step(double v_ref, double v_measured, double dt) {
  if (!(dt > 0.0)) throw InvalidArgumentError("dt must be > 0");
  const double error = v_ref - v_measured;

  PidOutput out;
  out.u_ff = gains_.k_f * v_ref;
  out.u_p = gains_.k_p * error;
  out.u_d = has_previous_
                ? -gains_.k_d * (v_measured - previous_measurement_) / dt
                : 0.0;
  previous_measurement_ = v_measured;
  has_previous_ = true;

  const double candidate = integral_ + error * dt;
  double raw = out.u_ff + out.u_p + gains_.k_i * candidate + out.u_d;
  const bool pushes_up = raw > limit_ && error > 0.0;
  const bool pushes_down = raw < -limit_ && error < 0.0;
  if (!(pushes_up || pushes_down)) integral_ = candidate;
  out.u_i = gains_.k_i * integral_;
  raw = out.u_ff + out.u_p + out.u_i + out.u_d;

  out.u_v = std::clamp(raw, -limit_, limit_);
  out.clamped = out.u_v != raw;
  saturated_ = out.clamped;
  return out;
}

MovingAverageFilter::MovingAverageFilter(int window) {
  if (window < 1) throw InvalidArgumentError("filter window must be >= 1");
  buffer_.assign(static_cast<size_t>(window), 0.0);
}

void MovingAverageFilter::Reset() {
  std::fill(buffer_.begin(), buffer_.end(), 0.0);
  next_ = 0;
  count_ = 0;
  sum_ = 0.0;
  pushes_since_resum_ = 0;
}

double MovingAverageFilter::Push(double sample) {
  if (!std::isfinite(sample)) {
    throw InvalidArgumentError("filter sample must be finite");
  }
  sum_ += sample - buffer_[next_];
  buffer_[next_] = sample;
  next_ = (next_ + 1) % buffer_.size();
  if (count_ < buffer_.size()) ++count_;
  // Re-add from scratch once per window so rounding in the running sum does
  // not accumulate over long runs.
  if (++pushes_since_resum_ == buffer_.size()) {
    sum_ = std::accumulate(buffer_.begin(), buffer_.end(), 0.0);
    pushes_since_resum_ = 0;
  }
  return value();
}

double MovingAverageFilter::value() const {
  if (count_ == 0) return 0.0;
  return sum_ / static_cast<double>(count_);
}

}  // namespace gvfnav
