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

// Post-run metrics and checks over a SimLog.

#ifndef GVFNAV_ANALYSIS_H_
#define GVFNAV_ANALYSIS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gvfnav/gvf.h"
#include "gvfnav/sim_log.h"

namespace gvfnav {

inline constexpr double kBoundTolerance = 1e-6;     // m
inline constexpr double kBoundHoldTime = 5.0;       // s
inline constexpr double kLyapunovSlack = 1e-9;

struct BoundViolation {
  std::int64_t step = 0;
  double t = 0.0;
  double e_norm = 0.0;
  double threshold = 0.0;
};

struct BoundReport {
  double sup_d = 0.0;
  // D / k for equal gains; the smallest per-step threshold otherwise.
  double threshold = 0.0;
  bool per_step_lambda = false;
  // First t after which ||e|| stays under the threshold for kBoundHoldTime.
  std::optional<double> transient_end;
  std::int64_t checked_steps = 0;
  std::vector<BoundViolation> violations;
  double max_error = 0.0;     // post-transient max ||e||
  double min_margin = 0.0;    // post-transient min (threshold - ||e||)
  double mean_margin = 0.0;
  bool passed = false;
};

// Checks ||e|| = sqrt(phi1^2 + phi2^2) against sup_d / sqrt(lambda_min)
// after the transient. Equal gains use lambda_min = k^2; otherwise
// lambda_min comes from f'(w) of each logged step, which needs `path`.
BoundReport VerifyBound(const SimLog& log, double sup_d,
                        const GuidanceGains& gains,
                        const ParametricPath* path = nullptr,
                        double tolerance = kBoundTolerance,
                        double hold_time = kBoundHoldTime);

struct LyapunovTrace {
  std::vector<double> t;
  std::vector<double> v;
  bool monotone = true;  // V[i+1] <= V[i] + slack for every i
  std::int64_t first_increase_step = -1;
  double max_increase = 0.0;
  // -slope of a least-squares line through (t, ln ||e||) for t >= fit_start
  // and ||e|| above fit_floor; 0 when fewer than two points qualify.
  double fitted_rate = 0.0;
};

LyapunovTrace ComputeLyapunovTrace(const SimLog& log,
                                   double slack = kLyapunovSlack,
                                   double fit_start = 0.0,
                                   double fit_floor = 1e-9);

struct RunMetrics {
  std::int64_t steps = 0;
  double duration = 0.0;
  double final_e_path = 0.0;
  double max_e_path = 0.0;
  double rms_e_path = 0.0;
  double final_e_norm = 0.0;
  double max_e_norm = 0.0;
  // Earliest t after which e_path stays below `threshold`; empty if never.
  std::optional<double> converged_at;
  double post_convergence_max_e_path = 0.0;
  double speed_rms_error = 0.0;  // rms of v_ref - v_filtered
  double max_abs_u_v = 0.0;
  std::int64_t throttle_clamped_steps = 0;
  std::int64_t steer_clamped_steps = 0;
  std::int64_t w_resets = 0;
};

RunMetrics ComputeMetrics(const SimLog& log, double threshold = 0.1);

nlohmann::json ToJson(const BoundReport& report);
nlohmann::json ToJson(const RunMetrics& metrics);
nlohmann::json ToJson(const LyapunovTrace& trace);

// CSV text per figure panel, keyed by file stem:
//   trajectory  t,px,py,meas_x,meas_y,w
//   errors      t,phi1,phi2,e_norm,e_path,accuracy
//   speed       t,v_ref,v_raw,v_filtered
//   throttle    t,u_v,u_ff,u_p,u_i,u_d,throttle_clamped
//   heading     t,theta,u_theta,theta_d_dot,steer_phi,steer_clamped
//   lyapunov    t,lyapunov
std::map<std::string, std::string> PanelCsvs(const SimLog& log);

}  // namespace gvfnav

#endif  // GVFNAV_ANALYSIS_H_
