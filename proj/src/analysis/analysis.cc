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

#include "gvfnav/analysis.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "gvfnav/errors.h"

namespace gvfnav {

using nlohmann::json;

BoundReport VerifyBound(const SimLog& log, double sup_d,
                        const GuidanceGains& gains, const ParametricPath* path,
                        double tolerance, double hold_time) {
  BoundReport report;
  report.sup_d = sup_d;
  report.per_step_lambda = gains.k1 != gains.k2;
  if (report.per_step_lambda && path == nullptr) {
    throw InvalidArgumentError(
        "unequal gains need the path to evaluate lambda_min per step");
  }
  const auto& records = log.records;
  std::vector<double> thresholds(records.size());
  for (size_t i = 0; i < records.size(); ++i) {
    thresholds[i] =
        report.per_step_lambda
            ? DisturbanceErrorBoundFromLambda(
                  sup_d, QMatrixEigenvalues(*path, std::clamp(records[i].w, 0.0,
                                                              path->ParameterEnd()),
                                            gains)
                             .lambda_min)
            : DisturbanceErrorBound(sup_d, gains);
  }
  report.threshold =
      thresholds.empty() ? DisturbanceErrorBoundFromLambda(sup_d, gains.k_min() *
                                                                      gains.k_min())
                         : *std::min_element(thresholds.begin(), thresholds.end());

  const auto below = [&](size_t i) {
    return records[i].e_norm <= thresholds[i] + tolerance;
  };
  // Scan for the first run of in-bound samples spanning hold_time.
  size_t start = records.size();
  for (size_t i = 0; i < records.size();) {
    if (!below(i)) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j + 1 < records.size() && below(j + 1)) ++j;
    if (records[j].t - records[i].t >= hold_time) {
      start = i;
      break;
    }
    i = j + 1;
  }
  if (start == records.size()) return report;

  report.transient_end = records[start].t;
  double margin_sum = 0.0;
  report.min_margin = std::numeric_limits<double>::infinity();
  for (size_t i = start; i < records.size(); ++i) {
    const double e = records[i].e_norm;
    const double margin = thresholds[i] - e;
    report.max_error = std::max(report.max_error, e);
    report.min_margin = std::min(report.min_margin, margin);
    margin_sum += margin;
    ++report.checked_steps;
    if (!below(i)) {
      report.violations.push_back({records[i].step, records[i].t, e, thresholds[i]});
    }
  }
  report.mean_margin = margin_sum / static_cast<double>(report.checked_steps);
  report.passed = report.violations.empty();
  return report;
}

LyapunovTrace ComputeLyapunovTrace(const SimLog& log, double slack,
                                   double fit_start, double fit_floor) {
  LyapunovTrace trace;
  double sum_t = 0.0, sum_y = 0.0, sum_tt = 0.0, sum_ty = 0.0;
  std::int64_t n = 0;
  for (size_t i = 0; i < log.records.size(); ++i) {
    const auto& r = log.records[i];
    trace.t.push_back(r.t);
    trace.v.push_back(r.lyapunov);
    if (i > 0) {
      const double increase = r.lyapunov - trace.v[i - 1];
      if (increase > slack) {
        if (trace.monotone) trace.first_increase_step = r.step;
        trace.monotone = false;
      }
      trace.max_increase = std::max(trace.max_increase, increase);
    }
    if (r.t >= fit_start && r.e_norm > fit_floor) {
      const double y = std::log(r.e_norm);
      sum_t += r.t;
      sum_y += y;
      sum_tt += r.t * r.t;
      sum_ty += r.t * y;
      ++n;
    }
  }
  if (n >= 2) {
    const double denom = n * sum_tt - sum_t * sum_t;
    if (denom > 0.0) trace.fitted_rate = -(n * sum_ty - sum_t * sum_y) / denom;
  }
  return trace;
}

RunMetrics ComputeMetrics(const SimLog& log, double threshold) {
  RunMetrics m;
  const auto& records = log.records;
  m.steps = static_cast<std::int64_t>(records.size());
  if (records.empty()) return m;
  m.duration = records.back().t - records.front().t;
  double sq = 0.0, speed_sq = 0.0;
  size_t last_above = records.size();
  for (size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    m.max_e_path = std::max(m.max_e_path, r.e_path);
    m.max_e_norm = std::max(m.max_e_norm, r.e_norm);
    sq += r.e_path * r.e_path;
    const double ev = r.v_ref - r.v_filtered;
    speed_sq += ev * ev;
    m.max_abs_u_v = std::max(m.max_abs_u_v, std::abs(r.u_v));
    m.throttle_clamped_steps += r.throttle_clamped;
    m.steer_clamped_steps += r.steer_clamped;
    m.w_resets += r.w_reset;
    if (r.e_path >= threshold) last_above = i;
  }
  const double count = static_cast<double>(records.size());
  m.rms_e_path = std::sqrt(sq / count);
  m.speed_rms_error = std::sqrt(speed_sq / count);
  m.final_e_path = records.back().e_path;
  m.final_e_norm = records.back().e_norm;
  const size_t first_ok = last_above == records.size() ? 0 : last_above + 1;
  if (first_ok < records.size()) {
    m.converged_at = records[first_ok].t;
    for (size_t i = first_ok; i < records.size(); ++i) {
      m.post_convergence_max_e_path =
          std::max(m.post_convergence_max_e_path, records[i].e_path);
    }
  }
  return m;
}

json ToJson(const BoundReport& r) {
  json violations = json::array();
  for (const auto& v : r.violations) {
    violations.push_back({{"step", v.step},
                          {"t", v.t},
                          {"e_norm", v.e_norm},
                          {"threshold", v.threshold}});
  }
  return {{"sup_d", r.sup_d},
          {"threshold", r.threshold},
          {"per_step_lambda", r.per_step_lambda},
          {"transient_end", r.transient_end ? json(*r.transient_end) : json()},
          {"checked_steps", r.checked_steps},
          {"violation_count", r.violations.size()},
          {"violations", std::move(violations)},
          {"max_error", r.max_error},
          {"min_margin", r.transient_end ? json(r.min_margin) : json()},
          {"mean_margin", r.transient_end ? json(r.mean_margin) : json()},
          {"passed", r.passed}};
}

json ToJson(const RunMetrics& m) {
  return {{"steps", m.steps},
          {"duration", m.duration},
          {"final_e_path", m.final_e_path},
          {"max_e_path", m.max_e_path},
          {"rms_e_path", m.rms_e_path},
          {"final_e_norm", m.final_e_norm},
          {"max_e_norm", m.max_e_norm},
          {"converged_at", m.converged_at ? json(*m.converged_at) : json()},
          {"post_convergence_max_e_path", m.post_convergence_max_e_path},
          {"speed_rms_error", m.speed_rms_error},
          {"max_abs_u_v", m.max_abs_u_v},
          {"throttle_clamped_steps", m.throttle_clamped_steps},
          {"steer_clamped_steps", m.steer_clamped_steps},
          {"w_resets", m.w_resets}};
}

json ToJson(const LyapunovTrace& trace) {
  return {{"samples", trace.v.size()},
          {"monotone", trace.monotone},
          {"first_increase_step", trace.first_increase_step},
          {"max_increase", trace.max_increase},
          {"fitted_rate", trace.fitted_rate},
          {"initial", trace.v.empty() ? 0.0 : trace.v.front()},
          {"final", trace.v.empty() ? 0.0 : trace.v.back()}};
}

namespace {

template <typename... Getters>
std::string Panel(const SimLog& log, std::string_view header,
                  Getters... getters) {
  fmt::memory_buffer out;
  out.append(header);
  out.push_back('\n');
  for (const auto& r : log.records) {
    fmt::format_to(std::back_inserter(out), "{}", r.t);
    ((fmt::format_to(std::back_inserter(out), ",{}", getters(r))), ...);
    out.push_back('\n');
  }
  return fmt::to_string(out);
}

}  // namespace

std::map<std::string, std::string> PanelCsvs(const SimLog& log) {
  using R = const SimRecord&;
  std::map<std::string, std::string> panels;
  panels["trajectory"] = Panel(
      log, "t,px,py,meas_x,meas_y,w", [](R r) { return r.px; },
      [](R r) { return r.py; }, [](R r) { return r.meas_x; },
      [](R r) { return r.meas_y; }, [](R r) { return r.w; });
  panels["errors"] = Panel(
      log, "t,phi1,phi2,e_norm,e_path,accuracy", [](R r) { return r.phi1; },
      [](R r) { return r.phi2; }, [](R r) { return r.e_norm; },
      [](R r) { return r.e_path; }, [](R r) { return r.accuracy; });
  panels["speed"] = Panel(
      log, "t,v_ref,v_raw,v_filtered", [](R r) { return r.v_ref; },
      [](R r) { return r.v_raw; }, [](R r) { return r.v_filtered; });
  panels["throttle"] = Panel(
      log, "t,u_v,u_ff,u_p,u_i,u_d,throttle_clamped", [](R r) { return r.u_v; },
      [](R r) { return r.u_ff; }, [](R r) { return r.u_p; },
      [](R r) { return r.u_i; }, [](R r) { return r.u_d; },
      [](R r) { return static_cast<int>(r.throttle_clamped); });
  panels["heading"] = Panel(
      log, "t,theta,u_theta,theta_d_dot,steer_phi,steer_clamped",
      [](R r) { return r.theta; }, [](R r) { return r.u_theta; },
      [](R r) { return r.theta_d_dot; }, [](R r) { return r.steer_phi; },
      [](R r) { return static_cast<int>(r.steer_clamped); });
  panels["lyapunov"] =
      Panel(log, "t,lyapunov", [](R r) { return r.lyapunov; });
  return panels;
}

}  // namespace gvfnav
