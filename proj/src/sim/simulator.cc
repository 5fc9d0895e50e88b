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

#include "gvfnav/simulator.h"

#include <algorithm>
#include <cmath>

#include <Eigen/Core>

#include "gvfnav/errors.h"
#include "gvfnav/integrator.h"
#include "gvfnav/vehicle.h"

namespace gvfnav {
namespace {

using State5 = Eigen::Matrix<double, 5, 1>;  // px, py, theta, v, w

struct Guidance {
  PathSample sample;
  FieldEval field;
  double w_dot = 0.0;
  double theta_d_dot = 0.0;
  double u_theta = 0.0;
  SteeringResult steer;
  double yaw_rate = 0.0;
};

Guidance EvaluateGuidance(const Scenario& s, const Vec2& measured,
                          double theta, double v, double w) {
  Guidance g;
  const double wc = std::clamp(w, 0.0, s.spline->ParameterEnd());
  g.sample = SamplePath(*s.spline, wc);
  g.field = AugmentedField(measured, g.sample, s.guidance);
  g.w_dot = WDot(v, g.field);
  const Vec3 xi_dot(v * std::cos(theta), v * std::sin(theta), g.w_dot);
  g.theta_d_dot =
      ThetaDDot(g.field, FieldJacobian(g.sample, s.guidance), xi_dot);
  g.u_theta = HeadingControl({std::cos(theta), std::sin(theta)}, g.field,
                             g.theta_d_dot, s.guidance);
  g.steer = SteeringAngle(g.u_theta, v, s.vehicle);
  g.yaw_rate = s.steering_mode == SteeringMode::kDirect
                   ? g.u_theta
                   : v * std::tan(g.steer.phi) / s.vehicle.wheelbase;
  return g;
}

}  // namespace

Simulator::Simulator(Scenario scenario)
    : scenario_((scenario.Validate(), std::move(scenario))),
      noise_(scenario_.noise, scenario_.seed),
      filter_(scenario_.filter_window),
      pid_(scenario_.speed_gains),
      vehicle_(scenario_.initial),
      w_(scenario_.w0),
      total_steps_(scenario_.total_steps()) {
  vehicle_.theta = WrapAngle(vehicle_.theta);
  RebuildPath();
}

void Simulator::RebuildPath() {
  unbounded_ = std::make_shared<const UnboundedSplinePath>(*scenario_.spline);
  distance_ = std::make_unique<PathDistanceIndex>(
      scenario_.spline, scenario_.path_samples_per_segment);
}

std::string Simulator::TakeEvents() {
  std::string joined;
  for (const auto& e : pending_events_) {
    if (!joined.empty()) joined += ';';
    joined += e;
  }
  pending_events_.clear();
  return joined;
}

void Simulator::NoteEvent(const std::string& tag) {
  const std::string clean = SanitizeEventTag(tag);
  if (!clean.empty()) pending_events_.push_back(clean);
}

void Simulator::Finish(const std::string& reason) {
  finished_ = true;
  if (!reason.empty()) abort_ = reason;
}

void Simulator::FillErrors(SimRecord& r, const Vec2& p,
                           const PathSample& sample) {
  const ErrorVector e = Surfaces(p, sample);
  r.phi1 = e.phi1;
  r.phi2 = e.phi2;
  r.e_norm = e.Norm();
  r.lyapunov = LyapunovValue(e, scenario_.guidance);
  r.e_path = distance_->Distance(p);
}

const SimRecord& Simulator::Step() {
  if (finished_) throw StateError("simulation already finished");
  SimRecord record;
  record.step = step_;
  record.t = time();
  record.event = TakeEvents();
  const Vec2 d = noise_.Next();
  record.d_x = d.x();
  record.d_y = d.y();
  record.accuracy = noise_.model().accuracy();
  try {
    if (scenario_.mode == SimMode::kVehicle) {
      StepVehicle(record, d);
    } else {
      StepPureField(record, d);
    }
  } catch (const DegenerateFieldError& e) {
    const std::string reason = std::string("abort:degenerate_field ") + e.what();
    record.event = record.event.empty() ? SanitizeEventTag(reason)
                                        : record.event + ";" +
                                              SanitizeEventTag(reason);
    Finish(reason);
    log_.records.push_back(std::move(record));
    return log_.records.back();
  }
  ++step_;
  if (step_ >= total_steps_) finished_ = true;
  log_.records.push_back(std::move(record));
  return log_.records.back();
}

void Simulator::StepVehicle(SimRecord& r, const Vec2& d) {
  const Scenario& s = scenario_;
  const double n_end = s.spline->ParameterEnd();
  r.px = vehicle_.p.x();
  r.py = vehicle_.p.y();
  r.theta = vehicle_.theta;
  r.v = vehicle_.v;
  r.w = w_;
  const Vec2 measured = vehicle_.p + d;
  r.meas_x = measured.x();
  r.meas_y = measured.y();

  const Guidance g =
      EvaluateGuidance(s, measured, vehicle_.theta, vehicle_.v, w_);
  FillErrors(r, vehicle_.p, g.sample);
  r.chi1 = g.field.chi.x();
  r.chi2 = g.field.chi.y();
  r.chi3 = g.field.chi.z();
  r.u_theta = g.u_theta;
  r.theta_d_dot = g.theta_d_dot;
  r.steer_phi = g.steer.phi;
  r.steer_clamped = g.steer.clamped;

  if (s.spline->degree() >= 3 &&
      g.sample.d1.norm() > kDegenerateTangentEpsilon) {
    r.kappa = SignedCurvature(g.sample.d1, g.sample.d2);
    r.v_ref = SpeedSetpoint(r.kappa, s.setpoint);
  } else {
    // Undefined curvature: command the slow end of the schedule.
    r.kappa = 0.0;
    r.v_ref = s.setpoint.v_min;
  }
  r.v_raw = vehicle_.v;
  r.v_filtered = filter_.Push(vehicle_.v);
  const PidOutput pid = pid_.Step(r.v_ref, r.v_filtered, s.dt);
  r.u_v = pid.u_v;
  r.u_ff = pid.u_ff;
  r.u_p = pid.u_p;
  r.u_i = pid.u_i;
  r.u_d = pid.u_d;
  r.throttle_clamped = pid.clamped;

  const auto rate = [&](double, const State5& x) {
    const Guidance gs = EvaluateGuidance(s, x.head<2>() + d, x(2), x(3), x(4));
    State5 dx;
    dx << x(3) * std::cos(x(2)), x(3) * std::sin(x(2)), gs.yaw_rate,
        SpeedPlantRate(x(3), pid.u_v, s.plant), gs.w_dot;
    return dx;
  };
  State5 x;
  x << vehicle_.p.x(), vehicle_.p.y(), vehicle_.theta, vehicle_.v, w_;
  const double h = s.dt / s.substeps;
  for (int k = 0; k < s.substeps; ++k) x = Rk4Step(x, r.t + k * h, h, rate);

  vehicle_.p = x.head<2>();
  vehicle_.theta = WrapAngle(x(2));
  vehicle_.v = std::clamp(x(3), -s.vehicle.max_speed, s.vehicle.max_speed);
  w_ = x(4);
  if (w_ < 0.0) w_ = 0.0;
  if (w_ >= n_end) {
    if (s.loop_reset) {
      w_ = 0.0;
      r.w_reset = true;
    } else {
      w_ = n_end;
      finished_ = true;
      r.event = r.event.empty() ? "path_end" : r.event + ";path_end";
    }
  }
}

void Simulator::StepPureField(SimRecord& r, const Vec2& d) {
  const Scenario& s = scenario_;
  const Vec2 p(vehicle_.p);
  r.px = p.x();
  r.py = p.y();
  r.w = w_;
  r.meas_x = p.x();
  r.meas_y = p.y();
  const PathSample sample = SamplePath(*unbounded_, w_);
  const Vec3 chi = AugmentedVector(p, sample, s.guidance);
  r.chi1 = chi.x();
  r.chi2 = chi.y();
  r.chi3 = chi.z();
  r.theta = std::atan2(chi.y(), chi.x());
  r.v = chi.head<2>().norm();
  FillErrors(r, p, sample);

  const Vec3 push(d.x(), d.y(), 0.0);
  const auto rate = [&](double, const Vec3& xi) {
    return Vec3(
        AugmentedVector(xi.head<2>(), SamplePath(*unbounded_, xi.z()), s.guidance) +
        push);
  };
  Vec3 xi(p.x(), p.y(), w_);
  const double h = s.dt / s.substeps;
  for (int k = 0; k < s.substeps; ++k) xi = Rk4Step(xi, r.t + k * h, h, rate);
  vehicle_.p = xi.head<2>();
  const double folded = unbounded_->Canonical(xi.z());
  r.w_reset = folded != xi.z();
  w_ = folded;
}

const SimLog& Simulator::Run() {
  while (!finished_) Step();
  return log_;
}

void Simulator::SetSpline(BezierSpline spline, const std::string& tag) {
  if (spline.degree() < 3) {
    throw ConfigurationError("guidance needs degree >= 3 (second derivatives)");
  }
  scenario_.spline = std::make_shared<const BezierSpline>(std::move(spline));
  RebuildPath();
  const double end = scenario_.spline->ParameterEnd();
  if (scenario_.mode == SimMode::kVehicle && w_ > end) w_ = end;
  NoteEvent(tag);
}

void Simulator::MovePoints(std::span<const PointMove> moves) {
  BezierSpline moved = gvfnav::MovePoints(*scenario_.spline, moves);
  ++recomputations_;
  SetSpline(std::move(moved), "move_free_point");
}

void Simulator::SetGuidanceGains(const GuidanceGains& gains) {
  gains.Validate();
  scenario_.guidance = gains;
  NoteEvent("set_guidance_gains");
}

void Simulator::SetSpeedParams(const std::optional<SpeedSetpointParams>& setpoint,
                               const std::optional<SpeedGains>& gains) {
  if (setpoint) setpoint->Validate();
  if (gains) gains->Validate();
  if (setpoint) scenario_.setpoint = *setpoint;
  if (gains) {
    scenario_.speed_gains = *gains;
    pid_.set_gains(*gains);
  }
  NoteEvent("set_speed_params");
}

void Simulator::SetNoise(const NoiseModel& noise) {
  noise_.set_model(noise);
  scenario_.noise = noise;
  NoteEvent("set_noise");
}

SimLog RunScenario(const Scenario& scenario) {
  Simulator sim(scenario);
  return sim.Run();
}

}  // namespace gvfnav
