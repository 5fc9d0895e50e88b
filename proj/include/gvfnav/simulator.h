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

// Closed-loop simulation: spline, field guidance, speed loop, vehicle and
// disturbance, stepped at a fixed dt.
//
// Vehicle mode, per step at t = k dt:
//   1. draw d and measure p + d
//   2. kappa(w) -> v_ref; filter v; PID -> u_v (held over the step)
//   3. integrate (p, theta, v, w) with RK4, re-evaluating the field, w' and
//      u_theta at the measured position in every stage
//   4. w >= N: reset to 0 (loop_reset) or finish; w < 0 clamps to 0
// Pure-field mode integrates xi' = chi(xi) + (d, 0) instead, wrapping w on
// closed splines and extending the end polynomials otherwise.

#ifndef GVFNAV_SIMULATOR_H_
#define GVFNAV_SIMULATOR_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gvfnav/disturbance.h"
#include "gvfnav/path_distance.h"
#include "gvfnav/scenario.h"
#include "gvfnav/sim_log.h"
#include "gvfnav/speed_control.h"

namespace gvfnav {

class Simulator {
 public:
  // Validates the scenario (ValidationError).
  explicit Simulator(Scenario scenario);

  // Advances exactly one dt and returns the record of that step. StateError
  // once finished. A degenerate field projection finishes the run with a
  // diagnostic record whose event starts with "abort".
  const SimRecord& Step();

  // Steps until finished and returns the log.
  const SimLog& Run();

  bool finished() const { return finished_; }
  const std::optional<std::string>& abort_reason() const { return abort_; }
  std::int64_t step_count() const { return step_; }
  double time() const { return static_cast<double>(step_) * scenario_.dt; }
  const SimLog& log() const { return log_; }

  // Current configuration, including edits applied so far.
  const Scenario& scenario() const { return scenario_; }
  const BezierSpline& spline() const { return *scenario_.spline; }
  const VehicleState& vehicle() const { return vehicle_; }
  double w() const { return w_; }
  const SpeedPid& pid() const { return pid_; }

  // Edits take effect from the next step and are tagged in its event column.
  void SetSpline(BezierSpline spline, const std::string& tag = "spline");
  // All moves are applied, then locked points are recomputed once.
  void MovePoints(std::span<const PointMove> moves);
  void SetGuidanceGains(const GuidanceGains& gains);
  void SetSpeedParams(const std::optional<SpeedSetpointParams>& setpoint,
                      const std::optional<SpeedGains>& gains);
  void SetNoise(const NoiseModel& noise);
  void NoteEvent(const std::string& tag);

  // Number of times the locked points were recomputed by MovePoints.
  std::int64_t spline_recomputations() const { return recomputations_; }

 private:
  void RebuildPath();
  void StepVehicle(SimRecord& record, const Vec2& d);
  void StepPureField(SimRecord& record, const Vec2& d);
  void FillErrors(SimRecord& record, const Vec2& p, const PathSample& sample);
  std::string TakeEvents();
  void Finish(const std::string& reason);

  Scenario scenario_;
  std::shared_ptr<const UnboundedSplinePath> unbounded_;
  std::unique_ptr<PathDistanceIndex> distance_;
  DisturbanceSource noise_;
  MovingAverageFilter filter_;
  SpeedPid pid_;
  VehicleState vehicle_;
  double w_ = 0.0;
  std::int64_t step_ = 0;
  std::int64_t total_steps_ = 0;
  bool finished_ = false;
  std::optional<std::string> abort_;
  std::vector<std::string> pending_events_;
  std::int64_t recomputations_ = 0;
  SimLog log_;
};

// Convenience: Simulator(scenario).Run().
SimLog RunScenario(const Scenario& scenario);

}  // namespace gvfnav

#endif  // GVFNAV_SIMULATOR_H_
