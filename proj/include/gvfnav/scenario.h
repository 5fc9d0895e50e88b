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

// Simulation scenarios and their JSON form.

#ifndef GVFNAV_SCENARIO_H_
#define GVFNAV_SCENARIO_H_

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gvfnav/bezier.h"
#include "gvfnav/disturbance.h"
#include "gvfnav/errors.h"
#include "gvfnav/gvf.h"
#include "gvfnav/speed_control.h"
#include "gvfnav/vehicle.h"

namespace gvfnav {

inline constexpr int kScenarioSchemaVersion = 1;

enum class SimMode {
  kVehicle,    // unicycle + speed loop following the field
  kPureField,  // xi' = chi + (d, 0), no vehicle
};

enum class SteeringMode {
  kDirect,    // theta' = u_theta
  kActuated,  // theta' = v tan(phi) / l with phi clamped
};

std::string_view ToString(SimMode mode);
SimMode ParseSimMode(std::string_view text);
std::string_view ToString(SteeringMode mode);
SteeringMode ParseSteeringMode(std::string_view text);

struct Scenario {
  int schema_version = kScenarioSchemaVersion;
  std::string name;
  std::shared_ptr<const BezierSpline> spline;
  GuidanceGains guidance;
  SpeedSetpointParams setpoint;
  SpeedGains speed_gains;
  int filter_window = kDefaultFilterWindow;
  SpeedPlantParams plant;
  VehicleParams vehicle;
  SteeringMode steering_mode = SteeringMode::kDirect;
  VehicleState initial;
  double w0 = 0.0;
  double dt = 0.01;        // s
  double duration = 120.0; // s
  NoiseModel noise;
  std::uint64_t seed = 1;
  // At w >= N: restart from w = 0 when true, finish the run otherwise.
  bool loop_reset = true;
  SimMode mode = SimMode::kVehicle;
  // RK4 sub-steps per logged step; guidance is re-evaluated in each.
  int substeps = 1;
  // Path resolution of the per-step distance-to-path column.
  int path_samples_per_segment = 1024;

  // Non-fatal notes from loading, e.g. repaired spline joints.
  std::vector<FieldIssue> warnings;

  // Number of steps in a full run: round(duration / dt).
  std::int64_t total_steps() const;

  // ValidationError listing every offending field by JSON-pointer path.
  void Validate() const;
};

// Missing fields take the defaults above, except "spline" (or
// "spline_file", resolved against `base_dir`), which is required.
Scenario ScenarioFromJson(const nlohmann::json& doc,
                          const std::string& base_dir = ".");
nlohmann::json ScenarioToJson(const Scenario& scenario);

Scenario LoadScenarioFile(const std::string& path);

}  // namespace gvfnav

#endif  // GVFNAV_SCENARIO_H_
