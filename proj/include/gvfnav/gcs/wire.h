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

// JSON messages exchanged with ground-control clients. Every message carries
// "schema_version" and a "type" of snapshot, record, ack, error, gap, event,
// field or session. See docs/protocol.md.

#ifndef GVFNAV_GCS_WIRE_H_
#define GVFNAV_GCS_WIRE_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gvfnav/bezier.h"
#include "gvfnav/disturbance.h"
#include "gvfnav/errors.h"
#include "gvfnav/field_grid.h"
#include "gvfnav/gvf.h"
#include "gvfnav/sim_log.h"
#include "gvfnav/speed_control.h"

namespace gvfnav::gcs {

inline constexpr int kWireSchemaVersion = 1;

enum class EditKind {
  kMoveFreePoint,
  kSetGuidanceGains,
  kSetSpeedParams,
  kPause,
  kResume,
  kReset,
  kSetNoise,
  kSetPace,
};

std::string_view ToString(EditKind kind);
EditKind ParseEditKind(std::string_view text);

// Partial updates; unset members keep their current value.
struct GuidancePatch {
  std::optional<double> k1, k2, k_theta;
  std::optional<int> direction;
  GuidanceGains ApplyTo(GuidanceGains gains) const;
};

struct SetpointPatch {
  std::optional<double> v_min, v_max, c_kappa;
  bool empty() const { return !v_min && !v_max && !c_kappa; }
  SpeedSetpointParams ApplyTo(SpeedSetpointParams params) const;
};

struct SpeedGainsPatch {
  std::optional<double> k_f, k_p, k_i, k_d;
  bool empty() const { return !k_f && !k_p && !k_i && !k_d; }
  SpeedGains ApplyTo(SpeedGains gains) const;
};

struct NoisePatch {
  std::optional<NoiseKind> kind;
  std::optional<double> bound, sigma;
  NoiseModel ApplyTo(NoiseModel model) const;
};

struct EditCommand {
  EditKind kind = EditKind::kPause;
  std::vector<PointMove> moves;        // move_free_point
  GuidancePatch guidance;              // set_guidance_gains
  SetpointPatch setpoint;              // set_speed_params
  SpeedGainsPatch speed_gains;         // set_speed_params
  NoisePatch noise;                    // set_noise
  std::optional<double> pace;          // set_pace: wall-clock multiplier
  std::optional<int> max_steps_per_tick;
};

// ValidationError with JSON-pointer paths on malformed input.
EditCommand EditFromJson(const nlohmann::json& doc);
nlohmann::json EditToJson(const EditCommand& edit);

nlohmann::json Envelope(std::string_view type);
nlohmann::json RecordToJson(const SimRecord& record);
nlohmann::json PointRolesToJson(const BezierSpline& spline);
nlohmann::json ErrorToJson(const std::exception& error);
nlohmann::json FieldRowsToJson(const std::vector<FieldGridRow>& rows);

}  // namespace gvfnav::gcs

#endif  // GVFNAV_GCS_WIRE_H_
