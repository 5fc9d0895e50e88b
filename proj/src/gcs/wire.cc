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

#include "gvfnav/gcs/wire.h"

#include <cmath>

#include "gvfnav/spline_io.h"

namespace gvfnav::gcs {

using nlohmann::json;

namespace {

constexpr std::pair<EditKind, std::string_view> kEditNames[] = {
    {EditKind::kMoveFreePoint, "move_free_point"},
    {EditKind::kSetGuidanceGains, "set_guidance_gains"},
    {EditKind::kSetSpeedParams, "set_speed_params"},
    {EditKind::kPause, "pause"},
    {EditKind::kResume, "resume"},
    {EditKind::kReset, "reset"},
    {EditKind::kSetNoise, "set_noise"},
    {EditKind::kSetPace, "set_pace"},
};

void OptionalNumber(const json& obj, const char* key, const std::string& path,
                    std::optional<double>* out, std::vector<FieldIssue>* issues) {
  if (!obj.contains(key)) return;
  const auto& v = obj[key];
  if (!v.is_number() || !std::isfinite(v.get<double>())) {
    issues->push_back({path + "/" + key, "must be a finite number"});
    return;
  }
  *out = v.get<double>();
}

const json& Object(const json& doc, const char* key, const std::string& path,
                   std::vector<FieldIssue>* issues) {
  static const json kEmpty = json::object();
  if (!doc.contains(key)) return kEmpty;
  if (!doc[key].is_object()) {
    issues->push_back({path, "must be an object"});
    return kEmpty;
  }
  return doc[key];
}

int RequireInt(const json& obj, const char* key, const std::string& path,
               std::vector<FieldIssue>* issues) {
  if (!obj.contains(key) || !obj[key].is_number_integer()) {
    issues->push_back({path + "/" + key, "must be an integer"});
    return 0;
  }
  return obj[key].get<int>();
}

double RequireNumber(const json& obj, const char* key, const std::string& path,
                     std::vector<FieldIssue>* issues) {
  std::optional<double> v;
  if (!obj.contains(key)) {
    issues->push_back({path + "/" + key, "is required"});
    return 0.0;
  }
  OptionalNumber(obj, key, path, &v, issues);
  return v.value_or(0.0);
}

template <typename T>
void Put(json& obj, const char* key, const std::optional<T>& value) {
  if (value) obj[key] = *value;
}

}  // namespace

std::string_view ToString(EditKind kind) {
  for (const auto& [k, name] : kEditNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

EditKind ParseEditKind(std::string_view text) {
  for (const auto& [k, name] : kEditNames) {
    if (name == text) return k;
  }
  throw ConfigurationError("unknown edit kind '" + std::string(text) + "'");
}

GuidanceGains GuidancePatch::ApplyTo(GuidanceGains g) const {
  g.k1 = k1.value_or(g.k1);
  g.k2 = k2.value_or(g.k2);
  g.k_theta = k_theta.value_or(g.k_theta);
  g.direction = direction.value_or(g.direction);
  return g;
}

SpeedSetpointParams SetpointPatch::ApplyTo(SpeedSetpointParams p) const {
  p.v_min = v_min.value_or(p.v_min);
  p.v_max = v_max.value_or(p.v_max);
  p.c_kappa = c_kappa.value_or(p.c_kappa);
  return p;
}

SpeedGains SpeedGainsPatch::ApplyTo(SpeedGains g) const {
  g.k_f = k_f.value_or(g.k_f);
  g.k_p = k_p.value_or(g.k_p);
  g.k_i = k_i.value_or(g.k_i);
  g.k_d = k_d.value_or(g.k_d);
  return g;
}

NoiseModel NoisePatch::ApplyTo(NoiseModel m) const {
  m.kind = kind.value_or(m.kind);
  m.bound = bound.value_or(m.bound);
  m.sigma = sigma.value_or(m.sigma);
  return m;
}

EditCommand EditFromJson(const json& doc) {
  std::vector<FieldIssue> issues;
  if (!doc.is_object()) throw ValidationError("", "edit must be an object");
  if (!doc.contains("kind") || !doc["kind"].is_string()) {
    throw ValidationError("/kind", "must be a string");
  }
  EditCommand edit;
  try {
    edit.kind = ParseEditKind(doc["kind"].get<std::string>());
  } catch (const ConfigurationError& e) {
    throw ValidationError("/kind", e.what());
  }

  switch (edit.kind) {
    case EditKind::kMoveFreePoint: {
      const auto read_move = [&](const json& m, const std::string& path) {
        if (!m.is_object()) {
          issues.push_back({path, "must be an object"});
          return;
        }
        PointMove move;
        move.index.segment = RequireInt(m, "segment", path, &issues);
        move.index.index = RequireInt(m, "index", path, &issues);
        move.position = {RequireNumber(m, "x", path, &issues),
                         RequireNumber(m, "y", path, &issues)};
        edit.moves.push_back(move);
      };
      if (doc.contains("moves")) {
        if (!doc["moves"].is_array() || doc["moves"].empty()) {
          issues.push_back({"/moves", "must be a non-empty array"});
        } else {
          for (size_t i = 0; i < doc["moves"].size(); ++i) {
            read_move(doc["moves"][i], "/moves/" + std::to_string(i));
          }
        }
      } else {
        read_move(doc, "");
      }
      break;
    }
    case EditKind::kSetGuidanceGains: {
      if (!doc.contains("gains")) issues.push_back({"/gains", "is required"});
      const json& g = Object(doc, "gains", "/gains", &issues);
      OptionalNumber(g, "k1", "/gains", &edit.guidance.k1, &issues);
      OptionalNumber(g, "k2", "/gains", &edit.guidance.k2, &issues);
      OptionalNumber(g, "k_theta", "/gains", &edit.guidance.k_theta, &issues);
      if (g.contains("direction")) {
        if (!g["direction"].is_number_integer()) {
          issues.push_back({"/gains/direction", "must be 1 or -1"});
        } else {
          edit.guidance.direction = g["direction"].get<int>();
        }
      }
      break;
    }
    case EditKind::kSetSpeedParams: {
      if (!doc.contains("setpoint") && !doc.contains("speed_gains")) {
        issues.push_back({"/setpoint", "setpoint or speed_gains is required"});
      }
      const json& s = Object(doc, "setpoint", "/setpoint", &issues);
      OptionalNumber(s, "v_min", "/setpoint", &edit.setpoint.v_min, &issues);
      OptionalNumber(s, "v_max", "/setpoint", &edit.setpoint.v_max, &issues);
      OptionalNumber(s, "c_kappa", "/setpoint", &edit.setpoint.c_kappa, &issues);
      const json& k = Object(doc, "speed_gains", "/speed_gains", &issues);
      OptionalNumber(k, "k_f", "/speed_gains", &edit.speed_gains.k_f, &issues);
      OptionalNumber(k, "k_p", "/speed_gains", &edit.speed_gains.k_p, &issues);
      OptionalNumber(k, "k_i", "/speed_gains", &edit.speed_gains.k_i, &issues);
      OptionalNumber(k, "k_d", "/speed_gains", &edit.speed_gains.k_d, &issues);
      break;
    }
    case EditKind::kSetNoise: {
      if (!doc.contains("noise")) issues.push_back({"/noise", "is required"});
      const json& n = Object(doc, "noise", "/noise", &issues);
      if (n.contains("kind")) {
        try {
          edit.noise.kind = ParseNoiseKind(n["kind"].is_string()
                                               ? n["kind"].get<std::string>()
                                               : std::string());
        } catch (const ConfigurationError& e) {
          issues.push_back({"/noise/kind", e.what()});
        }
      }
      OptionalNumber(n, "bound", "/noise", &edit.noise.bound, &issues);
      OptionalNumber(n, "sigma", "/noise", &edit.noise.sigma, &issues);
      break;
    }
    case EditKind::kSetPace: {
      OptionalNumber(doc, "multiplier", "", &edit.pace, &issues);
      if (edit.pace && !(*edit.pace > 0.0)) {
        issues.push_back({"/multiplier", "must be > 0"});
      }
      if (doc.contains("max_steps_per_tick")) {
        if (!doc["max_steps_per_tick"].is_number_integer() ||
            doc["max_steps_per_tick"].get<int>() < 1) {
          issues.push_back({"/max_steps_per_tick", "must be a positive integer"});
        } else {
          edit.max_steps_per_tick = doc["max_steps_per_tick"].get<int>();
        }
      }
      if (!edit.pace && !edit.max_steps_per_tick) {
        issues.push_back({"/multiplier", "is required"});
      }
      break;
    }
    case EditKind::kPause:
    case EditKind::kResume:
    case EditKind::kReset:
      break;
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return edit;
}

json EditToJson(const EditCommand& edit) {
  json doc = {{"kind", std::string(ToString(edit.kind))}};
  switch (edit.kind) {
    case EditKind::kMoveFreePoint: {
      json moves = json::array();
      for (const auto& m : edit.moves) {
        moves.push_back({{"segment", m.index.segment},
                         {"index", m.index.index},
                         {"x", m.position.x()},
                         {"y", m.position.y()}});
      }
      doc["moves"] = std::move(moves);
      break;
    }
    case EditKind::kSetGuidanceGains: {
      json g = json::object();
      Put(g, "k1", edit.guidance.k1);
      Put(g, "k2", edit.guidance.k2);
      Put(g, "k_theta", edit.guidance.k_theta);
      Put(g, "direction", edit.guidance.direction);
      doc["gains"] = std::move(g);
      break;
    }
    case EditKind::kSetSpeedParams: {
      json s = json::object();
      Put(s, "v_min", edit.setpoint.v_min);
      Put(s, "v_max", edit.setpoint.v_max);
      Put(s, "c_kappa", edit.setpoint.c_kappa);
      json k = json::object();
      Put(k, "k_f", edit.speed_gains.k_f);
      Put(k, "k_p", edit.speed_gains.k_p);
      Put(k, "k_i", edit.speed_gains.k_i);
      Put(k, "k_d", edit.speed_gains.k_d);
      doc["setpoint"] = std::move(s);
      doc["speed_gains"] = std::move(k);
      break;
    }
    case EditKind::kSetNoise: {
      json n = json::object();
      if (edit.noise.kind) n["kind"] = std::string(ToString(*edit.noise.kind));
      Put(n, "bound", edit.noise.bound);
      Put(n, "sigma", edit.noise.sigma);
      doc["noise"] = std::move(n);
      break;
    }
    case EditKind::kSetPace:
      Put(doc, "multiplier", edit.pace);
      Put(doc, "max_steps_per_tick", edit.max_steps_per_tick);
      break;
    case EditKind::kPause:
    case EditKind::kResume:
    case EditKind::kReset:
      break;
  }
  return doc;
}

json Envelope(std::string_view type) {
  return {{"schema_version", kWireSchemaVersion}, {"type", std::string(type)}};
}

json RecordToJson(const SimRecord& record) {
  json out = json::object();
  for (const auto& [name, value] : ColumnValues(record)) {
    std::visit(
        [&, key = std::string(name)](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, std::string_view>) {
            out[key] = std::string(v);
          } else if constexpr (std::is_same_v<T, double>) {
            // JSON has no inf/nan; send null for non-finite values.
            out[key] = std::isfinite(v) ? json(v) : json();
          } else {
            out[key] = v;
          }
        },
        value);
  }
  return out;
}

json PointRolesToJson(const BezierSpline& spline) {
  json points = json::array();
  for (const auto& entry : spline.PointRoles()) {
    const Vec2& p = spline.point(entry.point);
    points.push_back({{"segment", entry.point.segment},
                      {"index", entry.point.index},
                      {"role", std::string(ToString(entry.role))},
                      {"global_index", entry.global_index},
                      {"x", p.x()},
                      {"y", p.y()}});
  }
  return points;
}

json ErrorToJson(const std::exception& error) {
  json out = Envelope("error");
  out["message"] = error.what();
  if (const auto* e = dynamic_cast<const Error*>(&error)) {
    out["code"] = std::string(ToString(e->code()));
  } else {
    out["code"] = "internal";
  }
  if (const auto* v = dynamic_cast<const ValidationError*>(&error)) {
    json issues = json::array();
    for (const auto& issue : v->issues()) {
      issues.push_back({{"path", issue.path}, {"message", issue.message}});
    }
    out["issues"] = std::move(issues);
  }
  return out;
}

json FieldRowsToJson(const std::vector<FieldGridRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back(json::array({r.x, r.y, r.chi_hat_x, r.chi_hat_y}));
  }
  return out;
}

}  // namespace gvfnav::gcs
