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

#include "gvfnav/scenario.h"

#include <cmath>
#include <filesystem>
#include <set>

#include "gvfnav/spline_io.h"

namespace gvfnav {

using nlohmann::json;

std::string_view ToString(SimMode mode) {
  return mode == SimMode::kVehicle ? "vehicle" : "pure_field";
}

SimMode ParseSimMode(std::string_view text) {
  if (text == "vehicle") return SimMode::kVehicle;
  if (text == "pure_field") return SimMode::kPureField;
  throw ConfigurationError("unknown mode '" + std::string(text) + "'");
}

std::string_view ToString(SteeringMode mode) {
  return mode == SteeringMode::kDirect ? "direct" : "actuated";
}

SteeringMode ParseSteeringMode(std::string_view text) {
  if (text == "direct") return SteeringMode::kDirect;
  if (text == "actuated") return SteeringMode::kActuated;
  throw ConfigurationError("unknown steering_mode '" + std::string(text) + "'");
}

std::int64_t Scenario::total_steps() const {
  return static_cast<std::int64_t>(std::llround(duration / dt));
}

namespace {

// Reads optional typed members of one JSON object, recording type errors
// under their JSON-pointer path instead of throwing at the first one.
class Reader {
 public:
  Reader(const json& doc, std::string path, std::vector<FieldIssue>* issues)
      : doc_(doc), path_(std::move(path)), issues_(issues) {
    if (!doc_.is_object()) issues_->push_back({Where(""), "must be an object"});
  }

  void Number(const char* key, double* out) {
    const json* v = Find(key);
    if (v == nullptr) return;
    if (!v->is_number() || !std::isfinite(v->get<double>())) {
      issues_->push_back({Where(key), "must be a finite number"});
      return;
    }
    *out = v->get<double>();
  }

  void Integer(const char* key, int* out) {
    const json* v = Find(key);
    if (v == nullptr) return;
    if (!v->is_number_integer()) {
      issues_->push_back({Where(key), "must be an integer"});
      return;
    }
    *out = v->get<int>();
  }

  void Unsigned(const char* key, std::uint64_t* out) {
    const json* v = Find(key);
    if (v == nullptr) return;
    if (!v->is_number_integer() ||
        (!v->is_number_unsigned() && v->get<std::int64_t>() < 0)) {
      issues_->push_back({Where(key), "must be a non-negative integer"});
      return;
    }
    *out = v->get<std::uint64_t>();
  }

  void Boolean(const char* key, bool* out) {
    const json* v = Find(key);
    if (v == nullptr) return;
    if (!v->is_boolean()) {
      issues_->push_back({Where(key), "must be true or false"});
      return;
    }
    *out = v->get<bool>();
  }

  void String(const char* key, std::string* out) {
    const json* v = Find(key);
    if (v == nullptr) return;
    if (!v->is_string()) {
      issues_->push_back({Where(key), "must be a string"});
      return;
    }
    *out = v->get<std::string>();
  }

  template <typename Enum, typename Parse>
  void Enumerated(const char* key, Enum* out, Parse parse) {
    std::string text;
    const size_t before = issues_->size();
    String(key, &text);
    if (issues_->size() != before || Find(key) == nullptr) return;
    try {
      *out = parse(text);
    } catch (const ConfigurationError& e) {
      issues_->push_back({Where(key), e.what()});
    }
  }

  bool Has(const char* key) const { return Find(key) != nullptr; }
  const json& At(const char* key) const { return doc_[key]; }
  std::string Where(std::string_view key) const {
    return key.empty() ? path_ : path_ + "/" + std::string(key);
  }
  void Check(bool ok, const char* key, const std::string& message) {
    if (!ok) issues_->push_back({Where(key), message});
  }

 private:
  const json* Find(const char* key) const {
    if (!doc_.is_object()) return nullptr;
    const auto it = doc_.find(key);
    return it == doc_.end() ? nullptr : &*it;
  }

  const json& doc_;
  std::string path_;
  std::vector<FieldIssue>* issues_;
};

void ReadSpline(const json& doc, const std::string& base_dir,
                Scenario* scenario, std::vector<FieldIssue>* issues) {
  try {
    SplineLoadResult loaded = [&] {
      if (doc.contains("spline")) return SplineFromJson(doc["spline"]);
      if (doc.contains("spline_file") && doc["spline_file"].is_string()) {
        std::filesystem::path file = doc["spline_file"].get<std::string>();
        if (file.is_relative()) file = std::filesystem::path(base_dir) / file;
        return LoadSplineFile(file.string());
      }
      throw ValidationError("/spline", "a spline or spline_file is required");
    }();
    scenario->spline =
        std::make_shared<const BezierSpline>(std::move(loaded.spline));
    for (auto& w : loaded.warnings) {
      scenario->warnings.push_back({"/spline" + w.path, w.message});
    }
  } catch (const ValidationError& e) {
    for (const auto& issue : e.issues()) {
      issues->push_back({issue.path.starts_with("/spline")
                             ? issue.path
                             : "/spline" + issue.path,
                         issue.message});
    }
  } catch (const Error& e) {
    issues->push_back({"/spline", e.what()});
  }
}

void Require(bool ok, std::string path, std::string message,
             std::vector<FieldIssue>* issues) {
  if (!ok) issues->push_back({std::move(path), std::move(message)});
}

void CollectIssues(const Scenario& s, std::vector<FieldIssue>* issues) {
  Require(s.schema_version == kScenarioSchemaVersion, "/schema_version",
          "unsupported schema version", issues);
  Require(s.spline != nullptr, "/spline", "missing spline", issues);
  const auto& g = s.guidance;
  Require(g.k1 > 0.0, "/guidance/k1", "must be > 0", issues);
  Require(g.k2 > 0.0, "/guidance/k2", "must be > 0", issues);
  Require(g.k_theta > 0.0, "/guidance/k_theta", "must be > 0", issues);
  Require(g.direction == 1 || g.direction == -1, "/guidance/direction",
          "must be 1 or -1", issues);
  Require(s.setpoint.v_min >= 0.0, "/setpoint/v_min", "must be >= 0", issues);
  Require(s.setpoint.v_max >= s.setpoint.v_min, "/setpoint/v_max",
          "must be >= v_min", issues);
  Require(s.setpoint.c_kappa >= 0.0, "/setpoint/c_kappa", "must be >= 0",
          issues);
  const auto& k = s.speed_gains;
  Require(k.k_f >= 0.0, "/speed_gains/k_f", "must be >= 0", issues);
  Require(k.k_p >= 0.0, "/speed_gains/k_p", "must be >= 0", issues);
  Require(k.k_i >= 0.0, "/speed_gains/k_i", "must be >= 0", issues);
  Require(k.k_d >= 0.0, "/speed_gains/k_d", "must be >= 0", issues);
  Require(s.filter_window >= 1, "/filter_window", "must be >= 1", issues);
  Require(s.plant.throttle_gain > 0.0, "/plant/throttle_gain", "must be > 0",
          issues);
  Require(s.plant.time_constant > 0.0, "/plant/time_constant", "must be > 0",
          issues);
  Require(s.vehicle.wheelbase > 0.0, "/vehicle/wheelbase", "must be > 0",
          issues);
  Require(s.vehicle.phi_max > 0.0 && s.vehicle.phi_max < std::numbers::pi / 2,
          "/vehicle/phi_max", "must be in (0, pi/2)", issues);
  Require(s.vehicle.eps_v >= 0.0, "/vehicle/eps_v", "must be >= 0", issues);
  Require(s.vehicle.max_speed > 0.0, "/vehicle/max_speed", "must be > 0",
          issues);
  Require(s.dt > 0.0, "/dt", "must be > 0", issues);
  Require(s.duration > 0.0, "/duration", "must be > 0", issues);
  Require(s.dt > 0.0 && s.duration >= s.dt, "/duration", "must be >= dt",
          issues);
  Require(s.noise.bound >= 0.0, "/noise/bound", "must be >= 0", issues);
  Require(s.noise.sigma >= 0.0, "/noise/sigma", "must be >= 0", issues);
  Require(s.substeps >= 1 && s.substeps <= 1000, "/substeps",
          "must be in [1, 1000]", issues);
  Require(s.path_samples_per_segment >= 2, "/path_samples_per_segment",
          "must be >= 2", issues);
  if (s.spline != nullptr) {
    Require(s.w0 >= 0.0 && s.w0 <= s.spline->ParameterEnd(), "/initial/w",
            "must lie in [0, N]", issues);
    Require(s.spline->degree() >= 3, "/spline/degree",
            "guidance needs degree >= 3 (second derivatives)", issues);
  }
  Require(IsFinite(s.initial.p) && std::isfinite(s.initial.theta) &&
              std::isfinite(s.initial.v),
          "/initial", "must be finite", issues);
}

}  // namespace

void Scenario::Validate() const {
  std::vector<FieldIssue> issues;
  CollectIssues(*this, &issues);
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

Scenario ScenarioFromJson(const json& doc, const std::string& base_dir) {
  std::vector<FieldIssue> issues;
  Scenario s;
  Reader top(doc, "", &issues);
  if (!doc.is_object()) throw ValidationError(std::move(issues));

  static const std::set<std::string> kKnown = {
      "schema_version", "name",          "spline",
      "spline_file",    "guidance",      "setpoint",
      "speed_gains",    "filter_window", "plant",
      "vehicle",        "steering_mode", "initial",
      "dt",             "duration",      "noise",
      "seed",           "loop_reset",    "mode",
      "substeps",       "path_samples_per_segment",
      "notes"};
  for (const auto& [key, value] : doc.items()) {
    if (!kKnown.contains(key)) {
      s.warnings.push_back({"/" + key, "unknown field ignored"});
    }
  }

  top.Integer("schema_version", &s.schema_version);
  top.String("name", &s.name);
  ReadSpline(doc, base_dir, &s, &issues);

  if (top.Has("guidance")) {
    Reader r(top.At("guidance"), "/guidance", &issues);
    r.Number("k1", &s.guidance.k1);
    r.Number("k2", &s.guidance.k2);
    r.Number("k_theta", &s.guidance.k_theta);
    r.Integer("direction", &s.guidance.direction);
  }
  if (top.Has("setpoint")) {
    Reader r(top.At("setpoint"), "/setpoint", &issues);
    r.Number("v_min", &s.setpoint.v_min);
    r.Number("v_max", &s.setpoint.v_max);
    r.Number("c_kappa", &s.setpoint.c_kappa);
  }
  if (top.Has("speed_gains")) {
    Reader r(top.At("speed_gains"), "/speed_gains", &issues);
    r.Number("k_f", &s.speed_gains.k_f);
    r.Number("k_p", &s.speed_gains.k_p);
    r.Number("k_i", &s.speed_gains.k_i);
    r.Number("k_d", &s.speed_gains.k_d);
  }
  top.Integer("filter_window", &s.filter_window);
  if (top.Has("plant")) {
    Reader r(top.At("plant"), "/plant", &issues);
    r.Number("throttle_gain", &s.plant.throttle_gain);
    r.Number("time_constant", &s.plant.time_constant);
  }
  if (top.Has("vehicle")) {
    Reader r(top.At("vehicle"), "/vehicle", &issues);
    std::string preset = "default";
    r.String("preset", &preset);
    if (preset == "measured_steering") {
      s.vehicle = VehicleParams::MeasuredSteeringPreset();
    } else {
      r.Check(preset == "default", "preset",
              "must be 'default' or 'measured_steering'");
    }
    r.Number("wheelbase", &s.vehicle.wheelbase);
    r.Number("phi_max", &s.vehicle.phi_max);
    r.Number("eps_v", &s.vehicle.eps_v);
    r.Number("max_speed", &s.vehicle.max_speed);
  }
  top.Enumerated("steering_mode", &s.steering_mode, ParseSteeringMode);
  if (top.Has("initial")) {
    Reader r(top.At("initial"), "/initial", &issues);
    r.Number("x", &s.initial.p.x());
    r.Number("y", &s.initial.p.y());
    r.Number("theta", &s.initial.theta);
    r.Number("v", &s.initial.v);
    r.Number("w", &s.w0);
  }
  top.Number("dt", &s.dt);
  top.Number("duration", &s.duration);
  if (top.Has("noise")) {
    Reader r(top.At("noise"), "/noise", &issues);
    r.Enumerated("kind", &s.noise.kind, ParseNoiseKind);
    r.Number("bound", &s.noise.bound);
    r.Number("sigma", &s.noise.sigma);
  }
  top.Unsigned("seed", &s.seed);
  top.Boolean("loop_reset", &s.loop_reset);
  top.Enumerated("mode", &s.mode, ParseSimMode);
  top.Integer("substeps", &s.substeps);
  top.Integer("path_samples_per_segment", &s.path_samples_per_segment);

  CollectIssues(s, &issues);
  if (!issues.empty()) throw ValidationError(std::move(issues));
  s.initial.theta = WrapAngle(s.initial.theta);
  return s;
}

json ScenarioToJson(const Scenario& s) {
  json doc;
  doc["schema_version"] = s.schema_version;
  doc["name"] = s.name;
  if (s.spline != nullptr) doc["spline"] = SplineToJson(*s.spline);
  doc["guidance"] = {{"k1", s.guidance.k1},
                     {"k2", s.guidance.k2},
                     {"k_theta", s.guidance.k_theta},
                     {"direction", s.guidance.direction}};
  doc["setpoint"] = {{"v_min", s.setpoint.v_min},
                     {"v_max", s.setpoint.v_max},
                     {"c_kappa", s.setpoint.c_kappa}};
  doc["speed_gains"] = {{"k_f", s.speed_gains.k_f},
                        {"k_p", s.speed_gains.k_p},
                        {"k_i", s.speed_gains.k_i},
                        {"k_d", s.speed_gains.k_d}};
  doc["filter_window"] = s.filter_window;
  doc["plant"] = {{"throttle_gain", s.plant.throttle_gain},
                  {"time_constant", s.plant.time_constant}};
  doc["vehicle"] = {{"wheelbase", s.vehicle.wheelbase},
                    {"phi_max", s.vehicle.phi_max},
                    {"eps_v", s.vehicle.eps_v},
                    {"max_speed", s.vehicle.max_speed}};
  doc["steering_mode"] = std::string(ToString(s.steering_mode));
  doc["initial"] = {{"x", s.initial.p.x()},
                    {"y", s.initial.p.y()},
                    {"theta", s.initial.theta},
                    {"v", s.initial.v},
                    {"w", s.w0}};
  doc["dt"] = s.dt;
  doc["duration"] = s.duration;
  doc["noise"] = {{"kind", std::string(ToString(s.noise.kind))},
                  {"bound", s.noise.bound},
                  {"sigma", s.noise.sigma}};
  doc["seed"] = s.seed;
  doc["loop_reset"] = s.loop_reset;
  doc["mode"] = std::string(ToString(s.mode));
  doc["substeps"] = s.substeps;
  doc["path_samples_per_segment"] = s.path_samples_per_segment;
  return doc;
}

Scenario LoadScenarioFile(const std::string& path) {
  const json doc = ParseJsonText(ReadTextFile(path), path);
  const auto dir = std::filesystem::path(path).parent_path();
  return ScenarioFromJson(doc, dir.empty() ? "." : dir.string());
}

}  // namespace gvfnav
