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

#include "gvfnav/spline_io.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gvfnav/errors.h"

namespace gvfnav {

using nlohmann::json;

json PointToJson(const Vec2& p) { return json::array({p.x(), p.y()}); }

Vec2 PointFromJson(const json& value, const std::string& path,
                   std::vector<FieldIssue>* issues) {
  if (!value.is_array() || value.size() != 2 || !value[0].is_number() ||
      !value[1].is_number()) {
    issues->push_back({path, "expected [x, y]"});
    return Vec2::Zero();
  }
  const Vec2 p(value[0].get<double>(), value[1].get<double>());
  if (!IsFinite(p)) {
    issues->push_back({path, "coordinates must be finite"});
    return Vec2::Zero();
  }
  return p;
}

namespace {

int ReadDegree(const json& doc, std::vector<FieldIssue>* issues) {
  if (!doc.contains("degree")) return -1;
  const auto& d = doc["degree"];
  if (!d.is_number_integer() || d.get<int>() < 1 ||
      d.get<int>() > kMaxBezierDegree) {
    issues->push_back({"/degree", "must be an integer in [1, " +
                                      std::to_string(kMaxBezierDegree) + "]"});
    return -1;
  }
  return d.get<int>();
}

Continuity ReadContinuity(const json& doc, std::vector<FieldIssue>* issues) {
  if (!doc.contains("continuity")) return Continuity::kC2;
  const auto& c = doc["continuity"];
  if (!c.is_string()) {
    issues->push_back({"/continuity", "must be one of C0, C1, C2"});
    return Continuity::kC2;
  }
  try {
    return ParseContinuity(c.get<std::string>());
  } catch (const ConfigurationError& e) {
    issues->push_back({"/continuity", e.what()});
    return Continuity::kC2;
  }
}

void ThrowIfAny(std::vector<FieldIssue>& issues) {
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

SplineLoadResult FromFreePoints(const json& doc, int degree,
                                Continuity continuity,
                                std::vector<FieldIssue>& issues) {
  if (degree < 0 && !doc.contains("degree")) {
    issues.push_back({"/degree", "required with free_points"});
  }
  const auto& ns = doc.value("num_segments", json());
  if (!ns.is_number_integer() || ns.get<int>() < 1) {
    issues.push_back({"/num_segments", "must be a positive integer"});
  }
  const auto& fp = doc["free_points"];
  if (!fp.is_array()) issues.push_back({"/free_points", "must be an array"});
  ThrowIfAny(issues);

  const int num_segments = ns.get<int>();
  if (num_segments > 1 && degree < MinimumDegree(continuity)) {
    throw ValidationError(
        "/degree", std::string(ToString(continuity)) + " needs degree >= " +
                       std::to_string(MinimumDegree(continuity)));
  }
  const int expected = ConfigurablePointCount(num_segments, degree, continuity);
  if (static_cast<int>(fp.size()) != expected) {
    throw ValidationError("/free_points",
                          "expected " + std::to_string(expected) +
                              " points, got " + std::to_string(fp.size()));
  }
  std::vector<Vec2> points;
  for (size_t k = 0; k < fp.size(); ++k) {
    points.push_back(
        PointFromJson(fp[k], "/free_points/" + std::to_string(k), &issues));
  }
  ThrowIfAny(issues);
  return {SplineFromConfigurablePoints(points, num_segments, degree, continuity),
          {}};
}

std::string PointText(const Vec2& p) {
  std::ostringstream out;
  out.precision(6);
  out << "(" << p.x() << ", " << p.y() << ")";
  return out.str();
}

}  // namespace

SplineLoadResult SplineFromJson(const json& doc) {
  std::vector<FieldIssue> issues;
  if (!doc.is_object()) throw ValidationError("", "spline must be an object");
  int degree = ReadDegree(doc, &issues);
  const Continuity continuity = ReadContinuity(doc, &issues);

  if (doc.contains("free_points") && !doc.contains("segments")) {
    return FromFreePoints(doc, degree, continuity, issues);
  }
  if (!doc.contains("segments") || !doc["segments"].is_array() ||
      doc["segments"].empty()) {
    issues.push_back({"/segments", "must be a non-empty array"});
    ThrowIfAny(issues);
  }

  const auto& segments_json = doc["segments"];
  std::vector<BezierSegment> draft;
  for (size_t i = 0; i < segments_json.size(); ++i) {
    const std::string base = "/segments/" + std::to_string(i);
    const auto& seg = segments_json[i];
    const json* pts = nullptr;
    if (seg.is_object() && seg.contains("points")) {
      pts = &seg["points"];
    } else if (seg.is_array()) {
      pts = &seg;
    }
    if (pts == nullptr || !pts->is_array()) {
      issues.push_back({base + "/points", "must be an array of [x, y]"});
      continue;
    }
    if (degree < 0) degree = static_cast<int>(pts->size()) - 1;
    if (static_cast<int>(pts->size()) != degree + 1) {
      issues.push_back({base + "/points", "expected " +
                                              std::to_string(degree + 1) +
                                              " points, got " +
                                              std::to_string(pts->size())});
      continue;
    }
    std::vector<Vec2> points;
    for (size_t k = 0; k < pts->size(); ++k) {
      points.push_back(PointFromJson((*pts)[k],
                                     base + "/points/" + std::to_string(k),
                                     &issues));
    }
    if (points.size() >= 2) draft.emplace_back(std::move(points));
  }
  if (degree < 1) issues.push_back({"/degree", "a segment needs >= 2 points"});
  ThrowIfAny(issues);
  if (draft.size() > 1 && degree < MinimumDegree(continuity)) {
    throw ValidationError(
        "/degree", std::string(ToString(continuity)) + " needs degree >= " +
                       std::to_string(MinimumDegree(continuity)));
  }

  SplineLoadResult result{EnforceContinuity(draft, continuity), {}};
  const int p = Order(continuity);
  for (int i = 1; i < result.spline.num_segments(); ++i) {
    for (int k = 0; k <= p; ++k) {
      const Vec2& given = draft[i].point(k);
      const Vec2& fixed = result.spline.segment(i).point(k);
      const double scale =
          std::max({1.0, given.cwiseAbs().maxCoeff(), fixed.cwiseAbs().maxCoeff()});
      const double offset = (given - fixed).norm();
      if (offset > kJointTolerance * scale) {
        std::ostringstream off;
        off.precision(3);
        off << offset;
        result.warnings.push_back(
            {"/segments/" + std::to_string(i) + "/points/" + std::to_string(k),
             "replaced " + PointText(given) + " by " + PointText(fixed) +
                 " (offset " + off.str() + " m) to satisfy " +
                 std::string(ToString(continuity))});
      }
    }
  }
  return result;
}

json SplineToJson(const BezierSpline& spline) {
  json segments = json::array();
  for (const auto& segment : spline.segments()) {
    json points = json::array();
    for (const auto& p : segment.points()) points.push_back(PointToJson(p));
    segments.push_back({{"points", std::move(points)}});
  }
  return {{"degree", spline.degree()},
          {"continuity", std::string(ToString(spline.continuity()))},
          {"segments", std::move(segments)}};
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

json ParseJsonText(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigurationError(origin + ": " + e.what());
  }
}

SplineLoadResult LoadSplineFile(const std::string& path) {
  return SplineFromJson(ParseJsonText(ReadTextFile(path), path));
}

void SaveSplineFile(const BezierSpline& spline, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigurationError("cannot write '" + path + "'");
  out << SplineToJson(spline).dump(2) << "\n";
}

}  // namespace gvfnav
