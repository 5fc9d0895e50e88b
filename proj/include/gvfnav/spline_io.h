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

// JSON spline files.
//
// Full form:
//   {"degree": 5, "continuity": "C2",
//    "segments": [{"points": [[x, y], ...]}, ...]}
// Free-point form (beta^s_k enumeration, completed on load):
//   {"degree": 5, "continuity": "C2", "num_segments": 3,
//    "free_points": [[x, y], ...]}
//
// Coordinates are HOME-relative meters.

#ifndef GVFNAV_SPLINE_IO_H_
#define GVFNAV_SPLINE_IO_H_

#include <string>
#include <vector>

#include <json.hpp>

#include "gvfnav/bezier.h"
#include "gvfnav/errors.h"

namespace gvfnav {

struct SplineLoadResult {
  BezierSpline spline;
  // Set when stored locked points or joints disagreed with the recurrences
  // and were overwritten.
  std::vector<FieldIssue> warnings;
};

// Parses either form and completes the locked points. Joints that break the
// declared continuity are repaired and reported in `warnings`; structural
// problems (wrong point counts, non-finite values, unknown continuity) throw
// ValidationError with JSON-pointer paths.
SplineLoadResult SplineFromJson(const nlohmann::json& doc);

// Full form. Doubles are written with round-trip precision, so
// SplineFromJson(SplineToJson(s)).spline == s.
nlohmann::json SplineToJson(const BezierSpline& spline);

SplineLoadResult LoadSplineFile(const std::string& path);
void SaveSplineFile(const BezierSpline& spline, const std::string& path);

nlohmann::json PointToJson(const Vec2& p);
// Accepts [x, y]. Appends an issue at `path` and returns zero otherwise.
Vec2 PointFromJson(const nlohmann::json& value, const std::string& path,
                   std::vector<FieldIssue>* issues);

// Reads a whole file; NotFoundError when it cannot be opened.
std::string ReadTextFile(const std::string& path);
// ConfigurationError when the JSON does not parse.
nlohmann::json ParseJsonText(const std::string& text, const std::string& origin);

}  // namespace gvfnav

#endif  // GVFNAV_SPLINE_IO_H_
