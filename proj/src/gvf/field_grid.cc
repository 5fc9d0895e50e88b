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

#include "gvfnav/field_grid.h"

#include <charconv>
#include <cmath>
#include <string_view>

#include <fmt/format.h>

#include "gvfnav/errors.h"

namespace gvfnav {
namespace {

std::vector<double> SplitNumbers(const std::string& text) {
  std::vector<double> values;
  std::string_view rest(text);
  while (true) {
    const size_t comma = rest.find(',');
    const std::string_view token = rest.substr(0, comma);
    double value = 0.0;
    const auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size() ||
        token.empty()) {
      throw InvalidArgumentError("cannot parse number list '" + text + "'");
    }
    values.push_back(value);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return values;
}

double Coordinate(double lo, double hi, int i, int count) {
  if (count == 1) return lo;
  return lo + (hi - lo) * static_cast<double>(i) / (count - 1);
}

}  // namespace

void ValidateFieldGridSpec(const FieldGridSpec& spec) {
  const auto& b = spec.bbox;
  if (!std::isfinite(b.x_min) || !std::isfinite(b.x_max) ||
      !std::isfinite(b.y_min) || !std::isfinite(b.y_max) ||
      !std::isfinite(spec.w)) {
    throw InvalidArgumentError("field grid values must be finite");
  }
  if (!(b.x_max > b.x_min) || !(b.y_max > b.y_min)) {
    throw InvalidArgumentError("bbox needs xmax > xmin and ymax > ymin");
  }
  if (spec.nx < 1 || spec.ny < 1 || spec.nx > kMaxFieldGridSide ||
      spec.ny > kMaxFieldGridSide) {
    throw InvalidArgumentError("grid resolution must be in [1, " +
                               std::to_string(kMaxFieldGridSide) + "]");
  }
}

std::vector<FieldGridRow> FieldGrid(const ParametricPath& path,
                                    const GuidanceGains& gains,
                                    const FieldGridSpec& spec) {
  ValidateFieldGridSpec(spec);
  const PathSample sample = SamplePath(path, spec.w);
  std::vector<FieldGridRow> rows;
  rows.reserve(static_cast<size_t>(spec.nx) * spec.ny);
  for (int j = 0; j < spec.ny; ++j) {
    const double y = Coordinate(spec.bbox.y_min, spec.bbox.y_max, j, spec.ny);
    for (int i = 0; i < spec.nx; ++i) {
      const double x = Coordinate(spec.bbox.x_min, spec.bbox.x_max, i, spec.nx);
      const Vec2 chi_p = AugmentedVector({x, y}, sample, gains).head<2>();
      const double norm = chi_p.norm();
      FieldGridRow row{x, y, 0.0, 0.0};
      if (norm > kFieldEpsilon) {
        row.chi_hat_x = chi_p.x() / norm;
        row.chi_hat_y = chi_p.y() / norm;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

std::string FieldGridCsv(const std::vector<FieldGridRow>& rows) {
  fmt::memory_buffer out;
  fmt::format_to(std::back_inserter(out), "x,y,chi_hat_x,chi_hat_y\n");
  for (const auto& r : rows) {
    fmt::format_to(std::back_inserter(out), "{},{},{},{}\n", r.x, r.y,
                   r.chi_hat_x, r.chi_hat_y);
  }
  return fmt::to_string(out);
}

BoundingBox ParseBoundingBox(const std::string& text) {
  const auto v = SplitNumbers(text);
  if (v.size() != 4) {
    throw InvalidArgumentError("bbox must be xmin,ymin,xmax,ymax");
  }
  return {v[0], v[1], v[2], v[3]};
}

void ParseResolution(const std::string& text, int* nx, int* ny) {
  const auto v = SplitNumbers(text);
  if (v.size() != 2 || v[0] != std::floor(v[0]) || v[1] != std::floor(v[1]) ||
      v[0] < 1 || v[1] < 1 || v[0] > kMaxFieldGridSide ||
      v[1] > kMaxFieldGridSide) {
    throw InvalidArgumentError("res must be nx,ny with positive integers");
  }
  *nx = static_cast<int>(v[0]);
  *ny = static_cast<int>(v[1]);
}

}  // namespace gvfnav
