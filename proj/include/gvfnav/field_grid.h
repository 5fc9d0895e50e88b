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

// Sampled unit field chi_p_hat over a rectangular grid, for arrow overlays.

#ifndef GVFNAV_FIELD_GRID_H_
#define GVFNAV_FIELD_GRID_H_

#include <string>
#include <vector>

#include "gvfnav/gvf.h"

namespace gvfnav {

struct BoundingBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;
};

struct FieldGridSpec {
  BoundingBox bbox;
  int nx = 2;
  int ny = 2;
  double w = 0.0;
};

struct FieldGridRow {
  double x = 0.0;
  double y = 0.0;
  double chi_hat_x = 0.0;
  double chi_hat_y = 0.0;
};

inline constexpr int kMaxFieldGridSide = 1000;

// InvalidArgumentError for an empty box, nx or ny outside
// [1, kMaxFieldGridSide], or non-finite values.
void ValidateFieldGridSpec(const FieldGridSpec& spec);

// Rows in y-major order (x varies fastest). A side of one sample sits at the
// box minimum. Points where the planar field degenerates get (0, 0).
std::vector<FieldGridRow> FieldGrid(const ParametricPath& path,
                                    const GuidanceGains& gains,
                                    const FieldGridSpec& spec);

// "x,y,chi_hat_x,chi_hat_y" header plus one line per row, shortest
// round-trip decimal formatting.
std::string FieldGridCsv(const std::vector<FieldGridRow>& rows);

// Parses "xmin,ymin,xmax,ymax" and "nx,ny". InvalidArgumentError on failure.
BoundingBox ParseBoundingBox(const std::string& text);
void ParseResolution(const std::string& text, int* nx, int* ny);

}  // namespace gvfnav

#endif  // GVFNAV_FIELD_GRID_H_
