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

#include <sstream>

#include <gtest/gtest.h>

#include "gvfnav/errors.h"
#include "gvfnav/spline_io.h"
#include "oracles.h"

namespace gvfnav {
namespace {

TEST(FieldGrid, RowOrderAndUnitVectors) {
  const auto spline = LoadSplineFile(testing::ConfigPath("first_experiment.json")).spline;
  FieldGridSpec spec{{-10, 0, 70, 60}, 5, 4, 0.5};
  const auto rows = FieldGrid(spline, GuidanceGains{}, spec);
  ASSERT_EQ(rows.size(), 20u);
  EXPECT_DOUBLE_EQ(rows[0].x, -10);
  EXPECT_DOUBLE_EQ(rows[0].y, 0);
  EXPECT_DOUBLE_EQ(rows[1].x, 10);  // x varies fastest
  EXPECT_DOUBLE_EQ(rows[4].x, 70);
  EXPECT_DOUBLE_EQ(rows[5].y, 20);
  EXPECT_DOUBLE_EQ(rows[19].y, 60);
  for (const auto& r : rows) {
    EXPECT_NEAR(std::hypot(r.chi_hat_x, r.chi_hat_y), 1.0, 1e-12);
    const FieldEval f = AugmentedField({{r.x, r.y}, 0.5}, spline, GuidanceGains{});
    EXPECT_DOUBLE_EQ(r.chi_hat_x, f.chi_p_hat.x());
    EXPECT_DOUBLE_EQ(r.chi_hat_y, f.chi_p_hat.y());
  }
}

TEST(FieldGrid, SingleSampleSitsAtMinimum) {
  const testing::LinePath line({0, 0}, {1, 0}, 4.0);
  const auto rows = FieldGrid(line, GuidanceGains{}, {{1, 2, 3, 4}, 1, 1, 0.0});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].x, 1);
  EXPECT_EQ(rows[0].y, 2);
}

TEST(FieldGrid, DegeneratePointReportsZero) {
  const testing::LinePath line({0, 0}, {1, 0}, 4.0);
  // chi_p vanishes at p = f(1) + f'(1)/k = (3, 0).
  const auto rows = FieldGrid(line, GuidanceGains{}, {{3, 0, 4, 1}, 2, 2, 1.0});
  EXPECT_EQ(rows[0].chi_hat_x, 0.0);
  EXPECT_EQ(rows[0].chi_hat_y, 0.0);
}

TEST(FieldGrid, InvalidSpecs) {
  const testing::LinePath line({0, 0}, {1, 0}, 4.0);
  EXPECT_THROW(FieldGrid(line, {}, {{0, 0, 0, 1}, 2, 2, 0}), InvalidArgumentError);
  EXPECT_THROW(FieldGrid(line, {}, {{0, 0, 1, 1}, 0, 2, 0}), InvalidArgumentError);
  EXPECT_THROW(FieldGrid(line, {}, {{0, 0, 1, 1}, 2, kMaxFieldGridSide + 1, 0}),
               InvalidArgumentError);
  EXPECT_THROW(FieldGrid(line, {}, {{0, 0, 1, 1}, 2, 2, NAN}), InvalidArgumentError);
}

TEST(FieldGridCsv, HeaderAndRoundTripFormatting) {
  const std::vector<FieldGridRow> rows = {{0.1, -2.0, 0.6, 0.8}, {1e-7, 3.0, 1.0, 0.0}};
  const std::string csv = FieldGridCsv(rows);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x,y,chi_hat_x,chi_hat_y");
  std::getline(in, line);
  EXPECT_EQ(line, "0.1,-2,0.6,0.8");
  std::getline(in, line);
  EXPECT_EQ(line, "1e-07,3,1,0");
}

TEST(FieldGridParse, BoundingBoxAndResolution) {
  const BoundingBox b = ParseBoundingBox("-1.5,2,3,4.25");
  EXPECT_EQ(b.x_min, -1.5);
  EXPECT_EQ(b.y_max, 4.25);
  int nx = 0, ny = 0;
  ParseResolution("30,20", &nx, &ny);
  EXPECT_EQ(nx, 30);
  EXPECT_EQ(ny, 20);
  EXPECT_THROW(ParseBoundingBox("1,2,3"), InvalidArgumentError);
  EXPECT_THROW(ParseBoundingBox("1,2,3,x"), InvalidArgumentError);
  EXPECT_THROW(ParseResolution("3.5,2", &nx, &ny), InvalidArgumentError);
}

}  // namespace
}  // namespace gvfnav
