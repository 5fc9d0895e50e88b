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

#include <filesystem>

#include <gtest/gtest.h>

#include "gvfnav/errors.h"
#include "oracles.h"

namespace gvfnav {
namespace {

using nlohmann::json;

bool HasIssueAt(const ValidationError& e, const std::string& path) {
  for (const auto& i : e.issues()) {
    if (i.path == path) return true;
  }
  return false;
}

TEST(SplineIo, LoadsBundledExperiments) {
  for (const char* name :
       {"first_experiment.json", "second_experiment.json", "figure_eight.json"}) {
    SCOPED_TRACE(name);
    const auto loaded = LoadSplineFile(testing::ConfigPath(name));
    EXPECT_EQ(loaded.spline.degree(), 5);
    EXPECT_EQ(loaded.spline.num_segments(), 3);
    EXPECT_EQ(loaded.spline.continuity(), Continuity::kC2);
  }
}

TEST(SplineIo, FirstExperimentWarnsAboutRoundedJoints) {
  const auto loaded = LoadSplineFile(testing::ConfigPath("first_experiment.json"));
  ASSERT_FALSE(loaded.warnings.empty());
  bool joint_warning = false;
  for (const auto& w : loaded.warnings) {
    if (w.path == "/segments/2/points/0") joint_warning = true;
  }
  EXPECT_TRUE(joint_warning);
}

TEST(SplineIo, SecondExperimentFlagsListedBeta21) {
  const auto loaded = LoadSplineFile(testing::ConfigPath("second_experiment.json"));
  bool flagged = false;
  for (const auto& w : loaded.warnings) {
    if (w.path == "/segments/1/points/2") flagged = true;
  }
  EXPECT_TRUE(flagged);
  // The recurrence value differs in the sign of y from the listed one.
  EXPECT_GT(loaded.spline.point({1, 2}).y(), 0.0);
}

TEST(SplineIo, FigureEightHasNoRepairs) {
  EXPECT_TRUE(LoadSplineFile(testing::ConfigPath("figure_eight.json")).warnings.empty());
}

TEST(SplineIo, RoundTripIsExact) {
  const auto spline = LoadSplineFile(testing::ConfigPath("first_experiment.json")).spline;
  const auto again = SplineFromJson(json::parse(SplineToJson(spline).dump()));
  EXPECT_EQ(again.spline, spline);
  EXPECT_TRUE(again.warnings.empty());

  const std::string path = testing::TempDir("spline_io") + "/s.json";
  SaveSplineFile(spline, path);
  EXPECT_EQ(LoadSplineFile(path).spline, spline);
}

TEST(SplineIo, FreePointForm) {
  const auto spline = LoadSplineFile(testing::ConfigPath("first_experiment.json")).spline;
  json doc = {{"degree", 5}, {"continuity", "C2"}, {"num_segments", 3}};
  doc["free_points"] = json::array();
  for (const auto& p : ConfigurablePointValues(spline)) {
    doc["free_points"].push_back(PointToJson(p));
  }
  EXPECT_EQ(SplineFromJson(doc).spline, spline);
  doc["free_points"].erase(0);
  EXPECT_THROW(SplineFromJson(doc), ValidationError);
}

TEST(SplineIo, ArraySegmentsAndInferredDegree) {
  const json doc = {{"segments", {{{0, 0}, {1, 1}, {2, 0}, {3, 1}}}},
                    {"continuity", "c1"}};
  const auto loaded = SplineFromJson(doc);
  EXPECT_EQ(loaded.spline.degree(), 3);
  EXPECT_EQ(loaded.spline.continuity(), Continuity::kC1);
}

TEST(SplineIo, StructuralErrorsCarryPaths) {
  try {
    SplineFromJson(json{{"degree", 5},
                        {"continuity", "C9"},
                        {"segments", {{{"points", {{0, 0}, {1, "x"}}}}}}});
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_TRUE(HasIssueAt(e, "/continuity"));
    EXPECT_TRUE(HasIssueAt(e, "/segments/0/points"));
  }
  try {
    SplineFromJson(json{{"segments", {{{0, 0}, {1, 1}}, {{1, 1}, {2, 2}, {3, 3}}}}});
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_TRUE(HasIssueAt(e, "/segments/1/points"));
  }
  EXPECT_THROW(SplineFromJson(json::array()), ValidationError);
  EXPECT_THROW(SplineFromJson(json{{"segments", json::array()}}), ValidationError);
  // Two cubic segments cannot be C2 with free shaping points.
  EXPECT_THROW(SplineFromJson(json{{"segments",
                                    {{{0, 0}, {1, 1}, {2, 0}, {3, 1}},
                                     {{3, 1}, {4, 2}, {5, 0}, {6, 1}}}}}),
               ValidationError);
}

TEST(SplineIo, MissingFileAndBadJson) {
  EXPECT_THROW(LoadSplineFile("/nonexistent/spline.json"), NotFoundError);
  EXPECT_THROW(ParseJsonText("{", "inline"), ConfigurationError);
}

TEST(SplineIo, NonFinitePointRejected) {
  std::vector<FieldIssue> issues;
  PointFromJson(json::array({1.0, "a"}), "/p", &issues);
  PointFromJson(json::array({1.0}), "/q", &issues);
  ASSERT_EQ(issues.size(), 2u);
  EXPECT_EQ(issues[0].path, "/p");
}

}  // namespace
}  // namespace gvfnav
