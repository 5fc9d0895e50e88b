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
#include <limits>
#include <stdexcept>
#include <string>

#include <gtest/gtest.h>

#include "gvfnav/scenario.h"
#include "oracles.h"

namespace gvfnav::gcs {
namespace {

using nlohmann::json;

std::string FirstIssuePath(const json& doc) {
  try {
    EditFromJson(doc);
  } catch (const ValidationError& e) {
    return e.issues().empty() ? "<none>" : e.issues().front().path;
  }
  return "<accepted>";
}

TEST(WireTest, EditKindNames) {
  for (EditKind k :
       {EditKind::kMoveFreePoint, EditKind::kSetGuidanceGains,
        EditKind::kSetSpeedParams, EditKind::kPause, EditKind::kResume,
        EditKind::kReset, EditKind::kSetNoise, EditKind::kSetPace}) {
    EXPECT_EQ(ParseEditKind(ToString(k)), k);
  }
  EXPECT_THROW(ParseEditKind("teleport"), ConfigurationError);
}

TEST(WireTest, SingleMove) {
  const EditCommand e = EditFromJson(
      {{"kind", "move_free_point"}, {"segment", 0}, {"index", 2}, {"x", 1.5},
       {"y", -3.0}});
  ASSERT_EQ(e.moves.size(), 1u);
  EXPECT_EQ(e.moves[0].index, (PointIndex{0, 2}));
  EXPECT_EQ(e.moves[0].position, Vec2(1.5, -3.0));
}

TEST(WireTest, MoveBatch) {
  const EditCommand e = EditFromJson(json::parse(R"({
    "kind": "move_free_point",
    "moves": [{"segment": 0, "index": 1, "x": 1, "y": 2},
              {"segment": 2, "index": 4, "x": 3, "y": 4}]})"));
  ASSERT_EQ(e.moves.size(), 2u);
  EXPECT_EQ(e.moves[1].index, (PointIndex{2, 4}));
  EXPECT_EQ(FirstIssuePath(json::parse(R"({"kind": "move_free_point",
    "moves": [{"segment": 0, "index": 1, "x": 1, "y": 2},
              {"segment": 0, "index": 1, "x": "far", "y": 2}]})")),
            "/moves/1/x");
  EXPECT_EQ(FirstIssuePath({{"kind", "move_free_point"}, {"moves", json::array()}}),
            "/moves");
}

TEST(WireTest, GainsPatch) {
  const EditCommand e = EditFromJson(
      {{"kind", "set_guidance_gains"}, {"gains", {{"k_theta", 2.0}}}});
  EXPECT_EQ(e.kind, EditKind::kSetGuidanceGains);
  GuidanceGains base;
  const GuidanceGains g = e.guidance.ApplyTo(base);
  EXPECT_DOUBLE_EQ(g.k_theta, 2.0);
  EXPECT_DOUBLE_EQ(g.k1, base.k1);
  EXPECT_EQ(FirstIssuePath({{"kind", "set_guidance_gains"},
                            {"gains", {{"k1", "big"}}}}),
            "/gains/k1");
  EXPECT_EQ(FirstIssuePath({{"kind", "set_guidance_gains"}}), "/gains");
}

TEST(WireTest, SpeedAndNoisePatches) {
  const EditCommand s = EditFromJson(json::parse(R"({
    "kind": "set_speed_params", "setpoint": {"v_max": 3.0},
    "speed_gains": {"k_p": 100}})"));
  EXPECT_DOUBLE_EQ(*s.setpoint.v_max, 3.0);
  EXPECT_FALSE(s.setpoint.v_min.has_value());
  EXPECT_DOUBLE_EQ(*s.speed_gains.k_p, 100.0);

  const EditCommand n = EditFromJson(json::parse(
      R"({"kind": "set_noise", "noise": {"kind": "uniform_disk", "bound": 5.3}})"));
  const NoiseModel m = n.noise.ApplyTo({});
  EXPECT_EQ(m.kind, NoiseKind::kUniformDisk);
  EXPECT_DOUBLE_EQ(m.bound, 5.3);
  EXPECT_EQ(FirstIssuePath(json::parse(
                R"({"kind": "set_noise", "noise": {"kind": "pink"}})")),
            "/noise/kind");
}

TEST(WireTest, PaceEdit) {
  const EditCommand e = EditFromJson(
      {{"kind", "set_pace"}, {"multiplier", 4.0}, {"max_steps_per_tick", 10}});
  EXPECT_DOUBLE_EQ(*e.pace, 4.0);
  EXPECT_EQ(*e.max_steps_per_tick, 10);
  EXPECT_EQ(FirstIssuePath({{"kind", "set_pace"}, {"multiplier", 0.0}}),
            "/multiplier");
  EXPECT_EQ(FirstIssuePath({{"kind", "set_pace"}, {"max_steps_per_tick", 0}}),
            "/max_steps_per_tick");
  EXPECT_NE(FirstIssuePath({{"kind", "set_pace"}}), "<accepted>");
}

TEST(WireTest, KindErrors) {
  EXPECT_EQ(FirstIssuePath(json::array()), "");
  EXPECT_EQ(FirstIssuePath({{"segment", 0}}), "/kind");
  EXPECT_EQ(FirstIssuePath({{"kind", "teleport"}}), "/kind");
}

TEST(WireTest, EditRoundTrip) {
  const json docs[] = {
      json::parse(R"({"kind": "move_free_point",
        "moves": [{"segment": 1, "index": 3, "x": 0.1, "y": 0.2}]})"),
      json::parse(R"({"kind": "set_guidance_gains",
        "gains": {"k1": 0.7, "direction": -1}})"),
      json::parse(R"({"kind": "set_speed_params", "setpoint": {"c_kappa": 4},
        "speed_gains": {}})"),
      json::parse(R"({"kind": "set_noise",
        "noise": {"kind": "clipped_gaussian", "bound": 1, "sigma": 0.3}})"),
      json::parse(R"({"kind": "set_pace", "multiplier": 2.5})"),
      json::parse(R"({"kind": "pause"})"),
      json::parse(R"({"kind": "reset"})"),
  };
  for (const json& doc : docs) {
    SCOPED_TRACE(doc.dump());
    const json once = EditToJson(EditFromJson(doc));
    EXPECT_EQ(EditToJson(EditFromJson(once)), once);
  }
}

TEST(WireTest, RecordJsonNullsNonFinite) {
  SimRecord r;
  r.step = 3;
  r.t = 0.03;
  r.kappa = std::numeric_limits<double>::quiet_NaN();
  r.throttle_clamped = true;
  r.event = "pause";
  const json j = RecordToJson(r);
  EXPECT_EQ(j["step"], 3);
  EXPECT_DOUBLE_EQ(j["t"].get<double>(), 0.03);
  EXPECT_TRUE(j["kappa"].is_null());
  EXPECT_EQ(j["throttle_clamped"], true);
  EXPECT_EQ(j["event"], "pause");
  EXPECT_EQ(j.size(), SimLogColumns().size());
}

TEST(WireTest, PointRoles) {
  const Scenario s = LoadScenarioFile(testing::ConfigPath("paper_sim.json"));
  const json points = PointRolesToJson(*s.spline);
  const auto& seg = s.spline->segments();
  std::size_t total = 0;
  for (const auto& sg : seg) total += sg.points().size();
  ASSERT_EQ(points.size(), total);
  int locked = 0, configurable = 0;
  for (const auto& p : points) {
    if (p["role"] == "continuity_locked") {
      ++locked;
      EXPECT_EQ(p["global_index"], -1);
    }
    if (p["global_index"].get<int>() >= 0) ++configurable;
  }
  // Degree 5, C2: two locked points per joint.
  EXPECT_EQ(locked, 2 * (s.spline->num_segments() - 1));
  EXPECT_EQ(configurable, static_cast<int>(s.spline->ConfigurablePoints().size()));
}

TEST(WireTest, ErrorJson) {
  const json v = ErrorToJson(ValidationError("/dt", "must be > 0"));
  EXPECT_EQ(v["type"], "error");
  EXPECT_EQ(v["schema_version"], kWireSchemaVersion);
  EXPECT_EQ(v["code"], "validation_error");
  ASSERT_EQ(v["issues"].size(), 1u);
  EXPECT_EQ(v["issues"][0]["path"], "/dt");
  EXPECT_EQ(ErrorToJson(StateError("x"))["code"], "state_error");
  EXPECT_EQ(ErrorToJson(std::runtime_error("x"))["code"], "internal");
}

TEST(WireTest, FieldRows) {
  const json rows = FieldRowsToJson({{1.0, 2.0, 0.6, 0.8}});
  EXPECT_EQ(rows, json::parse("[[1.0, 2.0, 0.6, 0.8]]"));
}

}  // namespace
}  // namespace gvfnav::gcs
