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

#include "gvfnav/gcs/session.h"

#include <atomic>
#include <string>
#include <thread>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.h"

namespace gvfnav::gcs {
namespace {

using nlohmann::json;

Scenario PaperSim(double duration = 20.0) {
  Scenario s = LoadScenarioFile(testing::ConfigPath("paper_sim.json"));
  s.duration = duration;
  return s;
}

std::vector<json> Messages(Subscriber& sub) {
  std::vector<json> out;
  for (const std::string& text : sub.Drain()) out.push_back(json::parse(text));
  return out;
}

EditCommand Kind(EditKind kind) {
  EditCommand e;
  e.kind = kind;
  return e;
}

EditCommand Move(const BezierSpline& spline, const PointIndex& index,
                 const Vec2& offset) {
  EditCommand e = Kind(EditKind::kMoveFreePoint);
  e.moves.push_back({index, spline.point(index) + offset});
  return e;
}

std::vector<PointIndex> FreeControlPoints(const BezierSpline& spline) {
  std::vector<PointIndex> out;
  for (const auto& p : spline.ConfigurablePoints()) {
    if (p.role == PointRole::kFreeControl) out.push_back(p.point);
  }
  return out;
}

TEST(SubscriberTest, GapMarkerAfterOverflow) {
  Subscriber sub(2);
  sub.Push("a");
  sub.Push("b");
  sub.Push("c");
  sub.Push("d");
  EXPECT_EQ(sub.total_dropped(), 2);
  EXPECT_EQ(*sub.TryPop(), "a");
  EXPECT_EQ(*sub.TryPop(), "b");
  sub.Push("e");
  const json gap = json::parse(*sub.TryPop());
  EXPECT_EQ(gap["type"], "gap");
  EXPECT_EQ(gap["dropped"], 2);
  EXPECT_EQ(*sub.TryPop(), "e");
  EXPECT_FALSE(sub.TryPop().has_value());
}

TEST(SubscriberTest, CloseWakesWaiters) {
  Subscriber sub;
  std::thread closer([&] {
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
    sub.Close();
  });
  EXPECT_FALSE(sub.WaitPop(5000).has_value());
  closer.join();
  sub.Push("late");
  EXPECT_EQ(sub.size(), 0u);
}

TEST(SessionTest, SnapshotThenOrderedRecords) {
  Session session("t1", PaperSim());
  auto a = session.Subscribe();
  auto b = session.Subscribe();
  EXPECT_EQ(session.Advance(10), 10);
  const auto ma = Messages(*a);
  const auto mb = Messages(*b);
  ASSERT_EQ(ma.size(), 11u);
  EXPECT_EQ(ma[0]["type"], "snapshot");
  EXPECT_EQ(ma[0]["step"], 0);
  EXPECT_EQ(ma[0]["mode"], "paused");
  for (int i = 1; i <= 10; ++i) {
    EXPECT_EQ(ma[i]["type"], "record");
    EXPECT_EQ(ma[i]["record"]["step"], i - 1);
    EXPECT_EQ(ma[i]["points"], ma[0]["points"]);
  }
  EXPECT_EQ(ma, mb);
}

TEST(SessionTest, LateSubscriberStartsFromCurrentState) {
  Session session("t1", PaperSim());
  session.Advance(5);
  auto sub = session.Subscribe();
  session.Advance(1);
  const auto m = Messages(*sub);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[0]["step"], 5);
  EXPECT_EQ(m[0]["last_record"]["step"], 4);
  EXPECT_EQ(m[1]["record"]["step"], 5);
}

TEST(SessionTest, LockedPointIsRejectedWithExplanation) {
  Session session("t1", PaperSim());
  EditCommand e = Kind(EditKind::kMoveFreePoint);
  e.moves.push_back({{1, 1}, Vec2(0.0, 0.0)});
  try {
    session.ApplyEdit(e);
    FAIL() << "expected rejection";
  } catch (const InvalidArgumentError& err) {
    EXPECT_NE(std::string(err.what()).find("recurrence"), std::string::npos)
        << err.what();
  }
  EXPECT_TRUE(session.edit_log().empty());
  EXPECT_EQ(session.spline_recomputations(), 0);
}

TEST(SessionTest, BatchedMovesRecomputeOnce) {
  Session session("t1", PaperSim());
  const BezierSpline spline = *session.initial_scenario().spline;
  const auto free = FreeControlPoints(spline);
  ASSERT_GE(free.size(), 3u);
  for (int i = 0; i < 3; ++i) {
    session.ApplyEdit(Move(spline, free[i], Vec2(0.2 * (i + 1), 0.0)));
  }
  session.Advance(1);
  EXPECT_EQ(session.spline_recomputations(), 1);
  ASSERT_EQ(session.edit_log().size(), 1u);
  EXPECT_EQ(session.edit_log()[0].commands.size(), 3u);
  EXPECT_EQ(session.edit_log()[0].step, 0);
  const json snap = session.Snapshot();
  EXPECT_EQ(snap["spline_recomputations"], 1);
}

TEST(SessionTest, ReplayIsBitIdentical) {
  auto scenario = PaperSim(10.0);
  scenario.noise = {NoiseKind::kUniformDisk, 1.0, 0.0};
  Session session("t1", scenario);
  const BezierSpline spline = *scenario.spline;
  const auto free = FreeControlPoints(spline);
  session.Advance(100);
  session.ApplyEdit(Move(spline, free[0], Vec2(1.0, 0.5)));
  session.ApplyEdit(Move(spline, free[1], Vec2(-0.5, 0.0)));
  session.Advance(50);
  EditCommand gains = Kind(EditKind::kSetGuidanceGains);
  gains.guidance.k_theta = 2.0;
  session.ApplyEdit(gains);
  session.ApplyEdit(Kind(EditKind::kPause));
  EditCommand noise = Kind(EditKind::kSetNoise);
  noise.noise.bound = 3.0;
  session.ApplyEdit(noise);
  session.Advance(200);
  EditCommand speed = Kind(EditKind::kSetSpeedParams);
  speed.setpoint.v_max = 2.0;
  session.ApplyEdit(speed);
  session.Advance(150);

  const SimLog live = session.log();
  ASSERT_EQ(live.records.size(), 500u);
  const auto entries = session.edit_log();
  const SimLog replayed = ReplayEdits(scenario, entries, 500);
  EXPECT_TRUE(replayed.records == live.records);

  // The edit log survives its JSON form.
  const auto parsed = EditLogFromJson(EditLogToJson(entries));
  EXPECT_TRUE(ReplayEdits(scenario, parsed, 500).records == live.records);
}

TEST(SessionTest, EditLogJsonValidation) {
  EXPECT_THROW(EditLogFromJson(json::parse(R"({"edits": [
      {"step": 5, "commands": [{"kind": "pause"}]},
      {"step": 3, "commands": [{"kind": "resume"}]}]})")),
               ValidationError);
  try {
    EditLogFromJson(json::parse(
        R"({"edits": [{"step": 1, "commands": [{"kind": "warp"}]}]})"));
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.issues().front().path, "/edits/0/commands/0/kind");
  }
}

TEST(SessionTest, FieldMatchesFieldGrid) {
  Session session("t1", PaperSim());
  session.Advance(20);
  FieldRequest req;
  req.bbox = {-40.0, -30.0, 40.0, 30.0};
  req.nx = 7;
  req.ny = 5;
  const auto rows = session.Field(req);
  const Scenario s = session.initial_scenario();
  const auto expected =
      FieldGrid(*s.spline, s.guidance,
                {req.bbox, req.nx, req.ny, session.Snapshot()["w"].get<double>()});
  ASSERT_EQ(rows.size(), expected.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].x, expected[i].x);
    EXPECT_EQ(rows[i].chi_hat_x, expected[i].chi_hat_x);
    EXPECT_EQ(rows[i].chi_hat_y, expected[i].chi_hat_y);
  }
  req.w = 1.25;
  const json msg = session.FieldMessage(req);
  EXPECT_EQ(msg["type"], "field");
  EXPECT_EQ(msg["rows"].size(), 35u);
  EXPECT_DOUBLE_EQ(msg["w"].get<double>(), 1.25);
}

TEST(SessionTest, FieldUsesEditedGains) {
  Session session("t1", PaperSim());
  EditCommand gains = Kind(EditKind::kSetGuidanceGains);
  gains.guidance.k1 = 2.0;
  gains.guidance.k2 = 2.0;
  session.ApplyEdit(gains);
  FieldRequest req;
  req.bbox = {-10.0, -10.0, 10.0, 10.0};
  req.nx = req.ny = 3;
  req.w = 0.5;
  GuidanceGains g = session.initial_scenario().guidance;
  g.k1 = g.k2 = 2.0;
  const auto expected = FieldGrid(*session.initial_scenario().spline, g,
                                  {req.bbox, 3, 3, 0.5});
  const auto rows = session.Field(req);
  for (size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].chi_hat_x, expected[i].chi_hat_x);
  }
}

TEST(SessionTest, PacingFollowsWallClock) {
  Session session("t1", PaperSim());
  EXPECT_EQ(session.Tick(1.0), 0);  // paused
  session.ApplyEdit(Kind(EditKind::kResume));
  EXPECT_EQ(session.mode(), RunMode::kRunning);
  EXPECT_EQ(session.Tick(0.1), 10);
  EXPECT_EQ(session.Tick(0.005), 0);
  EXPECT_EQ(session.Tick(0.005), 1);
  // A stall is capped at max_steps_per_tick.
  EXPECT_EQ(session.Tick(10.0), kDefaultMaxStepsPerTick);
  EditCommand pace = Kind(EditKind::kSetPace);
  pace.pace = 3.0;
  session.ApplyEdit(pace);
  EXPECT_EQ(session.Tick(0.1), 30);
  EXPECT_DOUBLE_EQ(session.pace(), 3.0);
  session.ApplyEdit(Kind(EditKind::kPause));
  EXPECT_EQ(session.Tick(1.0), 0);
}

TEST(SessionTest, RunnerAdvancesInBackground) {
  Session session("t1", PaperSim());
  session.ApplyEdit(Kind(EditKind::kResume));
  session.StartRunner(5);
  const auto deadline =
      std::chrono::steady_clock::now() + std::chrono::seconds(5);
  while (session.step_count() < 10 && std::chrono::steady_clock::now() < deadline) {
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  session.StopRunner();
  EXPECT_GE(session.step_count(), 10);
}

TEST(SessionTest, ResetRestoresInitialState) {
  Session session("t1", PaperSim());
  auto sub = session.Subscribe();
  session.Advance(30);
  session.ApplyEdit(Move(*session.initial_scenario().spline,
                         FreeControlPoints(*session.initial_scenario().spline)[0],
                         Vec2(1.0, 1.0)));
  session.Advance(1);
  sub->Drain();
  session.ApplyEdit(Kind(EditKind::kReset));
  EXPECT_EQ(session.step_count(), 0);
  EXPECT_TRUE(session.edit_log().empty());
  EXPECT_EQ(session.mode(), RunMode::kPaused);
  const auto m = Messages(*sub);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0]["type"], "snapshot");
  EXPECT_EQ(m[0]["reset"], true);
  EXPECT_EQ(m[0]["spline_recomputations"], 0);
}

TEST(SessionTest, FinishedSessionRejectsEditsExceptReset) {
  Session session("t1", PaperSim(0.05));
  auto sub = session.Subscribe();
  EXPECT_EQ(session.Advance(100), 5);
  EXPECT_EQ(session.mode(), RunMode::kFinished);
  const auto m = Messages(*sub);
  EXPECT_EQ(m.back()["type"], "event");
  EXPECT_EQ(m.back()["event"], "finished");
  EXPECT_THROW(session.ApplyEdit(Kind(EditKind::kResume)), StateError);
  EXPECT_EQ(session.Advance(1), 0);
  session.ApplyEdit(Kind(EditKind::kReset));
  EXPECT_EQ(session.mode(), RunMode::kPaused);
}

TEST(SessionTest, InvalidPatchIsRejectedAtEnqueue) {
  Session session("t1", PaperSim());
  EditCommand gains = Kind(EditKind::kSetGuidanceGains);
  gains.guidance.k_theta = -1.0;
  EXPECT_THROW(session.ApplyEdit(gains), InvalidArgumentError);
  EditCommand speed = Kind(EditKind::kSetSpeedParams);
  EXPECT_THROW(session.ApplyEdit(speed), InvalidArgumentError);
  EXPECT_EQ(session.Info()["queued_edits"], 0);
}

TEST(SessionTest, AckReportsEffectiveStep) {
  Session session("t1", PaperSim());
  session.Advance(7);
  EditCommand gains = Kind(EditKind::kSetGuidanceGains);
  gains.guidance.k_theta = 2.0;
  const EditAck ack = session.ApplyEdit(gains);
  EXPECT_EQ(ack.effective_step, 7);
  const json j = ack.ToJson();
  EXPECT_EQ(j["type"], "ack");
  EXPECT_EQ(j["kind"], "set_guidance_gains");
  session.Advance(1);
  EXPECT_EQ(session.log().records[7].event, "set_guidance_gains");
}

TEST(SessionTest, ConcurrentProducersAndConsumers) {
  Session session("t1", PaperSim(60.0));
  auto sub = session.Subscribe(1 << 16);
  const BezierSpline spline = *session.initial_scenario().spline;
  const auto free = FreeControlPoints(spline);
  std::atomic<bool> stop{false};
  std::vector<std::thread> producers;
  for (int t = 0; t < 3; ++t) {
    producers.emplace_back([&, t] {
      for (int i = 0; i < 50 && !stop; ++i) {
        session.ApplyEdit(
            Move(spline, free[t % free.size()], Vec2(0.01 * i, 0.0)));
        std::this_thread::sleep_for(std::chrono::microseconds(200));
      }
    });
  }
  for (int i = 0; i < 200; ++i) session.Advance(5);
  stop = true;
  for (auto& p : producers) p.join();
  session.Advance(1);
  const auto m = Messages(*sub);
  std::int64_t expect = 0;
  for (const auto& msg : m) {
    if (msg["type"] == "record") {
      EXPECT_EQ(msg["record"]["step"], expect);
      ++expect;
    }
  }
  EXPECT_EQ(expect, 1001);
  const SimLog replayed =
      ReplayEdits(session.initial_scenario(), session.edit_log(), 1001);
  EXPECT_TRUE(replayed.records == session.log().records);
}

TEST(SessionManagerTest, IssuesIdsAndRemoves) {
  SessionManager manager;
  auto a = manager.Create(PaperSim(), false);
  auto b = manager.Create(PaperSim(), false);
  EXPECT_EQ(a->id(), "s1");
  EXPECT_EQ(b->id(), "s2");
  EXPECT_EQ(manager.Get("s2"), b);
  EXPECT_EQ(manager.List().size(), 2u);
  auto sub = a->Subscribe();
  manager.Remove("s1");
  EXPECT_THROW(manager.Get("s1"), NotFoundError);
  EXPECT_TRUE(sub->closed());
  manager.Clear();
  EXPECT_TRUE(manager.List().empty());
}

}  // namespace
}  // namespace gvfnav::gcs
