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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <utility>

#include "gvfnav/spline_io.h"

namespace gvfnav::gcs {

using nlohmann::json;

std::string_view ToString(RunMode mode) {
  switch (mode) {
    case RunMode::kPaused:
      return "paused";
    case RunMode::kRunning:
      return "running";
    case RunMode::kFinished:
      return "finished";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Subscriber

Subscriber::Subscriber(std::size_t capacity)
    : capacity_(std::max<std::size_t>(capacity, 2)) {}

void Subscriber::Push(std::string message) {
  std::function<void()> notify;
  {
    std::lock_guard lock(mu_);
    if (closed_) return;
    const std::size_t needed = pending_gap_ > 0 ? 2 : 1;
    if (queue_.size() + needed > capacity_) {
      ++pending_gap_;
      ++total_dropped_;
      return;
    }
    if (pending_gap_ > 0) {
      json gap = Envelope("gap");
      gap["dropped"] = pending_gap_;
      queue_.push_back(gap.dump());
      pending_gap_ = 0;
    }
    queue_.push_back(std::move(message));
    notify = notify_;
  }
  cv_.notify_one();
  if (notify) notify();
}

void Subscriber::set_notify(std::function<void()> notify) {
  std::lock_guard lock(mu_);
  notify_ = std::move(notify);
}

std::optional<std::string> Subscriber::TryPop() {
  std::lock_guard lock(mu_);
  if (queue_.empty()) return std::nullopt;
  std::string front = std::move(queue_.front());
  queue_.pop_front();
  return front;
}

std::optional<std::string> Subscriber::WaitPop(int timeout_ms) {
  std::unique_lock lock(mu_);
  cv_.wait_for(lock, std::chrono::milliseconds(timeout_ms),
               [&] { return !queue_.empty() || closed_; });
  if (queue_.empty()) return std::nullopt;
  std::string front = std::move(queue_.front());
  queue_.pop_front();
  return front;
}

std::vector<std::string> Subscriber::Drain() {
  std::lock_guard lock(mu_);
  std::vector<std::string> out(std::make_move_iterator(queue_.begin()),
                               std::make_move_iterator(queue_.end()));
  queue_.clear();
  return out;
}

std::size_t Subscriber::size() const {
  std::lock_guard lock(mu_);
  return queue_.size();
}

std::int64_t Subscriber::total_dropped() const {
  std::lock_guard lock(mu_);
  return total_dropped_;
}

void Subscriber::Close() {
  std::function<void()> notify;
  {
    std::lock_guard lock(mu_);
    closed_ = true;
    notify = notify_;
  }
  cv_.notify_all();
  if (notify) notify();
}

bool Subscriber::closed() const {
  std::lock_guard lock(mu_);
  return closed_;
}

// ---------------------------------------------------------------------------
// Edit log and replay

json EditLogToJson(std::span<const EditLogEntry> entries) {
  json edits = json::array();
  for (const auto& entry : entries) {
    json commands = json::array();
    for (const auto& c : entry.commands) commands.push_back(EditToJson(c));
    edits.push_back({{"step", entry.step}, {"commands", std::move(commands)}});
  }
  json out = Envelope("edit_log");
  out["edits"] = std::move(edits);
  return out;
}

std::vector<EditLogEntry> EditLogFromJson(const json& doc) {
  if (!doc.is_object() || !doc.contains("edits") || !doc["edits"].is_array()) {
    throw ValidationError("/edits", "must be an array");
  }
  std::vector<EditLogEntry> out;
  std::int64_t previous = 0;
  const auto& edits = doc["edits"];
  for (size_t i = 0; i < edits.size(); ++i) {
    const std::string base = "/edits/" + std::to_string(i);
    const auto& e = edits[i];
    if (!e.is_object() || !e.contains("step") ||
        !e["step"].is_number_integer() || e["step"].get<std::int64_t>() < 0) {
      throw ValidationError(base + "/step", "must be a non-negative integer");
    }
    EditLogEntry entry;
    entry.step = e["step"].get<std::int64_t>();
    if (entry.step < previous) {
      throw ValidationError(base + "/step", "steps must not decrease");
    }
    previous = entry.step;
    if (!e.contains("commands") || !e["commands"].is_array()) {
      throw ValidationError(base + "/commands", "must be an array");
    }
    for (size_t k = 0; k < e["commands"].size(); ++k) {
      try {
        entry.commands.push_back(EditFromJson(e["commands"][k]));
      } catch (const ValidationError& err) {
        std::vector<FieldIssue> issues;
        for (const auto& issue : err.issues()) {
          issues.push_back({base + "/commands/" + std::to_string(k) + issue.path,
                            issue.message});
        }
        throw ValidationError(std::move(issues));
      }
    }
    out.push_back(std::move(entry));
  }
  return out;
}

void ApplyEditBatch(Simulator& sim, std::span<const EditCommand> batch) {
  std::vector<PointMove> moves;
  for (const auto& edit : batch) {
    if (edit.kind == EditKind::kMoveFreePoint) {
      moves.insert(moves.end(), edit.moves.begin(), edit.moves.end());
    }
  }
  if (!moves.empty()) sim.MovePoints(moves);

  const Scenario& current = sim.scenario();
  for (const auto& edit : batch) {
    switch (edit.kind) {
      case EditKind::kMoveFreePoint:
        break;
      case EditKind::kSetGuidanceGains:
        sim.SetGuidanceGains(edit.guidance.ApplyTo(current.guidance));
        break;
      case EditKind::kSetSpeedParams: {
        std::optional<SpeedSetpointParams> setpoint;
        std::optional<SpeedGains> gains;
        if (!edit.setpoint.empty()) {
          setpoint = edit.setpoint.ApplyTo(current.setpoint);
        }
        if (!edit.speed_gains.empty()) {
          gains = edit.speed_gains.ApplyTo(current.speed_gains);
        }
        sim.SetSpeedParams(setpoint, gains);
        break;
      }
      case EditKind::kSetNoise: {
        const NoiseModel model = edit.noise.ApplyTo(current.noise);
        model.Validate();
        sim.SetNoise(model);
        break;
      }
      case EditKind::kPause:
      case EditKind::kResume:
      case EditKind::kSetPace:
      case EditKind::kReset:
        sim.NoteEvent(std::string(ToString(edit.kind)));
        break;
    }
  }
}

SimLog ReplayEdits(const Scenario& scenario,
                   std::span<const EditLogEntry> entries, std::int64_t steps) {
  Simulator sim(scenario);
  std::size_t next = 0;
  while (!sim.finished() && sim.step_count() < steps) {
    while (next < entries.size() && entries[next].step <= sim.step_count()) {
      ApplyEditBatch(sim, entries[next].commands);
      ++next;
    }
    sim.Step();
  }
  return sim.log();
}

json EditAck::ToJson() const {
  json out = Envelope("ack");
  out["kind"] = std::string(gcs::ToString(kind));
  out["effective_step"] = effective_step;
  return out;
}

// ---------------------------------------------------------------------------
// Session

Session::Session(std::string id, Scenario scenario)
    : id_(std::move(id)), initial_(std::move(scenario)) {
  sim_ = std::make_unique<Simulator>(initial_);
  points_ = PointRolesToJson(sim_->spline());
}

Session::~Session() { Close(); }

void Session::CheckEditLocked(const EditCommand& edit) const {
  if (mode_ == RunMode::kFinished && edit.kind != EditKind::kReset) {
    throw StateError("session " + id_ + " is finished; only reset is accepted");
  }
  const Scenario& s = sim_->scenario();
  switch (edit.kind) {
    case EditKind::kMoveFreePoint:
      if (edit.moves.empty()) {
        throw InvalidArgumentError("move_free_point needs at least one move");
      }
      // Throws with the lock explanation for continuity-locked points.
      (void)gvfnav::MovePoints(sim_->spline(), edit.moves);
      break;
    case EditKind::kSetGuidanceGains:
      edit.guidance.ApplyTo(s.guidance).Validate();
      break;
    case EditKind::kSetSpeedParams:
      if (edit.setpoint.empty() && edit.speed_gains.empty()) {
        throw InvalidArgumentError(
            "set_speed_params needs setpoint or speed_gains");
      }
      if (!edit.setpoint.empty()) edit.setpoint.ApplyTo(s.setpoint).Validate();
      if (!edit.speed_gains.empty()) {
        edit.speed_gains.ApplyTo(s.speed_gains).Validate();
      }
      break;
    case EditKind::kSetNoise:
      edit.noise.ApplyTo(s.noise).Validate();
      break;
    case EditKind::kSetPace:
      if (edit.pace && !(*edit.pace > 0.0 && std::isfinite(*edit.pace))) {
        throw InvalidArgumentError("pace multiplier must be > 0");
      }
      if (edit.max_steps_per_tick && *edit.max_steps_per_tick < 1) {
        throw InvalidArgumentError("max_steps_per_tick must be >= 1");
      }
      break;
    case EditKind::kPause:
    case EditKind::kResume:
    case EditKind::kReset:
      break;
  }
}

EditAck Session::ApplyEdit(const EditCommand& edit) {
  std::lock_guard lock(mu_);
  CheckEditLocked(edit);
  switch (edit.kind) {
    case EditKind::kPause:
    case EditKind::kResume:
    case EditKind::kSetPace:
    case EditKind::kReset:
      ImmediateLocked(edit);
      break;
    default:
      queue_.push_back(edit);
      break;
  }
  return {edit.kind, sim_->step_count()};
}

void Session::ImmediateLocked(const EditCommand& edit) {
  if (edit.kind == EditKind::kReset) {
    ResetLocked();
    return;
  }
  // Earlier queued edits go first so the log keeps submission order.
  DrainLocked();
  if (edit.kind == EditKind::kResume && mode_ == RunMode::kPaused) {
    mode_ = RunMode::kRunning;
    step_budget_ = 0.0;
  } else if (edit.kind == EditKind::kPause && mode_ == RunMode::kRunning) {
    mode_ = RunMode::kPaused;
  } else if (edit.kind == EditKind::kSetPace) {
    if (edit.pace) pace_ = *edit.pace;
    if (edit.max_steps_per_tick) max_steps_per_tick_ = *edit.max_steps_per_tick;
  }
  const EditCommand single[] = {edit};
  ApplyEditBatch(*sim_, single);
  edit_log_.push_back({sim_->step_count(), {edit}});

  json event = Envelope("event");
  event["session"] = id_;
  event["event"] = std::string(ToString(edit.kind));
  event["step"] = sim_->step_count();
  event["mode"] = std::string(ToString(mode_));
  event["pace"] = pace_;
  event["max_steps_per_tick"] = max_steps_per_tick_;
  BroadcastLocked(event);
}

void Session::ResetLocked() {
  sim_ = std::make_unique<Simulator>(initial_);
  points_ = PointRolesToJson(sim_->spline());
  queue_.clear();
  edit_log_.clear();
  mode_ = RunMode::kPaused;
  step_budget_ = 0.0;
  json snapshot = SnapshotLocked();
  snapshot["reset"] = true;
  BroadcastLocked(snapshot);
}

void Session::DrainLocked() {
  std::size_t i = 0;
  while (i < queue_.size()) {
    std::size_t end = i + 1;
    if (queue_[i].kind == EditKind::kMoveFreePoint) {
      while (end < queue_.size() &&
             queue_[end].kind == EditKind::kMoveFreePoint) {
        ++end;
      }
    }
    std::vector<EditCommand> batch(queue_.begin() + i, queue_.begin() + end);
    try {
      ApplyEditBatch(*sim_, batch);
      if (batch.front().kind == EditKind::kMoveFreePoint) {
        points_ = PointRolesToJson(sim_->spline());
      }
      edit_log_.push_back({sim_->step_count(), std::move(batch)});
    } catch (const std::exception& e) {
      // Queued edits were valid alone; a combination can still fail.
      json error = ErrorToJson(e);
      error["session"] = id_;
      error["edit"] = EditToJson(batch.front());
      BroadcastLocked(error);
    }
    i = end;
  }
  queue_.clear();
}

std::int64_t Session::StepLocked(std::int64_t max_steps) {
  std::int64_t taken = 0;
  while (taken < max_steps && !sim_->finished()) {
    const SimRecord& record = sim_->Step();
    ++taken;
    if (!subscribers_.empty()) {
      json message = Envelope("record");
      message["session"] = id_;
      message["record"] = RecordToJson(record);
      message["points"] = points_;
      BroadcastLocked(message);
    }
  }
  if (sim_->finished() && mode_ != RunMode::kFinished) {
    mode_ = RunMode::kFinished;
    json event = Envelope("event");
    event["session"] = id_;
    event["event"] = "finished";
    event["step"] = sim_->step_count();
    event["mode"] = std::string(ToString(mode_));
    if (sim_->abort_reason()) event["abort_reason"] = *sim_->abort_reason();
    BroadcastLocked(event);
  }
  return taken;
}

std::int64_t Session::Advance(std::int64_t max_steps) {
  std::lock_guard lock(mu_);
  DrainLocked();
  return StepLocked(max_steps);
}

std::int64_t Session::Tick(double wall_seconds) {
  std::lock_guard lock(mu_);
  DrainLocked();
  if (mode_ != RunMode::kRunning) return 0;
  step_budget_ += std::max(0.0, wall_seconds) * pace_ / sim_->scenario().dt;
  // Never bank more than one tick of work after a stall.
  step_budget_ = std::min(step_budget_, static_cast<double>(max_steps_per_tick_));
  const auto steps = static_cast<std::int64_t>(std::floor(step_budget_));
  step_budget_ -= static_cast<double>(steps);
  return StepLocked(steps);
}

void Session::StartRunner(int period_ms) {
  std::lock_guard lock(runner_mu_);
  if (runner_.joinable()) return;
  runner_stop_ = false;
  runner_ = std::thread([this, period_ms] {
    using Clock = std::chrono::steady_clock;
    auto last = Clock::now();
    std::unique_lock lock(runner_mu_);
    while (!runner_stop_) {
      runner_cv_.wait_for(lock, std::chrono::milliseconds(period_ms),
                          [&] { return runner_stop_; });
      if (runner_stop_) break;
      const auto now = Clock::now();
      const double elapsed = std::chrono::duration<double>(now - last).count();
      last = now;
      lock.unlock();
      Tick(elapsed);
      lock.lock();
    }
  });
}

void Session::StopRunner() {
  std::thread runner;
  {
    std::lock_guard lock(runner_mu_);
    runner_stop_ = true;
    runner = std::move(runner_);
  }
  runner_cv_.notify_all();
  if (runner.joinable()) runner.join();
}

void Session::Close() {
  StopRunner();
  std::lock_guard lock(mu_);
  if (subscribers_.empty()) return;
  json event = Envelope("event");
  event["session"] = id_;
  event["event"] = "closed";
  BroadcastLocked(event);
  for (auto& s : subscribers_) s->Close();
  subscribers_.clear();
}

void Session::BroadcastLocked(const json& message) {
  if (subscribers_.empty()) return;
  const std::string text = message.dump();
  std::erase_if(subscribers_, [](const auto& s) { return s->closed(); });
  for (auto& s : subscribers_) s->Push(text);
}

std::shared_ptr<Subscriber> Session::Subscribe(std::size_t capacity) {
  auto subscriber = std::make_shared<Subscriber>(capacity);
  std::lock_guard lock(mu_);
  subscriber->Push(SnapshotLocked().dump());
  subscribers_.push_back(subscriber);
  return subscriber;
}

void Session::Unsubscribe(const std::shared_ptr<Subscriber>& subscriber) {
  {
    std::lock_guard lock(mu_);
    std::erase(subscribers_, subscriber);
  }
  subscriber->Close();
}

json Session::SnapshotLocked() const {
  json out = Envelope("snapshot");
  out["session"] = id_;
  out["mode"] = std::string(ToString(mode_));
  out["step"] = sim_->step_count();
  out["t"] = sim_->time();
  out["pace"] = pace_;
  out["max_steps_per_tick"] = max_steps_per_tick_;
  out["scenario"] = ScenarioToJson(sim_->scenario());
  out["points"] = points_;
  const VehicleState& v = sim_->vehicle();
  out["vehicle"] = {{"x", v.p.x()}, {"y", v.p.y()}, {"theta", v.theta},
                    {"v", v.v}};
  out["w"] = sim_->w();
  out["spline_recomputations"] = sim_->spline_recomputations();
  if (!sim_->log().records.empty()) {
    out["last_record"] = RecordToJson(sim_->log().records.back());
  }
  if (sim_->abort_reason()) out["abort_reason"] = *sim_->abort_reason();
  return out;
}

json Session::Snapshot() const {
  std::lock_guard lock(mu_);
  return SnapshotLocked();
}

json Session::Info() const {
  std::lock_guard lock(mu_);
  json out = Envelope("session");
  out["id"] = id_;
  out["name"] = initial_.name;
  out["mode"] = std::string(ToString(mode_));
  out["step"] = sim_->step_count();
  out["t"] = sim_->time();
  out["total_steps"] = initial_.total_steps();
  out["pace"] = pace_;
  out["max_steps_per_tick"] = max_steps_per_tick_;
  out["subscribers"] = subscribers_.size();
  out["edits"] = edit_log_.size();
  out["queued_edits"] = queue_.size();
  json warnings = json::array();
  for (const auto& w : initial_.warnings) {
    warnings.push_back({{"path", w.path}, {"message", w.message}});
  }
  out["warnings"] = std::move(warnings);
  if (sim_->abort_reason()) out["abort_reason"] = *sim_->abort_reason();
  return out;
}

std::string Session::LogCsv() const {
  std::lock_guard lock(mu_);
  return SimLogCsv(sim_->log());
}

SimLog Session::log() const {
  std::lock_guard lock(mu_);
  return sim_->log();
}

std::vector<EditLogEntry> Session::edit_log() const {
  std::lock_guard lock(mu_);
  return edit_log_;
}

Scenario Session::initial_scenario() const { return initial_; }

RunMode Session::mode() const {
  std::lock_guard lock(mu_);
  return mode_;
}

std::int64_t Session::step_count() const {
  std::lock_guard lock(mu_);
  return sim_->step_count();
}

std::int64_t Session::spline_recomputations() const {
  std::lock_guard lock(mu_);
  return sim_->spline_recomputations();
}

double Session::pace() const {
  std::lock_guard lock(mu_);
  return pace_;
}

std::vector<FieldGridRow> Session::Field(const FieldRequest& request) {
  std::lock_guard lock(mu_);
  DrainLocked();
  const BezierSpline& spline = sim_->spline();
  FieldGridSpec spec;
  spec.bbox = request.bbox;
  spec.nx = request.nx;
  spec.ny = request.ny;
  spec.w = std::clamp(request.w.value_or(sim_->w()), 0.0,
                      spline.ParameterEnd());
  ValidateFieldGridSpec(spec);
  return FieldGrid(spline, sim_->scenario().guidance, spec);
}

json Session::FieldMessage(const FieldRequest& request) {
  const auto rows = Field(request);
  json out = Envelope("field");
  out["session"] = id_;
  {
    std::lock_guard lock(mu_);
    out["step"] = sim_->step_count();
    out["w"] = std::clamp(request.w.value_or(sim_->w()), 0.0,
                          sim_->spline().ParameterEnd());
  }
  out["bbox"] = {request.bbox.x_min, request.bbox.y_min, request.bbox.x_max,
                 request.bbox.y_max};
  out["res"] = {request.nx, request.ny};
  out["columns"] = {"x", "y", "chi_hat_x", "chi_hat_y"};
  out["rows"] = FieldRowsToJson(rows);
  return out;
}

// ---------------------------------------------------------------------------
// SessionManager

SessionManager::~SessionManager() { Clear(); }

std::shared_ptr<Session> SessionManager::Create(Scenario scenario,
                                                bool start_runner) {
  std::string id;
  {
    std::lock_guard lock(mu_);
    id = "s" + std::to_string(next_id_++);
  }
  auto session = std::make_shared<Session>(id, std::move(scenario));
  if (start_runner) session->StartRunner();
  std::lock_guard lock(mu_);
  sessions_.emplace(id, session);
  return session;
}

std::shared_ptr<Session> SessionManager::Get(const std::string& id) const {
  std::lock_guard lock(mu_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw NotFoundError("unknown session '" + id + "'");
  return it->second;
}

void SessionManager::Remove(const std::string& id) {
  std::shared_ptr<Session> removed;
  {
    std::lock_guard lock(mu_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) {
      throw NotFoundError("unknown session '" + id + "'");
    }
    removed = std::move(it->second);
    sessions_.erase(it);
  }
  removed->Close();
}

std::vector<std::shared_ptr<Session>> SessionManager::List() const {
  std::lock_guard lock(mu_);
  std::vector<std::shared_ptr<Session>> out;
  for (const auto& [id, s] : sessions_) out.push_back(s);
  return out;
}

void SessionManager::Clear() {
  std::map<std::string, std::shared_ptr<Session>> sessions;
  {
    std::lock_guard lock(mu_);
    sessions.swap(sessions_);
  }
  for (auto& [id, s] : sessions) s->Close();
}

}  // namespace gvfnav::gcs
