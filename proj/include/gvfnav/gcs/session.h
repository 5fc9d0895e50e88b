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

// Live simulation sessions for the ground-control service.
//
// A Session owns one Simulator. Producers (HTTP handlers, WebSocket clients)
// call ApplyEdit from any thread; the edit is validated, queued and applied
// by the single consumer before the next step. Consecutive point moves in the
// queue are merged so the locked points are recomputed once per batch.
// Every applied batch is written to the edit log with the step it preceded,
// which ReplayEdits uses to reproduce the run exactly.

#ifndef GVFNAV_GCS_SESSION_H_
#define GVFNAV_GCS_SESSION_H_

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "gvfnav/field_grid.h"
#include "gvfnav/gcs/wire.h"
#include "gvfnav/scenario.h"
#include "gvfnav/simulator.h"

namespace gvfnav::gcs {

enum class RunMode { kPaused, kRunning, kFinished };
std::string_view ToString(RunMode mode);

inline constexpr int kDefaultMaxStepsPerTick = 50;
inline constexpr std::size_t kDefaultSubscriberCapacity = 4096;

// Bounded outgoing message queue of one stream client. Push never blocks:
// when the queue is full the message is dropped and counted, and a
// {"type": "gap", "dropped": n} marker precedes the next accepted message.
class Subscriber {
 public:
  explicit Subscriber(std::size_t capacity = kDefaultSubscriberCapacity);

  void Push(std::string message);
  // Called after every successful Push, outside the queue lock.
  void set_notify(std::function<void()> notify);

  std::optional<std::string> TryPop();
  // Waits up to `timeout_ms` for a message.
  std::optional<std::string> WaitPop(int timeout_ms);
  std::vector<std::string> Drain();

  std::size_t size() const;
  std::int64_t total_dropped() const;
  void Close();
  bool closed() const;

 private:
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<std::string> queue_;
  std::size_t capacity_;
  std::int64_t pending_gap_ = 0;
  std::int64_t total_dropped_ = 0;
  bool closed_ = false;
  std::function<void()> notify_;
};

// One applied batch: all commands ran between steps `step - 1` and `step`.
struct EditLogEntry {
  std::int64_t step = 0;
  std::vector<EditCommand> commands;
};

nlohmann::json EditLogToJson(std::span<const EditLogEntry> entries);
std::vector<EditLogEntry> EditLogFromJson(const nlohmann::json& doc);

// Applies one batch to a simulator: point moves of the batch are merged into
// a single recomputation; pause, resume and set_pace only tag the event
// column.
void ApplyEditBatch(Simulator& sim, std::span<const EditCommand> batch);

// Re-runs `scenario` for `steps` steps, applying each logged batch before
// its step. Bit-identical to the live session that produced the log.
SimLog ReplayEdits(const Scenario& scenario,
                   std::span<const EditLogEntry> entries, std::int64_t steps);

struct EditAck {
  EditKind kind = EditKind::kPause;
  // Index of the first step that observes the edit.
  std::int64_t effective_step = 0;
  nlohmann::json ToJson() const;
};

struct FieldRequest {
  BoundingBox bbox;
  int nx = 20;
  int ny = 20;
  // Current w when unset.
  std::optional<double> w;
};

class Session {
 public:
  // Validates the scenario; starts paused at t = 0.
  Session(std::string id, Scenario scenario);
  ~Session();

  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  const std::string& id() const { return id_; }

  // Validates and queues `edit`. Pause, resume, set_pace and reset act
  // immediately. InvalidArgumentError for locked or unknown points,
  // ValidationError for invalid parameters, StateError once finished
  // (except reset).
  EditAck ApplyEdit(const EditCommand& edit);

  // Applies queued edits, then takes up to `max_steps` steps regardless of
  // the run mode (finished sessions take none). Returns steps taken.
  std::int64_t Advance(std::int64_t max_steps);

  // Pacing: accumulates wall time and steps min(elapsed * pace / dt, max
  // steps per tick) while running. Queued edits are applied in any mode.
  std::int64_t Tick(double wall_seconds);

  // Background pacing thread calling Tick every `period_ms`.
  void StartRunner(int period_ms = 10);
  void StopRunner();

  // Stops the runner and closes every subscriber after a "closed" event.
  void Close();

  // The snapshot is queued first, under the same lock that orders records.
  std::shared_ptr<Subscriber> Subscribe(
      std::size_t capacity = kDefaultSubscriberCapacity);
  void Unsubscribe(const std::shared_ptr<Subscriber>& subscriber);

  nlohmann::json Snapshot() const;
  nlohmann::json Info() const;
  std::string LogCsv() const;
  SimLog log() const;
  std::vector<EditLogEntry> edit_log() const;
  Scenario initial_scenario() const;
  RunMode mode() const;
  std::int64_t step_count() const;
  std::int64_t spline_recomputations() const;
  double pace() const;

  // After applying queued edits; rows identical to FieldGrid on the
  // session's current spline and gains.
  std::vector<FieldGridRow> Field(const FieldRequest& request);
  nlohmann::json FieldMessage(const FieldRequest& request);

 private:
  void DrainLocked();
  std::int64_t StepLocked(std::int64_t max_steps);
  void ImmediateLocked(const EditCommand& edit);
  void ResetLocked();
  void BroadcastLocked(const nlohmann::json& message);
  nlohmann::json SnapshotLocked() const;
  nlohmann::json PointsLocked() const;
  void CheckEditLocked(const EditCommand& edit) const;

  const std::string id_;
  const Scenario initial_;
  mutable std::mutex mu_;
  std::unique_ptr<Simulator> sim_;
  RunMode mode_ = RunMode::kPaused;
  std::vector<EditCommand> queue_;
  std::vector<EditLogEntry> edit_log_;
  std::vector<std::shared_ptr<Subscriber>> subscribers_;
  nlohmann::json points_;
  double pace_ = 1.0;
  int max_steps_per_tick_ = kDefaultMaxStepsPerTick;
  double step_budget_ = 0.0;

  std::mutex runner_mu_;
  std::condition_variable runner_cv_;
  bool runner_stop_ = false;
  std::thread runner_;
};

// Thread-safe registry issuing ids "s1", "s2", ...
class SessionManager {
 public:
  ~SessionManager();

  std::shared_ptr<Session> Create(Scenario scenario, bool start_runner = true);
  // NotFoundError for an unknown id.
  std::shared_ptr<Session> Get(const std::string& id) const;
  void Remove(const std::string& id);
  std::vector<std::shared_ptr<Session>> List() const;
  void Clear();

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::int64_t next_id_ = 1;
};

}  // namespace gvfnav::gcs

#endif  // GVFNAV_GCS_SESSION_H_
