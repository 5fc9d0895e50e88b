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

// Per-step simulation records and their CSV form.
//
// Each record holds the state at t = step * dt, before the step, together
// with the commands applied over [t, t + dt). Column order is fixed; see
// docs/log_format.md.

#ifndef GVFNAV_SIM_LOG_H_
#define GVFNAV_SIM_LOG_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace gvfnav {

struct SimRecord {
  std::int64_t step = 0;
  double t = 0.0;
  double px = 0.0;
  double py = 0.0;
  double theta = 0.0;
  double v = 0.0;
  double w = 0.0;
  double meas_x = 0.0;
  double meas_y = 0.0;
  double phi1 = 0.0;
  double phi2 = 0.0;
  double e_norm = 0.0;
  double e_path = 0.0;
  double lyapunov = 0.0;
  double u_theta = 0.0;
  double theta_d_dot = 0.0;
  double steer_phi = 0.0;
  bool steer_clamped = false;
  double kappa = 0.0;
  double v_ref = 0.0;
  double v_raw = 0.0;
  double v_filtered = 0.0;
  double u_v = 0.0;
  double u_ff = 0.0;
  double u_p = 0.0;
  double u_i = 0.0;
  double u_d = 0.0;
  bool throttle_clamped = false;
  double d_x = 0.0;
  double d_y = 0.0;
  double accuracy = 0.0;
  double chi1 = 0.0;
  double chi2 = 0.0;
  double chi3 = 0.0;
  bool w_reset = false;
  // Semicolon-separated event tags; commas and newlines are not allowed.
  std::string event;

  friend bool operator==(const SimRecord&, const SimRecord&) = default;
};

struct SimLog {
  std::vector<SimRecord> records;
};

std::span<const std::string_view> SimLogColumns();

using ColumnValue = std::variant<double, bool, std::int64_t, std::string_view>;

// (column name, value) pairs of `record` in column order. The string views
// point into `record`.
std::vector<std::pair<std::string_view, ColumnValue>> ColumnValues(
    const SimRecord& record);

// Header line plus one line per record. Doubles use the shortest decimal
// form that round-trips, so reading back gives bit-identical values.
void WriteSimLogCsv(const SimLog& log, std::ostream& out);
std::string SimLogCsv(const SimLog& log);
std::string SimLogCsvHeader();
std::string SimRecordCsvLine(const SimRecord& record);

// ValidationError naming the line and column on malformed input.
SimLog ReadSimLogCsv(std::istream& in);
SimLog ReadSimLogCsvFile(const std::string& path);

// Drops commas, newlines and carriage returns from an event tag.
std::string SanitizeEventTag(std::string_view tag);

}  // namespace gvfnav

#endif  // GVFNAV_SIM_LOG_H_
