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

#include "gvfnav/sim_log.h"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <type_traits>
#include <variant>

#include <fmt/format.h>

#include "gvfnav/errors.h"

namespace gvfnav {
namespace {

using Member = std::variant<double SimRecord::*, bool SimRecord::*,
                            std::int64_t SimRecord::*, std::string SimRecord::*>;

struct Column {
  std::string_view name;
  Member member;
};

#define GVFNAV_COLUMN(field) Column{#field, &SimRecord::field}

constexpr std::array kColumns = {
    GVFNAV_COLUMN(step),       GVFNAV_COLUMN(t),
    GVFNAV_COLUMN(px),         GVFNAV_COLUMN(py),
    GVFNAV_COLUMN(theta),      GVFNAV_COLUMN(v),
    GVFNAV_COLUMN(w),          GVFNAV_COLUMN(meas_x),
    GVFNAV_COLUMN(meas_y),     GVFNAV_COLUMN(phi1),
    GVFNAV_COLUMN(phi2),       GVFNAV_COLUMN(e_norm),
    GVFNAV_COLUMN(e_path),     GVFNAV_COLUMN(lyapunov),
    GVFNAV_COLUMN(u_theta),    GVFNAV_COLUMN(theta_d_dot),
    GVFNAV_COLUMN(steer_phi),  GVFNAV_COLUMN(steer_clamped),
    GVFNAV_COLUMN(kappa),      GVFNAV_COLUMN(v_ref),
    GVFNAV_COLUMN(v_raw),      GVFNAV_COLUMN(v_filtered),
    GVFNAV_COLUMN(u_v),        GVFNAV_COLUMN(u_ff),
    GVFNAV_COLUMN(u_p),        GVFNAV_COLUMN(u_i),
    GVFNAV_COLUMN(u_d),        GVFNAV_COLUMN(throttle_clamped),
    GVFNAV_COLUMN(d_x),        GVFNAV_COLUMN(d_y),
    GVFNAV_COLUMN(accuracy),   GVFNAV_COLUMN(chi1),
    GVFNAV_COLUMN(chi2),       GVFNAV_COLUMN(chi3),
    GVFNAV_COLUMN(w_reset),    GVFNAV_COLUMN(event),
};

#undef GVFNAV_COLUMN

const std::array<std::string_view, kColumns.size()> kColumnNames = [] {
  std::array<std::string_view, kColumns.size()> names{};
  for (size_t i = 0; i < kColumns.size(); ++i) names[i] = kColumns[i].name;
  return names;
}();

struct FieldWriter {
  const SimRecord& record;
  fmt::memory_buffer& out;

  void operator()(double SimRecord::*m) const {
    fmt::format_to(std::back_inserter(out), "{}", record.*m);
  }
  void operator()(bool SimRecord::*m) const {
    out.push_back(record.*m ? '1' : '0');
  }
  void operator()(std::int64_t SimRecord::*m) const {
    fmt::format_to(std::back_inserter(out), "{}", record.*m);
  }
  void operator()(std::string SimRecord::*m) const {
    out.append(std::string_view(record.*m));
  }
};

void AppendLine(const SimRecord& record, fmt::memory_buffer& out) {
  for (size_t i = 0; i < kColumns.size(); ++i) {
    if (i > 0) out.push_back(',');
    std::visit(FieldWriter{record, out}, kColumns[i].member);
  }
  out.push_back('\n');
}

[[noreturn]] void Malformed(size_t line, std::string_view column,
                            const std::string& message) {
  throw ValidationError("line " + std::to_string(line) + "/" +
                            std::string(column),
                        message);
}

template <typename T>
T ParseNumber(std::string_view token, size_t line, std::string_view column) {
  T value{};
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    Malformed(line, column, "cannot parse '" + std::string(token) + "'");
  }
  return value;
}

struct FieldReader {
  SimRecord& record;
  std::string_view token;
  size_t line;
  std::string_view column;

  void operator()(double SimRecord::*m) const {
    record.*m = ParseNumber<double>(token, line, column);
  }
  void operator()(bool SimRecord::*m) const {
    if (token != "0" && token != "1") Malformed(line, column, "expected 0 or 1");
    record.*m = token == "1";
  }
  void operator()(std::int64_t SimRecord::*m) const {
    record.*m = ParseNumber<std::int64_t>(token, line, column);
  }
  void operator()(std::string SimRecord::*m) const {
    record.*m = std::string(token);
  }
};

}  // namespace

std::span<const std::string_view> SimLogColumns() { return kColumnNames; }

std::vector<std::pair<std::string_view, ColumnValue>> ColumnValues(
    const SimRecord& record) {
  std::vector<std::pair<std::string_view, ColumnValue>> values;
  values.reserve(kColumns.size());
  for (const auto& column : kColumns) {
    std::visit(
        [&](auto member) {
          using T = std::decay_t<decltype(record.*member)>;
          if constexpr (std::is_same_v<T, std::string>) {
            values.emplace_back(column.name, std::string_view(record.*member));
          } else {
            values.emplace_back(column.name, record.*member);
          }
        },
        column.member);
  }
  return values;
}

std::string SimLogCsvHeader() {
  std::string header;
  for (size_t i = 0; i < kColumns.size(); ++i) {
    if (i > 0) header += ',';
    header += kColumns[i].name;
  }
  return header;
}

std::string SimRecordCsvLine(const SimRecord& record) {
  fmt::memory_buffer out;
  AppendLine(record, out);
  return fmt::to_string(out);
}

void WriteSimLogCsv(const SimLog& log, std::ostream& out) {
  out << SimLogCsvHeader() << '\n';
  fmt::memory_buffer buffer;
  for (const auto& record : log.records) {
    AppendLine(record, buffer);
    if (buffer.size() > (1 << 16)) {
      out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
      buffer.clear();
    }
  }
  out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
}

std::string SimLogCsv(const SimLog& log) {
  fmt::memory_buffer buffer;
  const std::string header = SimLogCsvHeader();
  buffer.append(std::string_view(header));
  buffer.push_back('\n');
  for (const auto& record : log.records) AppendLine(record, buffer);
  return fmt::to_string(buffer);
}

SimLog ReadSimLogCsv(std::istream& in) {
  std::string text;
  if (!std::getline(in, text)) Malformed(1, "header", "empty log");
  if (!text.empty() && text.back() == '\r') text.pop_back();
  if (text != SimLogCsvHeader()) {
    Malformed(1, "header", "unexpected column layout");
  }
  SimLog log;
  size_t line = 1;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.empty()) continue;
    SimRecord record;
    std::string_view rest(text);
    for (size_t i = 0; i < kColumns.size(); ++i) {
      const size_t comma = rest.find(',');
      const bool last = i + 1 == kColumns.size();
      if (last != (comma == std::string_view::npos)) {
        Malformed(line, kColumns[i].name, "wrong number of fields");
      }
      const std::string_view token = rest.substr(0, comma);
      std::visit(FieldReader{record, token, line, kColumns[i].name},
                 kColumns[i].member);
      if (!last) rest.remove_prefix(comma + 1);
    }
    log.records.push_back(std::move(record));
  }
  return log;
}

SimLog ReadSimLogCsvFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open '" + path + "'");
  return ReadSimLogCsv(in);
}

std::string SanitizeEventTag(std::string_view tag) {
  std::string out;
  for (char c : tag) {
    if (c != ',' && c != '\n' && c != '\r') out.push_back(c);
  }
  return out;
}

}  // namespace gvfnav
