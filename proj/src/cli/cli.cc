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

#include "gvfnav/cli.h"

#include <algorithm>
#include <csignal>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <pthread.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "gvfnav/analysis.h"
#include "gvfnav/field_grid.h"
#include "gvfnav/gcs/server.h"
#include "gvfnav/gcs/session.h"
#include "gvfnav/gcs/wire.h"
#include "gvfnav/scenario.h"
#include "gvfnav/simulator.h"
#include "gvfnav/spline_io.h"

namespace gvfnav {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void ConfigureLogging(const std::string& flag_level) {
  static const auto logger = [] {
    auto l = spdlog::stderr_color_mt("gvfnav");
    spdlog::set_default_logger(l);
    return l;
  }();
  std::string level = flag_level;
  if (level.empty()) {
    const char* env = std::getenv("GVFNAV_LOG_LEVEL");
    level = env != nullptr ? env : "warn";
  }
  logger->set_level(spdlog::level::from_str(level));
}

void WriteFile(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigurationError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw ConfigurationError("write failed for '" + path.string() + "'");
}

json IssuesToJson(const std::vector<FieldIssue>& issues) {
  json out = json::array();
  for (const auto& i : issues) {
    out.push_back({{"path", i.path}, {"message", i.message}});
  }
  return out;
}

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<double> duration;
};

Scenario LoadScenarioWithOverrides(const std::string& path,
                                   const Overrides& o) {
  Scenario s = LoadScenarioFile(path);
  if (o.seed) s.seed = *o.seed;
  if (o.dt) s.dt = *o.dt;
  if (o.duration) s.duration = *o.duration;
  s.Validate();
  return s;
}

// ----------------------------------------------------------------- validate

json SplineReport(const BezierSpline& spline,
                  const std::vector<FieldIssue>& warnings) {
  json report = {{"type", "validation"},
                 {"valid", true},
                 {"degree", spline.degree()},
                 {"continuity", std::string(ToString(spline.continuity()))},
                 {"num_segments", spline.num_segments()},
                 {"closed", spline.IsClosed()},
                 {"configurable_points",
                  ConfigurablePointCount(spline.num_segments(), spline.degree(),
                                         spline.continuity())}};
  report["warnings"] = IssuesToJson(warnings);
  json locked = json::array();
  const int p = Order(spline.continuity());
  for (int i = 1; i < spline.num_segments(); ++i) {
    for (int k = 1; k <= p; ++k) {
      const Vec2& b = spline.point({i, k});
      locked.push_back({{"segment", i},
                        {"index", k},
                        {"name", "beta_" + std::to_string(k) + "^" +
                                     std::to_string(i)},
                        {"x", b.x()},
                        {"y", b.y()}});
    }
  }
  report["locked_points"] = std::move(locked);
  json hulls = json::array();
  for (const auto& segment : spline.segments()) {
    json hull = json::array();
    for (const auto& v : ConvexHull(segment)) hull.push_back(PointToJson(v));
    hulls.push_back(std::move(hull));
  }
  report["hulls"] = std::move(hulls);
  report["points"] = gcs::PointRolesToJson(spline);
  return report;
}

int RunValidate(const std::string& spline_path,
                const std::string& scenario_path, bool strict,
                std::ostream& out, std::ostream& err) {
  json report;
  std::vector<FieldIssue> warnings;
  if (!scenario_path.empty()) {
    const Scenario s = LoadScenarioFile(scenario_path);
    warnings = s.warnings;
    report = SplineReport(*s.spline, warnings);
    report["scenario"] = s.name;
  } else {
    SplineLoadResult loaded = LoadSplineFile(spline_path);
    warnings = loaded.warnings;
    report = SplineReport(loaded.spline, warnings);
  }
  for (const auto& w : warnings) {
    err << "warning: " << w.path << ": " << w.message << "\n";
  }
  if (strict && !warnings.empty()) report["valid"] = false;
  out << report.dump(2) << "\n";
  return report["valid"].get<bool>() ? kExitOk : kExitInvalidInput;
}

// ----------------------------------------------------------------- simulate

json RunOne(const Scenario& scenario, const fs::path& dir) {
  Simulator sim(scenario);
  const SimLog& log = sim.Run();
  fs::create_directories(dir);
  {
    std::ofstream csv(dir / "log.csv", std::ios::binary);
    if (!csv) throw ConfigurationError("cannot write " + (dir / "log.csv").string());
    WriteSimLogCsv(log, csv);
  }
  WriteFile(dir / "scenario.json", ScenarioToJson(scenario).dump(2) + "\n");
  json summary = {{"dir", dir.string()},
                  {"seed", scenario.seed},
                  {"steps", log.records.size()},
                  {"metrics", ToJson(ComputeMetrics(log))}};
  if (sim.abort_reason()) summary["abort_reason"] = *sim.abort_reason();
  return summary;
}

int RunSimulate(const std::string& scenario_path, const std::string& out_dir,
                const Overrides& overrides, int runs, std::ostream& out) {
  const Scenario base = LoadScenarioWithOverrides(scenario_path, overrides);
  for (const auto& w : base.warnings) {
    spdlog::warn("{}: {}", w.path, w.message);
  }
  json result = {{"type", "simulation"}, {"runs", json::array()}};
  if (runs <= 1) {
    result["runs"].push_back(RunOne(base, out_dir));
  } else {
    // Independent seeds in parallel; each run is identical to a serial one.
    std::vector<std::future<json>> jobs;
    for (int r = 0; r < runs; ++r) {
      Scenario s = base;
      s.seed = base.seed + static_cast<std::uint64_t>(r);
      const fs::path dir = fs::path(out_dir) / ("seed_" + std::to_string(s.seed));
      jobs.push_back(std::async(std::launch::async,
                                [s, dir] { return RunOne(s, dir); }));
    }
    for (auto& j : jobs) result["runs"].push_back(j.get());
  }
  out << result.dump(2) << "\n";
  return kExitOk;
}

// ------------------------------------------------------------------ analyze

int RunAnalyze(const std::string& log_path, std::string sidecar,
               std::optional<double> bound, double threshold,
               const std::string& out_path, std::ostream& out,
               std::ostream& err) {
  const SimLog log = ReadSimLogCsvFile(log_path);
  if (sidecar.empty()) {
    const fs::path guess = fs::path(log_path).parent_path() / "scenario.json";
    if (fs::exists(guess)) sidecar = guess.string();
  }
  std::optional<Scenario> scenario;
  if (!sidecar.empty()) scenario = LoadScenarioFile(sidecar);
  const GuidanceGains gains = scenario ? scenario->guidance : GuidanceGains{};

  json report = {{"type", "analysis"},
                 {"log", log_path},
                 {"metrics", ToJson(ComputeMetrics(log, threshold))}};
  if (!sidecar.empty()) report["scenario"] = sidecar;
  report["gains"] = {{"k1", gains.k1}, {"k2", gains.k2},
                     {"k_theta", gains.k_theta}};
  const LyapunovTrace trace = ComputeLyapunovTrace(log);
  json lyapunov = ToJson(trace);
  lyapunov.erase("t");
  lyapunov.erase("v");
  report["lyapunov"] = std::move(lyapunov);

  bool passed = true;
  if (!bound && scenario && scenario->noise.kind != NoiseKind::kNone) {
    bound = scenario->noise.bound;
  }
  if (bound) {
    if (gains.k1 != gains.k2 && !scenario) {
      throw ConfigurationError(
          "unequal gains need the scenario sidecar for the path");
    }
    const BoundReport b = VerifyBound(
        log, *bound, gains, scenario ? scenario->spline.get() : nullptr);
    report["bound"] = ToJson(b);
    passed = b.passed;
    err << "bound: sup_d = " << *bound << " m, threshold = " << b.threshold
        << " m, " << b.violations.size() << " violations, "
        << (b.passed ? "PASS" : "FAIL") << "\n";
  }
  const std::string text = report.dump(2) + "\n";
  if (!out_path.empty()) WriteFile(out_path, text);
  out << text;
  return passed ? kExitOk : kExitFailure;
}

// -------------------------------------------------------------------- field

int RunField(const std::string& spline_path, const std::string& scenario_path,
             double w, const std::string& bbox, const std::string& res,
             const std::string& out_path, std::ostream& out) {
  std::shared_ptr<const BezierSpline> spline;
  GuidanceGains gains;
  if (!scenario_path.empty()) {
    const Scenario s = LoadScenarioFile(scenario_path);
    spline = s.spline;
    gains = s.guidance;
  } else {
    spline = std::make_shared<BezierSpline>(LoadSplineFile(spline_path).spline);
  }
  FieldGridSpec spec;
  spec.w = w;
  if (bbox.empty()) {
    // Control-point bounding box plus 20 % margin.
    double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
    for (const auto& segment : spline->segments()) {
      for (const auto& p : segment.points()) {
        x0 = std::min(x0, p.x());
        y0 = std::min(y0, p.y());
        x1 = std::max(x1, p.x());
        y1 = std::max(y1, p.y());
      }
    }
    const double mx = 0.2 * std::max(x1 - x0, 1.0);
    const double my = 0.2 * std::max(y1 - y0, 1.0);
    spec.bbox = {x0 - mx, y0 - my, x1 + mx, y1 + my};
  } else {
    spec.bbox = ParseBoundingBox(bbox);
  }
  ParseResolution(res, &spec.nx, &spec.ny);
  if (!(w >= 0.0 && w <= spline->ParameterEnd())) {
    throw InvalidArgumentError("w must lie in [0, " +
                               std::to_string(spline->num_segments()) + "]");
  }
  const std::string csv = FieldGridCsv(FieldGrid(*spline, gains, spec));
  if (out_path.empty()) {
    out << csv;
  } else {
    WriteFile(out_path, csv);
  }
  return kExitOk;
}

// -------------------------------------------------------------------- serve

int RunServe(const std::string& address, int port, int threads,
             const std::string& scenario_path, const std::string& scenario_dir,
             double exit_after, std::ostream& out) {
  // Handle SIGINT and SIGTERM synchronously on this thread.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  gcs::SessionManager sessions;
  gcs::ServerOptions options;
  options.address = address;
  options.port = static_cast<std::uint16_t>(port);
  options.threads = threads;
  options.scenario_base_dir =
      scenario_dir.empty() ? fs::current_path().string() : scenario_dir;
  gcs::Server server(sessions, options);
  server.Start();
  json started = {{"type", "listening"},
                  {"address", address},
                  {"port", server.port()}};
  if (!scenario_path.empty()) {
    started["session"] = sessions.Create(LoadScenarioFile(scenario_path))->id();
  }
  out << started.dump() << "\n" << std::flush;

  if (exit_after > 0.0) {
    timespec timeout{};
    timeout.tv_sec = static_cast<time_t>(exit_after);
    timeout.tv_nsec = static_cast<long>((exit_after - timeout.tv_sec) * 1e9);
    sigtimedwait(&signals, nullptr, &timeout);
  } else {
    int signal = 0;
    sigwait(&signals, &signal);
  }
  spdlog::info("shutting down");
  sessions.Clear();
  server.Stop();
  pthread_sigmask(SIG_UNBLOCK, &signals, nullptr);
  return kExitOk;
}

// ------------------------------------------------------------------- replay

int RunReplay(const std::string& log_path, const std::string& scenario_path,
              const std::string& edits_path, std::int64_t steps,
              const std::string& out_dir, std::ostream& out) {
  SimLog log;
  json result = {{"type", "replay"}};
  if (!scenario_path.empty()) {
    const Scenario scenario = LoadScenarioFile(scenario_path);
    std::vector<gcs::EditLogEntry> edits;
    if (!edits_path.empty()) {
      edits = gcs::EditLogFromJson(
          ParseJsonText(ReadTextFile(edits_path), edits_path));
    }
    if (steps <= 0) steps = scenario.total_steps();
    log = gcs::ReplayEdits(scenario, edits, steps);
    WriteFile(fs::path(out_dir) / "log.csv", SimLogCsv(log));
    result["resimulated"] = true;
    result["edits"] = edits.size();
  } else {
    log = ReadSimLogCsvFile(log_path);
    result["resimulated"] = false;
  }
  json files = json::array();
  for (const auto& [stem, csv] : PanelCsvs(log)) {
    const fs::path path = fs::path(out_dir) / (stem + ".csv");
    WriteFile(path, csv);
    files.push_back(path.string());
  }
  result["steps"] = log.records.size();
  result["files"] = std::move(files);
  result["metrics"] = ToJson(ComputeMetrics(log));
  out << result.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"gvfnav: vector-field path following over Bezier splines",
               "gvfnav"};
  app.require_subcommand(1);
  std::string log_level;
  app.add_option("--log-level", log_level,
                 "trace, debug, info, warn, error, off "
                 "(default: $GVFNAV_LOG_LEVEL or warn)");

  std::string spline_path, scenario_path, out_path, log_path, edits_path;
  std::string bbox, res = "40,40", address = "127.0.0.1";
  Overrides overrides;
  std::optional<double> bound;
  double threshold = 0.1, w = 0.0, exit_after = 0.0;
  int port = 8080, threads = 2, runs = 1;
  std::int64_t steps = 0;
  bool strict = false;
  std::string scenario_dir;

  auto* validate = app.add_subcommand("validate", "check a spline or scenario");
  auto* spline_opt = validate->add_option("--spline", spline_path,
                                          "spline JSON");
  auto* scen_opt = validate->add_option("--scenario", scenario_path,
                                        "scenario JSON");
  spline_opt->excludes(scen_opt);
  validate->add_flag("--strict", strict, "treat repaired joints as errors");

  auto* simulate = app.add_subcommand("simulate", "run a scenario headlessly");
  simulate->add_option("--scenario", scenario_path, "scenario JSON")
      ->required();
  simulate->add_option("--out", out_path, "output directory")->required();
  simulate->add_option("--seed", overrides.seed, "noise seed override");
  simulate->add_option("--dt", overrides.dt, "step override [s]");
  simulate->add_option("--duration", overrides.duration,
                       "duration override [s]");
  simulate->add_option("--runs", runs,
                       "consecutive seeds to run in parallel")
      ->check(CLI::Range(1, 1000));

  auto* analyze = app.add_subcommand("analyze", "metrics and bound checks");
  analyze->add_option("--log", log_path, "log CSV")->required();
  analyze->add_option("--scenario", scenario_path,
                      "scenario sidecar (default: scenario.json next to the log)");
  analyze->add_option("--bound", bound, "sup ||d|| [m] for the bound check");
  analyze->add_option("--threshold", threshold,
                      "convergence threshold on e_path [m]");
  analyze->add_option("--out", out_path, "write the report here as well");

  auto* field = app.add_subcommand("field", "export the unit field on a grid");
  auto* fs_opt = field->add_option("--spline", spline_path, "spline JSON");
  auto* fc_opt = field->add_option("--scenario", scenario_path,
                                   "scenario JSON (uses its gains)");
  fs_opt->excludes(fc_opt);
  field->add_option("--w", w, "path parameter");
  field->add_option("--bbox", bbox, "xmin,ymin,xmax,ymax");
  field->add_option("--res", res, "nx,ny");
  field->add_option("--out", out_path, "CSV file (default: stdout)");

  auto* serve = app.add_subcommand("serve", "run the ground-control service");
  serve->add_option("--port", port, "TCP port (0 = any)")
      ->check(CLI::Range(0, 65535));
  serve->add_option("--address", address, "bind address");
  serve->add_option("--threads", threads, "I/O threads")
      ->check(CLI::Range(1, 64));
  serve->add_option("--scenario", scenario_path, "create a session at start");
  serve->add_option("--scenario-dir", scenario_dir,
                    "base directory for relative spline_file entries");
  serve->add_option("--exit-after", exit_after,
                    "stop after this many seconds (0 = on signal)");

  auto* replay = app.add_subcommand("replay", "re-derive panel data");
  auto* rl_opt = replay->add_option("--log", log_path, "log CSV");
  auto* rs_opt = replay->add_option("--scenario", scenario_path,
                                    "scenario to re-simulate");
  rl_opt->excludes(rs_opt);
  replay->add_option("--edits", edits_path, "edit log JSON")
      ->needs(rs_opt);
  replay->add_option("--steps", steps, "steps to re-simulate");
  replay->add_option("--out", out_path, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    ConfigureLogging(log_level);
  } catch (const std::exception& e) {
    err << "error: invalid log level: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*validate) {
      if (spline_path.empty() && scenario_path.empty()) {
        err << "validate needs --spline or --scenario\n" << validate->help();
        return kExitUsage;
      }
      return RunValidate(spline_path, scenario_path, strict, out, err);
    }
    if (*simulate) {
      return RunSimulate(scenario_path, out_path, overrides, runs, out);
    }
    if (*analyze) {
      return RunAnalyze(log_path, scenario_path, bound, threshold, out_path,
                        out, err);
    }
    if (*field) {
      if (spline_path.empty() && scenario_path.empty()) {
        err << "field needs --spline or --scenario\n" << field->help();
        return kExitUsage;
      }
      return RunField(spline_path, scenario_path, w, bbox, res, out_path, out);
    }
    if (*serve) {
      return RunServe(address, port, threads, scenario_path, scenario_dir,
                      exit_after, out);
    }
    if (*replay) {
      if (log_path.empty() && scenario_path.empty()) {
        err << "replay needs --log or --scenario\n" << replay->help();
        return kExitUsage;
      }
      return RunReplay(log_path, scenario_path, edits_path, steps, out_path,
                       out);
    }
  } catch (const std::exception& e) {
    const json error = gcs::ErrorToJson(e);
    err << "error: " << e.what() << "\n";
    const bool invalid =
        dynamic_cast<const ValidationError*>(&e) != nullptr ||
        dynamic_cast<const ConfigurationError*>(&e) != nullptr ||
        dynamic_cast<const InvalidArgumentError*>(&e) != nullptr ||
        dynamic_cast<const NotFoundError*>(&e) != nullptr;
    out << error.dump(2) << "\n";
    return invalid ? kExitInvalidInput : kExitFailure;
  }
  return kExitUsage;
}

}  // namespace gvfnav
