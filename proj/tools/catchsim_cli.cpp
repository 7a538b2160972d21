// Copyright 2026 The catchsim Authors
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

// catchsim: run scenarios, the bundled reproduction suite, or validate a
// scenario document.
//
// Exit codes: 0 ok, 1 suite thresholds missed, 2 input error (usage, parse,
// validation, I/O), 3 numerical failure (non-finite plant state).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "catchsim/catchsim.hpp"
#include "catchsim/suite.hpp"

namespace fs = std::filesystem;

namespace
{

constexpr int kOk = 0;
constexpr int kThresholdsMissed = 1;
constexpr int kInputError = 2;
constexpr int kNumericalFailure = 3;

struct Overrides
{
  std::optional<std::uint64_t> seed;
  std::optional<double> dt_physics;
  std::optional<double> dt_control;

  void apply(catchsim::Scenario & sc) const
  {
    if (seed) {sc.sensors.rng_seed = *seed;}
    if (dt_physics) {sc.dt_physics = *dt_physics;}
    if (dt_control) {sc.dt_control = *dt_control;}
    sc.validate();
  }
};

std::string format_value(const std::optional<double> & v)
{
  if (!v) {return "absent";}
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", *v);
  return buf;
}

nlohmann::json metrics_json(
  const std::string & name, const catchsim::MetricsReport & m,
  const std::vector<catchsim::suite::ThresholdCheck> & checks)
{
  nlohmann::json doc;
  doc["scenario"] = name;
  auto & metrics = doc["metrics"];
  metrics = nlohmann::json::object();
  for (const auto & [key, value] : m.entries()) {
    if (value && std::isfinite(*value)) {
      metrics[key] = *value;
    } else if (value) {
      metrics[key] = "inf";
    } else {
      metrics[key] = nullptr;
    }
  }
  if (!checks.empty()) {
    auto & arr = doc["checks"];
    arr = nlohmann::json::array();
    for (const auto & c : checks) {
      arr.push_back({{"metric", c.metric}, {"value", std::isfinite(c.value) ? nlohmann::json(c.value) : "inf"},
          {"requirement", c.requirement}, {"passed", c.passed}});
    }
  }
  return doc;
}

void write_outputs(
  const fs::path & dir, const catchsim::Scenario & sc, std::string_view document,
  const std::vector<catchsim::TelemetryRecord> & telemetry, const catchsim::MetricsReport * metrics,
  const std::vector<catchsim::suite::ThresholdCheck> & checks = {})
{
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {throw catchsim::IoError("cannot create '" + dir.string() + "': " + ec.message());}
  const auto meta = catchsim::telemetry_metadata(sc);
  catchsim::write_csv(telemetry, (dir / "telemetry.csv").string(), meta);
  {
    std::ofstream cfg(dir / "scenario.cfg", std::ios::binary);
    cfg << document;
  }
  if (!metrics) {return;}
  std::ofstream txt(dir / "metrics.txt", std::ios::binary);
  for (const auto & [key, value] : metrics->entries()) {txt << key << " = " << format_value(value) << '\n';}
  std::ofstream js(dir / "metrics.json", std::ios::binary);
  js << metrics_json(sc.name, *metrics, checks).dump(2) << '\n';
  if (!txt || !js) {throw catchsim::IoError("cannot write metrics under '" + dir.string() + "'");}
}

int run_command(const std::string & scenario_path, const fs::path & out, const Overrides & ov, int verbosity)
{
  const std::string document = catchsim::read_text_file(scenario_path);
  catchsim::Scenario sc = catchsim::load_scenario(document);
  ov.apply(sc);
  try {
    const auto result = catchsim::run(sc);
    write_outputs(out, sc, document, result.telemetry, &result.metrics);
    if (verbosity > 0) {
      for (const auto & [key, value] : result.metrics.entries()) {
        std::cout << key << " = " << format_value(value) << '\n';
      }
    }
  } catch (const catchsim::SimulationAborted & e) {
    write_outputs(out, sc, document, e.partial_telemetry(), nullptr);
    throw;
  }
  return kOk;
}

int suite_command(const fs::path & out, const Overrides & ov)
{
  const auto entries = catchsim::suite::run_all([&](catchsim::Scenario & sc) {ov.apply(sc);});
  bool all = true;
  std::printf("%-12s %-32s %14s  %-22s %s\n", "scenario", "metric", "value", "requirement", "result");
  for (const auto & e : entries) {
    write_outputs(out / e.name, e.scenario, e.document, e.result.telemetry, &e.result.metrics, e.checks);
    for (const auto & c : e.checks) {
      std::printf("%-12s %-32s %14.6g  %-22s %s\n", e.name.c_str(), c.metric.c_str(), c.value,
        c.requirement.c_str(), c.passed ? "PASS" : "FAIL");
    }
    std::printf("%-12s %-32s %14.3f  %-22s %s\n", e.name.c_str(), "runtime_s", e.runtime_s, "< 5",
      e.runtime_s < 5.0 ? "PASS" : "FAIL");
    all = all && e.passed() && e.runtime_s < 5.0;
  }
  return all ? kOk : kThresholdsMissed;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"catchsim: cable-and-spring catch system simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir;
  if (const char * env = std::getenv("CATCHSIM_OUT")) {out_dir = env;}
  Overrides ov;
  int verbosity = 0;

  auto * run_cmd = app.add_subcommand("run", "run one scenario and write telemetry + metrics");
  run_cmd->add_option("--scenario", scenario_path, "scenario document")->required();
  run_cmd->add_option("--out", out_dir, "output directory (default: $CATCHSIM_OUT)");
  run_cmd->add_option("--seed", ov.seed, "override the RNG seed");
  run_cmd->add_option("--dt-physics", ov.dt_physics, "override dt_physics [s]");
  run_cmd->add_option("--dt-control", ov.dt_control, "override dt_control [s]");
  run_cmd->add_flag("-v,--verbose", verbosity, "print metrics");

  auto * suite_cmd = app.add_subcommand("suite", "run the bundled reproduction scenarios");
  suite_cmd->add_option("--out", out_dir, "output directory (default: $CATCHSIM_OUT)");
  suite_cmd->add_option("--seed", ov.seed, "override the RNG seed");

  auto * validate_cmd = app.add_subcommand("validate", "parse and validate a scenario without running it");
  validate_cmd->add_option("--scenario", scenario_path, "scenario document")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp & e) {
    return app.exit(e);
  } catch (const CLI::ParseError & e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }

  try {
    if (*validate_cmd) {
      catchsim::load_scenario_file(scenario_path);
      std::cout << scenario_path << ": ok\n";
      return kOk;
    }
    if (out_dir.empty()) {
      std::cerr << "error: --out is required (or set CATCHSIM_OUT)\n";
      return kInputError;
    }
    if (*run_cmd) {return run_command(scenario_path, out_dir, ov, verbosity);}
    return suite_command(out_dir, ov);
  } catch (const catchsim::NonFiniteState & e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const catchsim::Error & e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
}
