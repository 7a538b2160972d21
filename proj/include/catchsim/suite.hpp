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

#ifndef CATCHSIM__SUITE_HPP_
#define CATCHSIM__SUITE_HPP_

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <string>
#include <string_view>
#include <vector>

#include "catchsim/metrics.hpp"
#include "catchsim/scenario.hpp"
#include "catchsim/simulation.hpp"
#include "catchsim/suite_scenarios.hpp"

namespace catchsim::suite
{

struct ThresholdCheck
{
  std::string metric;
  double value;
  std::string requirement;   // human readable, e.g. "< 0.01"
  bool passed;
};

struct Entry
{
  std::string name;
  std::string_view document;
  Scenario scenario;
  RunResult result;
  double runtime_s{0.0};
  std::vector<ThresholdCheck> checks;

  bool passed() const
  {
    for (const auto & c : checks) {
      if (!c.passed) {return false;}
    }
    return true;
  }
};

struct BundledScenario
{
  std::string_view name;
  std::string_view document;
};

inline constexpr BundledScenario kBundled[] = {
  {"shadowing", kShadowingScenario},
  {"force_steps", kForceStepsScenario},
  {"recovery", kRecoveryScenario},
};

namespace detail
{

inline std::string num(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

inline ThresholdCheck below(std::string metric, double value, double limit)
{
  return {std::move(metric), value, "< " + num(limit), value < limit};
}

inline ThresholdCheck at_most(std::string metric, double value, double limit)
{
  return {std::move(metric), value, "<= " + num(limit), value <= limit};
}

inline ThresholdCheck within(std::string metric, double value, double lo, double hi)
{
  return {std::move(metric), value, "in [" + num(lo) + ", " + num(hi) + "]",
    value >= lo && value <= hi};
}

}  // namespace detail

/// Thresholds for the bundled scenarios. Runtime limits are checked
/// separately by the caller, which owns the clock.
inline std::vector<ThresholdCheck> evaluate(std::string_view name, const MetricsReport & m)
{
  using detail::at_most;
  using detail::below;
  using detail::within;
  std::vector<ThresholdCheck> checks;
  if (name == "shadowing") {
    checks.push_back(below("gap_dev_max", m.get("gap_dev_max"), 0.01));
    checks.push_back(at_most("gap_accel_max", m.get("gap_accel_max"), 7.0));
    checks.push_back(at_most("spring_engaged_during_shadow", m.get("spring_engaged_during_shadow"), 0.0));
  } else if (name == "force_steps") {
    checks.push_back(within("force_rise_time_10_90", m.get("force_rise_time_10_90"), 0.05, 0.20));
    checks.push_back(at_most("force_ss_noise_band", m.get("force_ss_noise_band"), 3.0));
  } else if (name == "recovery") {
    checks.push_back(within("recovery_rise_time_to_safe", m.get("recovery_rise_time_to_safe"), 0.3, 0.5));
    checks.push_back(below("recovery_overshoot", m.get("recovery_overshoot"), 0.005));
    checks.push_back(at_most("accel_bound_violations", m.get("accel_bound_violations"), 0.0));
    checks.push_back(at_most("liftoff_violations", m.get("liftoff_violations"), 0.0));
    checks.push_back(below("recovery_peak_deflection_rate", m.get("recovery_peak_deflection_rate"), 0.1));
  }
  return checks;
}

// Runs the bundled scenarios concurrently, each on its own thread with its
// own state and RNG. `adjust` may override fields (seed, steps) before the run.
inline std::vector<Entry> run_all(const std::function<void(Scenario &)> & adjust = {})
{
  std::vector<std::future<Entry>> jobs;
  for (const auto & b : kBundled) {
    jobs.push_back(std::async(std::launch::async, [b, adjust] {
        Entry e;
        e.name = std::string(b.name);
        e.document = b.document;
        e.scenario = load_scenario(b.document);
        if (adjust) {
          adjust(e.scenario);
          e.scenario.validate();
        }
        const auto start = std::chrono::steady_clock::now();
        e.result = run(e.scenario);
        e.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        e.checks = evaluate(e.name, e.result.metrics);
        return e;
      }));
  }
  std::vector<Entry> out;
  for (auto & j : jobs) {out.push_back(j.get());}
  return out;
}

}  // namespace catchsim::suite

#endif  // CATCHSIM__SUITE_HPP_
