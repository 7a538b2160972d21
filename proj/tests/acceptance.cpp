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

// Acceptance report: one PASS/FAIL line per criterion, sub-checks indented
// below it. Exit status is the number of failed criteria (capped at 1).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "catchsim/catchsim.hpp"
#include "catchsim/suite_scenarios.hpp"

namespace
{

using catchsim::Mode;
using catchsim::ModelParams;
using catchsim::PlantState;
using catchsim::Scenario;
using catchsim::SpringMode;

// Pinned tolerances.
constexpr double kRuntimeLimit = 5.0;            // s per scenario
constexpr double kGapDevLimit = 0.01;            // m
constexpr double kGapAccelLimit = 7.0;           // m/s^2
constexpr double kForceErrorLimit = 0.5;         // N, noiseless, from 0.5 s after each step
constexpr double kForceSettle = 0.5;             // s
constexpr double kRiseLow = 0.05;                // s
constexpr double kRiseHigh = 0.20;               // s
constexpr double kNoiseBand = 3.0;               // N
constexpr double kNoiseStd = 1.5;                // N
constexpr double kRecoveryRiseLow = 0.3;         // s, 0.4 s - 25%
constexpr double kRecoveryRiseHigh = 0.5;        // s, 0.4 s + 25%
constexpr double kOvershootLimit = 0.005;        // m
constexpr double kAccelLimit = -6.7;             // m/s^2
constexpr double kDeflectionRateLimit = 0.1;     // m/s
constexpr double kBoundValue = -6.70;            // m/s^2
constexpr double kBoundTolerance = 0.05;         // m/s^2
constexpr double kContinuityTolerance = 1e-9;    // N
constexpr double kSlopeTolerance = 1e-3;         // relative to k + b|dv|/eps
constexpr double kLinearMatch = 0.01;            // of step size
constexpr double kHalvingTolerance = 1e-5;       // m
constexpr int kFuzzRuns = 1000;
constexpr double kOracleTolerance = 1e-4;        // m

struct Check
{
  std::string what;
  bool ok;
};

struct Criterion
{
  int id;
  std::string title;
  std::vector<Check> checks;

  void add(std::string what, bool ok) { checks.push_back({std::move(what), ok}); }

  bool passed() const
  {
    return std::all_of(checks.begin(), checks.end(), [](const Check & c) {return c.ok;});
  }
};

std::string fmt(const char * f, double a)
{
  char buf[128];
  std::snprintf(buf, sizeof(buf), f, a);
  return buf;
}

std::string fmt(const char * f, double a, double b)
{
  char buf[160];
  std::snprintf(buf, sizeof(buf), f, a, b);
  return buf;
}

struct Timed
{
  catchsim::RunResult result;
  double seconds;
};

Timed timed_run(const Scenario & sc)
{
  const auto start = std::chrono::steady_clock::now();
  auto r = catchsim::run(sc);
  return {std::move(r), std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()};
}

Criterion shadowing()
{
  Criterion c{1, "shadowing transparency", {}};
  const auto sc = catchsim::load_scenario(catchsim::suite::kShadowingScenario);
  c.add("scripted sine 0.3 + 0.1 sin(2 pi 0.25 t), 10 s, d = 0.02, k_p = 5, k_ff = 1",
    sc.robot_motion.offset == 0.3 && sc.robot_motion.amplitude == 0.1 && sc.robot_motion.frequency == 0.25 &&
    sc.duration == 10.0 && sc.shadow.offset == 0.02 && sc.shadow.kp == 5.0 && sc.shadow.kff == 1.0);
  const auto [r, secs] = timed_run(sc);
  const double dev = r.metrics.get("gap_dev_max");
  const double acc = r.metrics.get("gap_accel_max");
  double max_dy = -1.0;
  for (const auto & row : r.telemetry) {max_dy = std::max(max_dy, row.deflection);}
  c.add(fmt("gap_dev_max = %.6f m < 0.01", dev), dev < kGapDevLimit);
  c.add(fmt("max deflection = %.6f m < 0 (spring never engaged)", max_dy), max_dy < 0.0);
  c.add(fmt("gap_accel_max = %.4f m/s^2 <= 7 (disturbance %.3f N)", acc, acc * sc.params.hanging_mass),
    acc <= kGapAccelLimit);
  c.add(fmt("runtime = %.3f s < 5", secs), secs < kRuntimeLimit);
  return c;
}

// Largest |F_filt - F_k| from settle after each step until the next one.
double steady_error(const std::vector<catchsim::TelemetryRecord> & rows, const Scenario & sc)
{
  double worst = 0.0;
  const auto & steps = sc.desired_force;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const double from = steps[k].first + kForceSettle;
    const double until = k + 1 < steps.size() ? steps[k + 1].first : sc.duration + sc.dt_control;
    for (const auto & row : rows) {
      if (row.time + 1e-12 >= from && row.time < until - 1e-12) {
        worst = std::max(worst, std::abs(row.force_filtered - steps[k].second));
      }
    }
  }
  return worst;
}

Criterion force()
{
  Criterion c{2, "force control steps", {}};
  auto sc = catchsim::load_scenario(catchsim::suite::kForceStepsScenario);
  const bool steps_ok = sc.desired_force == catchsim::TimeSeries{{0.0, 10.0}, {1.0, 20.0}, {2.0, 50.0}, {3.0, 30.0}};
  c.add("supported robot, steps 10/20/50/30 N at 1 s, omega_c = 100, k_p = 0.002",
    steps_ok && sc.robot_drive == catchsim::RobotDrive::Scripted && sc.force.cutoff == 100.0 &&
    sc.force.kp == 0.002);

  Scenario quiet = sc;
  quiet.sensors.loadcell_noise_std = 0.0;
  const auto [clean, clean_s] = timed_run(quiet);
  const double err = steady_error(clean.telemetry, quiet);
  const double rise = clean.metrics.get("force_rise_time_10_90");
  c.add(fmt("noiseless steady-state error = %.4f N < 0.5", err), err < kForceErrorLimit);
  c.add(fmt("largest-step 10-90%% rise = %.4f s in [0.05, 0.20]", rise), rise >= kRiseLow && rise <= kRiseHigh);

  Scenario noisy = sc;
  noisy.sensors.loadcell_noise_std = kNoiseStd;
  const auto [loud, loud_s] = timed_run(noisy);
  const double band = loud.metrics.get("force_ss_noise_band");
  c.add(fmt("noise 1.5 N: steady filtered band = +/-%.4f N <= 3.0", band), band <= kNoiseBand);
  c.add(fmt("runtime = %.3f s, %.3f s < 5", clean_s, loud_s), clean_s < kRuntimeLimit && loud_s < kRuntimeLimit);
  return c;
}

Criterion recovery()
{
  Criterion c{3, "recovery after failure", {}};
  const auto sc = catchsim::load_scenario(catchsim::suite::kRecoveryScenario);
  c.add("failure at t = 2 s from shadowing; tau = 0.0833, v_max = 0.5, a_max = 5, k_p = 5, safe_rise = 0.08",
    sc.failure_injection && sc.failure_injection->time == 2.0 && sc.initial_mode == Mode::Shadowing &&
    sc.trajectory.tau == 0.0833 && sc.trajectory.max_velocity == 0.5 && sc.trajectory.max_accel == 5.0 &&
    sc.recovery.kp == 5.0 && sc.recovery.safe_rise == 0.08);
  const auto [r, secs] = timed_run(sc);
  const auto & m = r.metrics;
  const double rise = m.get("recovery_rise_time_to_safe");
  const double over = m.get("recovery_overshoot");
  c.add(fmt("rise to +0.08 m = %.4f s in [0.3, 0.5]", rise), rise >= kRecoveryRiseLow && rise <= kRecoveryRiseHigh);
  c.add(fmt("overshoot past final set-point = %.5f m < 0.005", over), over < kOvershootLimit);

  // Robot acceleration on every catch tick, from the plant model.
  const ModelParams & p = sc.params;
  double min_accel = INFINITY;
  double peak_rate = 0.0;
  bool engaged = false;
  bool lifted_off = false;
  for (const auto & row : r.telemetry) {
    if (!catchsim::is_catch_mode(row.mode)) {continue;}
    const PlantState s{row.time, row.robot_pos, row.robot_vel, row.planarizer_pos, row.planarizer_vel};
    const double a = catchsim::robot_accel(s, sc.external_force(row.time, row.robot_pos, row.robot_vel), p,
        sc.spring_mode);
    min_accel = std::min(min_accel, a);
    if (row.deflection > 0.0) {
      engaged = true;
    } else if (engaged) {
      lifted_off = true;
    }
    if (engaged) {peak_rate = std::max(peak_rate, std::abs(row.planarizer_vel - row.robot_vel));}
  }
  c.add(fmt("min robot accel over recovery = %.4f m/s^2 > -6.7 (monitor count %.0f)", min_accel,
    m.get("accel_bound_violations")), min_accel > kAccelLimit && m.get("accel_bound_violations") == 0.0);
  c.add(fmt("deflection stays > 0 after first engagement (lift-off rows %.0f)", m.get("liftoff_violations")),
    engaged && !lifted_off && m.get("liftoff_violations") == 0.0);
  c.add(fmt("peak deflection rate after engagement = %.4f m/s < 0.1", peak_rate), peak_rate < kDeflectionRateLimit);
  c.add(fmt("runtime = %.3f s < 5", secs), secs < kRuntimeLimit);
  return c;
}

Criterion constraint_arithmetic()
{
  Criterion c{4, "constraint arithmetic", {}};
  const double b = catchsim::accel_bound(ModelParams{}, catchsim::damping_bound(300.0, 0.1));
  c.add(fmt("accel_bound(defaults, damping_bound(300, 0.1)) = %.4f m/s^2 (-6.70 +/- 0.05)", b),
    std::abs(b - kBoundValue) <= kBoundTolerance);
  return c;
}

double spring_continuity_gap()
{
  const ModelParams p;
  double worst = 0.0;
  for (double dv = -2.0; dv <= 2.0; dv += 0.01) {
    for (double edge : {0.0, -p.blend_width}) {
      const double a = catchsim::spring_force(edge, dv, p, SpringMode::Corrected);
      const double b = catchsim::spring_force(std::nextafter(edge, edge == 0.0 ? 1.0 : -1.0), dv, p, SpringMode::Corrected);
      worst = std::max(worst, std::abs(a - b));
    }
  }
  return worst;
}

double spring_slope_gap()
{
  const ModelParams p;
  const double h = 1e-7;
  auto slope = [&](double dy, double dv) {
      return (catchsim::spring_force(dy + h, dv, p, SpringMode::Corrected) -
             catchsim::spring_force(dy - h, dv, p, SpringMode::Corrected)) / (2.0 * h);
    };
  double worst = 0.0;
  for (double dv = -0.5; dv <= 0.5; dv += 0.05) {
    for (double edge : {0.0, -p.blend_width}) {
      const double scale = p.stiffness + p.damping * std::abs(dv) / p.blend_width;
      worst = std::max(worst, std::abs(slope(edge + h, dv) - slope(edge - h, dv)) / scale);
    }
  }
  return worst;
}

bool spf_saturation_exact()
{
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const catchsim::SetPointLimits lim{0.02 + 0.3 * std::abs(u(rng)), 0.1 + std::abs(u(rng)), 1.0 + 20.0 * std::abs(u(rng))};
    auto s = catchsim::spf_init(u(rng), 0.0, lim);
    double target = 0.0;
    for (int n = 0; n < 500; ++n) {
      if (n % 100 == 0) {target = 2.0 * u(rng);}
      const auto next = catchsim::spf_step(s, target, 1e-3);
      if (std::abs(next.velocity) > lim.max_velocity + 1e-12) {return false;}
      if (std::abs(next.velocity - s.velocity) / 1e-3 > lim.max_accel * (1.0 + 1e-9)) {return false;}
      s = next;
    }
  }
  return true;
}

double spf_linear_mismatch()
{
  const catchsim::SetPointLimits lim{};
  const double step = 0.001;
  auto s = catchsim::spf_init(0.0, 0.0, lim);
  double worst = 0.0;
  for (int n = 1; n <= 1000; ++n) {
    s = catchsim::spf_step(s, step, 1e-3);
    const double t = n * 1e-3;
    const double analytic = step * (1.0 - (1.0 + t / lim.tau) * std::exp(-t / lim.tau));
    worst = std::max(worst, std::abs(s.position - analytic) / step);
  }
  return worst;
}

std::vector<double> bounce(double dt)
{
  const ModelParams p;
  PlantState s{0.0, 0.311, 0.0, 0.3, 0.0};
  auto none = [](double, double, double) {return 0.0;};
  std::vector<double> samples;
  const int stride = static_cast<int>(std::lround(1e-3 / dt));
  const int steps = static_cast<int>(std::lround(2.0 / dt));
  for (int i = 0; i <= steps; ++i) {
    if (i % stride == 0) {samples.push_back(s.robot_pos);}
    if (i < steps) {s = catchsim::step_physics(s, 0.0, none, dt, p, SpringMode::Corrected);}
  }
  return samples;
}

double halving_change()
{
  const auto a = bounce(1e-4);
  const auto b = bounce(5e-5);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {worst = std::max(worst, std::abs(a[i] - b[i]));}
  return worst;
}

bool byte_identical_reruns()
{
  for (const auto doc : {catchsim::suite::kShadowingScenario, catchsim::suite::kForceStepsScenario,
      catchsim::suite::kRecoveryScenario})
  {
    const auto sc = catchsim::load_scenario(doc);
    std::ostringstream a;
    std::ostringstream b;
    catchsim::write_csv(a, catchsim::run(sc).telemetry);
    catchsim::write_csv(b, catchsim::run(sc).telemetry);
    if (a.str() != b.str()) {return false;}
  }
  return true;
}

int rank(Mode m)
{
  return m == Mode::Recovery ? 1 : m == Mode::Hold ? 2 : 0;
}

// Randomized failure injection over short closed-loop runs.
int latch_fuzz_failures()
{
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> when(0.0, 0.25);
  std::bernoulli_distribution coin(0.5);
  int bad = 0;
  for (int run = 0; run < kFuzzRuns; ++run) {
    Scenario sc;
    sc.duration = 0.3;
    sc.sensors.rng_seed = static_cast<std::uint64_t>(run);
    sc.initial_mode = coin(rng) ? Mode::Shadowing : Mode::ForceControl;
    if (coin(rng)) {
      sc.failure_injection = catchsim::FailureInjection{when(rng),
        coin(rng) ? catchsim::FailureCause::GroundProximity : catchsim::FailureCause::JointFault};
    }
    const auto r = catchsim::run(sc);
    int last = 0;
    for (const auto & row : r.telemetry) {
      const int now = rank(row.mode);
      if (now < last || (now == 0 && row.mode != sc.initial_mode)) {
        ++bad;
        break;
      }
      last = now;
    }
    if (sc.failure_injection.has_value() != r.supervisor.failure_cause.has_value()) {++bad;}
  }
  return bad;
}

Criterion properties()
{
  Criterion c{5, "property suites", {}};
  const double cont = spring_continuity_gap();
  c.add(fmt("spring force jump at blend edges = %.3g N < 1e-9", cont), cont < kContinuityTolerance);
  const double slope = spring_slope_gap();
  c.add(fmt("spring slope jump at blend edges = %.3g (relative) <= 1e-3", slope), slope <= kSlopeTolerance);
  c.add("set-point filter |v| <= v_max and |dv/dt| <= a_max on every sample", spf_saturation_exact());
  const double lin = spf_linear_mismatch();
  c.add(fmt("set-point filter vs critically damped response = %.4f of step <= 0.01", lin), lin <= kLinearMatch);
  const double halving = halving_change();
  c.add(fmt("dt halving changes a 2 s bounce by %.3g m < 1e-5", halving), halving < kHalvingTolerance);
  c.add("byte-identical reruns of every bundled scenario", byte_identical_reruns());
  const int fuzz = latch_fuzz_failures();
  c.add(fmt("supervisor latch monotone over %.0f randomized runs (violations %.0f)", kFuzzRuns, fuzz), fuzz == 0);
  return c;
}

Criterion oracle()
{
  Criterion c{6, "integrator oracle equivalence", {}};
  const ModelParams p;
  const double fg = p.gravity * (p.robot_mass - p.hanging_mass);
  const double y_p = 0.3;
  const double y0 = y_p - fg / p.stiffness - 0.005;

  // First-order oracle at 1 us on the engaged linear spring-damper.
  std::vector<double> ref;
  double y = y0;
  double v = 0.0;
  bool stayed_engaged = true;
  for (int i = 0; i <= 1000000; ++i) {
    if (i % 1000 == 0) {ref.push_back(y);}
    const double dy = y_p - y;
    stayed_engaged = stayed_engaged && dy > 0.0;
    const double a = (p.stiffness * dy - p.damping * v - fg) / p.robot_mass;
    y += 1e-6 * v;
    v += 1e-6 * a;
  }

  PlantState s{0.0, y0, 0.0, y_p, 0.0};
  auto none = [](double, double, double) {return 0.0;};
  double worst = 0.0;
  for (int i = 0; i <= 10000; ++i) {
    if (i % 10 == 0) {worst = std::max(worst, std::abs(s.robot_pos - ref[static_cast<std::size_t>(i / 10)]));}
    if (i < 10000) {s = catchsim::step_physics(s, 0.0, none, 1e-4, p, SpringMode::Corrected);}
  }
  c.add("oracle bounce stays engaged", stayed_engaged);
  c.add(fmt("RK4 at 1e-4 vs Euler at 1e-6 over 1 s: sup |dy_r| = %.3g m < 1e-4", worst), worst < kOracleTolerance);
  return c;
}

}  // namespace

int main()
{
  std::vector<Criterion> all;
  all.push_back(shadowing());
  all.push_back(force());
  all.push_back(recovery());
  all.push_back(constraint_arithmetic());
  all.push_back(properties());
  all.push_back(oracle());

  int failed = 0;
  for (const auto & c : all) {
    std::printf("%s criterion %d: %s\n", c.passed() ? "PASS" : "FAIL", c.id, c.title.c_str());
    for (const auto & check : c.checks) {
      std::printf("    [%s] %s\n", check.ok ? "ok" : "MISS", check.what.c_str());
    }
    failed += c.passed() ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
