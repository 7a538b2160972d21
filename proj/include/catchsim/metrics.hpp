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

#ifndef CATCHSIM__METRICS_HPP_
#define CATCHSIM__METRICS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iterator>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "catchsim/dynamics.hpp"
#include "catchsim/errors.hpp"
#include "catchsim/scenario.hpp"
#include "catchsim/signal.hpp"
#include "catchsim/telemetry.hpp"

namespace catchsim
{

// Each field is absent when the mode it describes never ran.
struct MetricsReport
{
  // shadowing
  std::optional<double> gap_dev_max;          // m
  std::optional<double> gap_accel_max;        // m/s^2
  std::optional<bool> spring_engaged_during_shadow;
  // force control
  std::optional<double> force_rise_time_10_90;   // s, largest commanded step
  std::optional<double> force_overshoot;         // N
  std::optional<double> force_ss_noise_band;     // N, max |F_filt - F_des| once settled
  // recovery
  std::optional<double> recovery_rise_time_to_safe;   // s after failure
  std::optional<double> recovery_overshoot;           // m past the robot rest height
  std::optional<std::size_t> accel_bound_violations;
  std::optional<std::size_t> liftoff_violations;
  std::optional<double> recovery_peak_deflection_rate;   // m/s, max |dy rate| after first engagement

  std::vector<std::pair<std::string, std::optional<double>>> entries() const
  {
    auto as_double = [](const auto & v) -> std::optional<double> {
        if (!v) {return std::nullopt;}
        return static_cast<double>(*v);
      };
    return {
      {"gap_dev_max", gap_dev_max},
      {"gap_accel_max", gap_accel_max},
      {"spring_engaged_during_shadow", as_double(spring_engaged_during_shadow)},
      {"force_rise_time_10_90", force_rise_time_10_90},
      {"force_overshoot", force_overshoot},
      {"force_ss_noise_band", force_ss_noise_band},
      {"recovery_rise_time_to_safe", recovery_rise_time_to_safe},
      {"recovery_overshoot", recovery_overshoot},
      {"accel_bound_violations", as_double(accel_bound_violations)},
      {"liftoff_violations", as_double(liftoff_violations)},
      {"recovery_peak_deflection_rate", recovery_peak_deflection_rate},
    };
  }

  double get(std::string_view key) const
  {
    for (const auto & [name, value] : entries()) {
      if (name != key) {continue;}
      if (!value) {throw ModeAbsent("metric '" + name + "' is absent: its mode never ran");}
      return *value;
    }
    throw std::invalid_argument("unknown metric '" + std::string(key) + "'");
  }
};

namespace detail
{

inline bool has_tag(const std::string & event, std::string_view tag)
{
  return event.find(tag) != std::string::npos;
}

// Time at which `signal` first reaches `level` after `from`, interpolated
// between samples; nullopt if it never does before `until`.
template<class Get>
std::optional<double> crossing_time(
  std::span<const TelemetryRecord> rows, double from, double until, double level, bool rising, Get get)
{
  std::optional<std::size_t> prev;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double t = rows[i].time;
    if (t + 1e-12 < from) {continue;}
    if (t >= until - 1e-12) {break;}
    const double v = get(rows[i]);
    const bool reached = rising ? v >= level : v <= level;
    if (reached) {
      if (!prev) {return t;}
      const double v0 = get(rows[*prev]);
      const double t0 = rows[*prev].time;
      if (v == v0) {return t;}
      return t0 + (level - v0) / (v - v0) * (t - t0);
    }
    prev = i;
  }
  return std::nullopt;
}

}  // namespace detail

inline void shadowing_metrics(MetricsReport & m, std::span<const TelemetryRecord> rows, const Scenario & sc)
{
  const double d = sc.shadow.offset;
  const double dt = sc.dt_control;
  double dev = 0.0;
  double accel_max = 0.0;
  bool engaged = false;
  bool any = false;
  LowPass smooth{0.0, 2.0 * std::numbers::pi * sc.gap_accel_cutoff_hz};
  auto gap = [&](std::size_t i) {return rows[i].robot_pos - rows[i].planarizer_pos;};

  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].mode != Mode::Shadowing) {continue;}
    any = true;
    dev = std::max(dev, std::abs(gap(i) - d));
    engaged = engaged || rows[i].deflection >= 0.0;
    if (i > 0 && i + 1 < rows.size() && rows[i - 1].mode == Mode::Shadowing &&
      rows[i + 1].mode == Mode::Shadowing)
    {
      const double second_diff = (gap(i + 1) - 2.0 * gap(i) + gap(i - 1)) / (dt * dt);
      smooth = lowpass_step(smooth, second_diff, dt);
      accel_max = std::max(accel_max, std::abs(smooth.value));
    }
  }
  if (!any) {return;}
  m.gap_dev_max = dev;
  m.gap_accel_max = accel_max;
  m.spring_engaged_during_shadow = engaged;
  // A gap within (0, 2d) keeps the deflection negative, so the cable cannot
  // have been loaded.
  if (dev < d && engaged) {
    throw std::logic_error("shadowing metrics: gap deviation below offset but spring engaged");
  }
}

inline void force_metrics(MetricsReport & m, std::span<const TelemetryRecord> rows, const Scenario & sc)
{
  std::vector<TelemetryRecord> force_rows;
  std::copy_if(rows.begin(), rows.end(), std::back_inserter(force_rows),
    [](const TelemetryRecord & r) {return r.mode == Mode::ForceControl;});
  if (force_rows.empty()) {return;}
  const std::span<const TelemetryRecord> fr(force_rows);
  const auto & steps = sc.desired_force;
  const double end_time = fr.back().time + sc.dt_control;

  double band = 0.0;
  double overshoot = 0.0;
  double largest_jump = 0.0;
  std::optional<double> rise;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const double t_k = steps[k].first;
    const double f_k = steps[k].second;
    const double t_next = k + 1 < steps.size() ? steps[k + 1].first : end_time;
    for (const auto & r : fr) {
      if (r.time + 1e-12 >= t_k + sc.settle_time && r.time < t_next - 1e-12) {
        band = std::max(band, std::abs(r.force_filtered - f_k));
      }
    }
    if (k == 0) {continue;}
    const double f_prev = steps[k - 1].second;
    const double jump = f_k - f_prev;
    if (jump == 0.0) {continue;}
    const double sign = jump > 0.0 ? 1.0 : -1.0;
    for (const auto & r : fr) {
      if (r.time + 1e-12 >= t_k && r.time < t_next - 1e-12) {
        overshoot = std::max(overshoot, sign * (r.force_filtered - f_k));
      }
    }
    if (std::abs(jump) > largest_jump) {
      largest_jump = std::abs(jump);
      auto get = [](const TelemetryRecord & r) {return r.force_filtered;};
      const auto t10 = detail::crossing_time(fr, t_k, t_next, f_prev + 0.1 * jump, jump > 0.0, get);
      const auto t90 = detail::crossing_time(fr, t_k, t_next, f_prev + 0.9 * jump, jump > 0.0, get);
      rise = (t10 && t90) ? *t90 - *t10 : std::numeric_limits<double>::infinity();
    }
  }
  m.force_ss_noise_band = band;
  m.force_overshoot = overshoot;
  if (rise) {m.force_rise_time_10_90 = rise;}
}

inline void recovery_metrics(MetricsReport & m, std::span<const TelemetryRecord> rows, const Scenario & sc)
{
  const auto first = std::find_if(rows.begin(), rows.end(),
      [](const TelemetryRecord & r) {return is_catch_mode(r.mode);});
  if (first == rows.end()) {return;}
  const auto tail = rows.subspan(static_cast<std::size_t>(first - rows.begin()));
  const double t_fail = tail.front().time;
  const double y_fail = tail.front().robot_pos;
  const double rest_height = y_fail + sc.recovery.safe_rise + sc.recovery.clearance;

  std::optional<double> rise;
  double peak = -std::numeric_limits<double>::infinity();
  std::size_t accel_violations = 0;
  std::size_t liftoffs = 0;
  bool engaged = false;
  std::optional<double> peak_rate;
  for (const auto & r : tail) {
    if (!rise && r.robot_pos - y_fail >= sc.recovery.safe_rise) {rise = r.time - t_fail;}
    peak = std::max(peak, r.robot_pos);
    if (detail::has_tag(r.event, to_string(ViolationKind::AccelBound))) {++accel_violations;}
    if (r.deflection > 0.0) {
      engaged = true;
    } else if (engaged) {
      ++liftoffs;
    }
    if (engaged) {
      const double rate = std::abs(r.planarizer_vel - r.robot_vel);
      peak_rate = peak_rate ? std::max(*peak_rate, rate) : rate;
    }
  }
  m.recovery_rise_time_to_safe = rise.value_or(std::numeric_limits<double>::infinity());
  m.recovery_overshoot = std::max(0.0, peak - rest_height);
  m.accel_bound_violations = accel_violations;
  m.liftoff_violations = liftoffs;
  m.recovery_peak_deflection_rate = peak_rate;
}

inline MetricsReport compute_metrics(std::span<const TelemetryRecord> rows, const Scenario & sc)
{
  if (rows.empty()) {throw std::invalid_argument("compute_metrics: empty telemetry");}
  MetricsReport m;
  shadowing_metrics(m, rows, sc);
  force_metrics(m, rows, sc);
  recovery_metrics(m, rows, sc);
  return m;
}

}  // namespace catchsim

#endif  // CATCHSIM__METRICS_HPP_
