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

// Declarative experiment description and its line-oriented `key = value`
// document format. See scenarios/README.md for the full key reference.

#ifndef CATCHSIM__SCENARIO_HPP_
#define CATCHSIM__SCENARIO_HPP_

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "catchsim/controllers.hpp"
#include "catchsim/dynamics.hpp"
#include "catchsim/errors.hpp"
#include "catchsim/sensors.hpp"
#include "catchsim/signal.hpp"
#include "catchsim/supervisor.hpp"

namespace catchsim
{

struct Waveform
{
  enum class Shape { Constant, Sine };

  Shape shape{Shape::Constant};
  double offset{0.0};
  double amplitude{0.0};
  double frequency{0.0};   // Hz
  double phase{0.0};       // rad

  double value(double t) const
  {
    if (shape == Shape::Constant) {return offset;}
    return offset + amplitude * std::sin(omega() * t + phase);
  }
  double rate(double t) const
  {
    if (shape == Shape::Constant) {return 0.0;}
    return amplitude * omega() * std::cos(omega() * t + phase);
  }
  double accel(double t) const
  {
    if (shape == Shape::Constant) {return 0.0;}
    return -amplitude * omega() * omega() * std::sin(omega() * t + phase);
  }

private:
  double omega() const { return 2.0 * std::numbers::pi * frequency; }
};

enum class RobotDrive { Free, Scripted };

using TimeSeries = std::vector<std::pair<double, double>>;

// Ground reaction on the robot's feet.
struct ExternalForce
{
  enum class Kind { None, Steps, Linear, Sine, Ground };

  Kind kind{Kind::None};
  TimeSeries points;                 // Steps: piecewise constant, Linear: interpolated
  Waveform wave;
  double ground_height{0.3};         // m, robot height at first contact
  double ground_stiffness{2.0e5};    // N/m
  double ground_damping{3000.0};     // N*s/m

  double operator()(double t, double pos, double vel) const
  {
    switch (kind) {
      case Kind::None:
        return 0.0;
      case Kind::Steps:
        return held_value(points, t);
      case Kind::Linear:
        return interpolate(t);
      case Kind::Sine:
        return wave.value(t);
      case Kind::Ground:
        // Unilateral: the ground only pushes.
        return std::max(0.0, ground_stiffness * (ground_height - pos) - ground_damping * vel);
    }
    return 0.0;
  }

  static double held_value(const TimeSeries & series, double t)
  {
    if (series.empty()) {return 0.0;}
    double v = series.front().second;
    for (const auto & [ts, value] : series) {
      if (t + 1e-12 >= ts) {v = value;} else {break;}
    }
    return v;
  }

private:
  double interpolate(double t) const
  {
    if (points.empty()) {return 0.0;}
    if (t <= points.front().first) {return points.front().second;}
    for (std::size_t i = 1; i < points.size(); ++i) {
      if (t <= points[i].first) {
        const auto [t0, v0] = points[i - 1];
        const auto [t1, v1] = points[i];
        return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
      }
    }
    return points.back().second;
  }
};

struct FailureInjection
{
  double time;
  FailureCause kind;
};

struct Scenario
{
  std::string name{"scenario"};
  double duration{1.0};
  double dt_control{1e-3};
  double dt_physics{1e-4};
  ModelParams params;
  SensorConfig sensors;
  SpringMode spring_mode{SpringMode::Corrected};
  Mode initial_mode{Mode::Shadowing};

  ShadowGains shadow;
  ForceGains force;
  RecoveryGains recovery;
  SetPointLimits trajectory;
  double max_deflection_rate{0.1};   // m/s, sizes the damping-force bound

  RobotDrive robot_drive{RobotDrive::Scripted};
  Waveform robot_motion{Waveform::Shape::Constant, 0.3};
  double robot_y0{0.3};
  double robot_v0{0.0};
  std::optional<double> planarizer_y0;

  ExternalForce external_force;
  TimeSeries desired_force{{0.0, 10.0}, {1.0, 20.0}, {2.0, 50.0}, {3.0, 30.0}};

  std::optional<FailureInjection> failure_injection;
  std::vector<std::pair<std::string, double>> point_offsets{
    {"knee_left", -0.12}, {"knee_right", -0.12}, {"corner_left", 0.05}, {"corner_right", 0.05}};
  double min_height{0.05};
  std::vector<JointLimit> joint_limits{{"knee_left", 0.1, 2.8}, {"knee_right", 0.1, 2.8}};
  std::vector<JointAngle> joint_angles{{"knee_left", 1.2}, {"knee_right", 1.2}};
  InitSource init_source{InitSource::Planarizer};

  double gap_accel_cutoff_hz{50.0};
  double settle_time{0.5};   // s after a force step before it counts as steady

  std::size_t substeps() const
  {
    return static_cast<std::size_t>(std::llround(dt_control / dt_physics));
  }

  std::size_t tick_count() const
  {
    return static_cast<std::size_t>(std::floor(duration / dt_control + 1e-9));
  }

  double desired_force_at(double t) const { return ExternalForce::held_value(desired_force, t); }

  FailureConfig failure_config() const
  {
    FailureConfig cfg;
    for (const auto & [point, offset] : point_offsets) {
      cfg.points.push_back(MonitoredPoint::offset_from_robot(point, offset));
    }
    cfg.min_height = min_height;
    cfg.joints = joint_limits;
    cfg.init_source = init_source;
    return cfg;
  }

  void validate() const
  {
    auto require = [](bool ok, const char * field, const std::string & what) {
        if (!ok) {throw ValidationError(field, what);}
      };
    require(std::isfinite(duration) && duration > 0.0, "duration", "must be > 0");
    require(std::isfinite(dt_physics) && dt_physics > 0.0 && dt_physics <= 1e-3 + 1e-15,
      "dt_physics", "must be in (0, 0.001]");
    require(std::isfinite(dt_control) && dt_control > 0.0, "dt_control", "must be > 0");
    const double ratio = dt_control / dt_physics;
    require(std::llround(ratio) >= 1 && std::abs(ratio - std::round(ratio)) <= 1e-9 * ratio,
      "dt_control", "must be an integer multiple of dt_physics");
    require(initial_mode == Mode::Shadowing || initial_mode == Mode::ForceControl,
      "mode", "initial mode must be shadowing or force");
    params.validate();
    sensors.validate();
    require(shadow.offset > 0.0, "shadow.d", "must be > 0");
    require(shadow.kp >= 0.0, "shadow.k_p", "must be >= 0");
    require(force.cutoff > 0.0, "force.omega_c", "must be > 0");
    require(trajectory.tau > 0.0, "recovery.tau", "must be > 0");
    require(trajectory.max_velocity > 0.0, "recovery.v_max", "must be > 0");
    require(trajectory.max_accel > 0.0, "recovery.a_max", "must be > 0");
    require(recovery.safe_rise >= 0.0, "recovery.safe_rise", "must be >= 0");
    require(recovery.clearance >= 0.0, "recovery.clearance", "must be >= 0");
    require(max_deflection_rate >= 0.0, "recovery.dv_max", "must be >= 0");
    require(!desired_force.empty(), "f_des.steps", "needs at least one step");
    auto increasing = [](const TimeSeries & s) {
        return std::adjacent_find(s.begin(), s.end(), [](const auto & a, const auto & b) {
                 return !(a.first < b.first);
               }) == s.end();
      };
    require(increasing(desired_force), "f_des.steps", "times must be strictly increasing");
    require(increasing(external_force.points), "f_ext.points", "times must be strictly increasing");
    require(gap_accel_cutoff_hz > 0.0, "metrics.gap_accel_cutoff", "must be > 0");
    require(settle_time >= 0.0, "metrics.settle_time", "must be >= 0");
    failure_config().validate();
    for (const auto & a : joint_angles) {
      const bool known = std::any_of(joint_limits.begin(), joint_limits.end(),
          [&](const JointLimit & l) {return l.name == a.name;});
      require(known, "failure.joint_angles", "no limit configured for joint '" + a.name + "'");
    }
    if (failure_injection) {
      require(failure_injection->time >= 0.0, "failure.time", "must be >= 0");
      if (failure_injection->kind == FailureCause::JointFault) {
        require(!joint_angles.empty(), "failure.kind", "joint injection needs failure.joint_angles");
      }
    }
  }
};

namespace detail
{

inline std::string_view trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {return {};}
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep)
{
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) {break;}
    start = pos + 1;
  }
  return out;
}

inline double parse_number(std::string_view text, std::size_t line, std::string_view key)
{
  const std::string buf(text);
  errno = 0;
  char * end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (buf.empty() || end != buf.c_str() + buf.size() || errno == ERANGE || !std::isfinite(v)) {
    throw ParseError(line, "key '" + std::string(key) + "': expected a number, got '" + buf + "'");
  }
  return v;
}

inline TimeSeries parse_series(std::string_view text, std::size_t line, std::string_view key)
{
  TimeSeries out;
  for (auto item : split(text, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() != 2) {
      throw ParseError(line, "key '" + std::string(key) + "': expected time:value pairs");
    }
    out.emplace_back(parse_number(parts[0], line, key), parse_number(parts[1], line, key));
  }
  return out;
}

template<class Enum>
Enum parse_choice(
  std::string_view text, std::size_t line, std::string_view key,
  std::initializer_list<std::pair<std::string_view, Enum>> choices)
{
  for (const auto & [label, value] : choices) {
    if (label == text) {return value;}
  }
  std::string allowed;
  for (const auto & c : choices) {
    allowed += (allowed.empty() ? "" : "|") + std::string(c.first);
  }
  throw ParseError(line, "key '" + std::string(key) + "': expected one of " + allowed + ", got '" +
          std::string(text) + "'");
}

using KeyHandler = std::function<void (Scenario &, std::string_view, std::size_t, std::string_view)>;

inline KeyHandler number_into(double Scenario::* field)
{
  return [field](Scenario & sc, std::string_view v, std::size_t line, std::string_view key) {
           sc.*field = parse_number(v, line, key);
         };
}

template<class Group>
KeyHandler number_into(Group Scenario::* group, double Group::* field)
{
  return [group, field](Scenario & sc, std::string_view v, std::size_t line, std::string_view key) {
           (sc.*group).*field = parse_number(v, line, key);
         };
}

inline const std::map<std::string, KeyHandler, std::less<>> & key_table()
{
  static const std::map<std::string, KeyHandler, std::less<>> table = [] {
      std::map<std::string, KeyHandler, std::less<>> t;
      t["name"] = [](Scenario & sc, std::string_view v, std::size_t, std::string_view) {sc.name = v;};
      t["duration"] = number_into(&Scenario::duration);
      t["dt_control"] = number_into(&Scenario::dt_control);
      t["dt_physics"] = number_into(&Scenario::dt_physics);
      t["mode"] = [](Scenario & sc, std::string_view v, std::size_t line, std::string_view key) {
          sc.initial_mode = parse_choice<Mode>(v, line, key,
            {{"shadowing", Mode::Shadowing}, {"force", Mode::ForceControl}});
        };
      t["spring_mode"] = [](Scenario & sc, std::string_view v, std::size_t line, std::string_view key) {
          sc.spring_mode = parse_choice<SpringMode>(v, line, key,
            {{"corrected", SpringMode::Corrected}, {"verbatim", SpringMode::Verbatim}});
        };
      t["seed"] = [](Scenario & sc, std::string_view v, std::size_t line, std::string_view key) {
          const double x = parse_number(v, line, key);
          if (x < 0.0 || x != std::floor(x) || x > 9.007199254740992e15) {
            throw ParseError(line, "key 'seed': expected a non-negative integer");
          }
          sc.sensors.rng_seed = static_cast<std::uint64_t>(x);
        };

      t["params.M"] = number_into(&Scenario::params, &ModelParams::robot_mass);
      t["params.M_h"] = number_into(&Scenario::params, &ModelParams::hanging_mass);
      t["params.g"] = number_into(&Scenario::params, &ModelParams::gravity);
      t["params.k"] = number_into(&Scenario::params, &ModelParams::stiffness);
      t["params.b"] = number_into(&Scenario::params, &ModelParams::damping);
      t["params.epsilon"] = number_into(&Scenario::params, &ModelParams::blend_width);
      t["params.v_motor_max"] = number_into(&Scenario::params, &ModelParams::motor_speed_limit);
      t["params.F_cable_max"] = number_into(&Scenario::params, &ModelParams::cable_force_limit);
      t["params.y_travel"] = number_into(&Scenario::params, &ModelParams::travel);
      t["params.motor_tau"] = number_into(&Scenario::params, &ModelParams::motor_lag);

      t["sensors.encoder_resolution"] = number_into(&Scenario::sensors, &SensorConfig::encoder_resolution);
      t["sensors.loadcell_noise_std"] = number_into(&Scenario::sensors, &SensorConfig::loadcell_noise_std);
      t["sensors.velocity_cutoff"] = number_into(&Scenario::sensors, &SensorConfig::velocity_cutoff);

      t["shadow.d"] = number_into(&Scenario::shadow, &ShadowGains::offset);
      t["shadow.k_p"] = number_into(&Scenario::shadow, &ShadowGains::kp);
      t["shadow.k_ff"] = number_into(&Scenario::shadow, &ShadowGains::kff);

      t["force.omega_c"] = number_into(&Scenario::force, &ForceGains::cutoff);
      t["force.k_p"] = number_into(&Scenario::force, &ForceGains::kp);
      t["force.k_ff"] = number_into(&Scenario::force, &ForceGains::kff);

      t["recovery.tau"] = number_into(&Scenario::trajectory, &SetPointLimits::tau);
      t["recovery.v_max"] = number_into(&Scenario::trajectory, &SetPointLimits::max_velocity);
      t["recovery.a_max"] = number_into(&Scenario::trajectory, &SetPointLimits::max_accel);
      t["recovery.k_p"] = number_into(&Scenario::recovery, &RecoveryGains::kp);
      t["recovery.k_ff"] = number_into(&Scenario::recovery, &RecoveryGains::kff);
      t["recovery.safe_rise"] = number_into(&Scenario::recovery, &RecoveryGains::safe_rise);
      t["recovery.clearance"] = number_into(&Scenario::recovery, &RecoveryGains::clearance);
      t["recovery.dv_max"] = number_into(&Scenario::max_deflection_rate);
      t["recovery.init_source"] = [](Scenario & sc, std::string_view v, std::size_t line, std::string_view key) {
          sc.init_source = parse_choice<InitSource>(v, line, key,
            {{"planarizer", InitSource::Planarizer}, {"robot", InitSource::Robot}});
        };

      t["robot.drive"] = [](Scenario & sc, std::string_view v, std::size_t line, std::string_view key) {
          sc.robot_drive = parse_choice<RobotDrive>(v, line, key,
            {{"scripted", RobotDrive::Scripted}, {"free", RobotDrive::Free}});
        };
      t["robot.waveform"] = [](Scenario & sc, std::string_view v, std::size_t line, std::string_view key) {
          sc.robot_motion.shape = parse_choice<Waveform::Shape>(v, line, key,
            {{"constant", Waveform::Shape::Constant}, {"sine", Waveform::Shape::Sine}});
        };
      t["robot.offset"] = number_into(&Scenario::robot_motion, &Waveform::offset);
      t["robot.amplitude"] = number_into(&Scenario::robot_motion, &Waveform::amplitude);
      t["robot.frequency"] = number_into(&Scenario::robot_motion, &Waveform::frequency);
      t["robot.phase"] = number_into(&Scenario::robot_motion, &Waveform::phase);
      t["robot.y0"] = number_into(&Scenario::robot_y0);
      t["robot.v0"] = number_into(&Scenario::robot_v0);
      t["planarizer.y0"] = [](Scenario & sc, std::string_view v, std::size_t line, std::string_view key) {
          sc.planarizer_y0 = parse_number(v, line, key);
        };

      t["f_ext.type"] = [](Scenario & sc, std::string_view v, std::size_t line, std::string_view key) {
          using K = ExternalForce::Kind;
          sc.external_force.kind = parse_choice<K>(v, line, key,
            {{"none", K::None}, {"steps", K::Steps}, {"linear", K::Linear}, {"sine", K::Sine},
              {"ground", K::Ground}});
          sc.external_force.wave.shape =
            sc.external_force.kind == K::Sine ? Waveform::Shape::Sine : Waveform::Shape::Constant;
        };
      t["f_ext.points"] = [](Scenario & sc, std::string_view v, std::size_t line, std::string_view key) {
          sc.external_force.points = parse_series(v, line, key);
        };
      t["f_ext.offset"] = [](Scenario & sc, std::string_view v, std::size_t line, std::string_view key) {
          sc.external_force.wave.offset = parse_number(v, line, key);
        };
      t["f_ext.amplitude"] = [](Scenario & sc, std::string_view v, std::size_t line, std::string_view key) {
          sc.external_force.wave.amplitude = parse_number(v, line, key);
        };
      t["f_ext.frequency"] = [](Scenario & sc, std::string_view v, std::size_t line, std::string_view key) {
          sc.external_force.wave.frequency = parse_number(v, line, key);
        };
      t["f_ext.phase"] = [](Scenario & sc, std::string_view v, std::size_t line, std::string_view key) {
          sc.external_force.wave.phase = parse_number(v, line, key);
        };
      t["f_ext.ground_height"] = number_into(&Scenario::external_force, &ExternalForce::ground_height);
      t["f_ext.ground_stiffness"] = number_into(&Scenario::external_force, &ExternalForce::ground_stiffness);
      t["f_ext.ground_damping"] = number_into(&Scenario::external_force, &ExternalForce::ground_damping);

      t["f_des.steps"] = [](Scenario & sc, std::string_view v, std::size_t line, std::string_view key) {
          sc.desired_force = parse_series(v, line, key);
        };

      t["failure.time"] = [](Scenario & sc, std::string_view v, std::size_t line, std::string_view key) {
          const double when = parse_number(v, line, key);
          const auto kind = sc.failure_injection ? sc.failure_injection->kind : FailureCause::GroundProximity;
          sc.failure_injection = FailureInjection{when, kind};
        };
      t["failure.kind"] = [](Scenario & sc, std::string_view v, std::size_t line, std::string_view key) {
          const auto kind = parse_choice<FailureCause>(v, line, key,
            {{"ground", FailureCause::GroundProximity}, {"joint", FailureCause::JointFault}});
          // The kind alone does not schedule anything; failure.time does.
          const double when = sc.failure_injection ? sc.failure_injection->time : -1.0;
          sc.failure_injection = FailureInjection{when, kind};
        };
      t["failure.min_height"] = number_into(&Scenario::min_height);
      t["failure.points"] = [](Scenario & sc, std::string_view v, std::size_t line, std::string_view key) {
          sc.point_offsets.clear();
          for (auto item : split(v, ',')) {
            const auto parts = split(item, ':');
            if (parts.size() != 2 || parts[0].empty()) {
              throw ParseError(line, "key '" + std::string(key) + "': expected name:offset entries");
            }
            sc.point_offsets.emplace_back(std::string(parts[0]), parse_number(parts[1], line, key));
          }
        };
      t["failure.joints"] = [](Scenario & sc, std::string_view v, std::size_t line, std::string_view key) {
          sc.joint_limits.clear();
          for (auto item : split(v, ',')) {
            if (item.empty()) {continue;}
            const auto parts = split(item, ':');
            if (parts.size() != 3 || parts[0].empty()) {
              throw ParseError(line, "key '" + std::string(key) + "': expected name:low:high entries");
            }
            sc.joint_limits.push_back(
              {std::string(parts[0]), parse_number(parts[1], line, key), parse_number(parts[2], line, key)});
          }
        };
      t["failure.joint_angles"] = [](Scenario & sc, std::string_view v, std::size_t line, std::string_view key) {
          sc.joint_angles.clear();
          for (auto item : split(v, ',')) {
            if (item.empty()) {continue;}
            const auto parts = split(item, ':');
            if (parts.size() != 2 || parts[0].empty()) {
              throw ParseError(line, "key '" + std::string(key) + "': expected name:angle entries");
            }
            sc.joint_angles.push_back({std::string(parts[0]), parse_number(parts[1], line, key)});
          }
        };

      t["metrics.gap_accel_cutoff"] = number_into(&Scenario::gap_accel_cutoff_hz);
      t["metrics.settle_time"] = number_into(&Scenario::settle_time);
      return t;
    }();
  return table;
}

}  // namespace detail

inline std::vector<std::string> scenario_keys()
{
  std::vector<std::string> keys;
  for (const auto & entry : detail::key_table()) {keys.push_back(entry.first);}
  return keys;
}

/// Parses and validates a scenario document.
///
/// One `key = value` per line; `#` starts a comment. Keys not listed in
/// scenario_keys() and repeated keys are parse errors. Omitted keys keep the
/// defaults of Scenario, which carry the RAM-one gains and parameters.
inline Scenario load_scenario(std::string_view text)
{
  Scenario sc;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    std::string_view line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {line = line.substr(0, hash);}
    line = detail::trim(line);
    if (line.empty()) {continue;}

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(line_no, "expected 'key = value', got '" + std::string(line) + "'");
    }
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    if (key.empty()) {throw ParseError(line_no, "missing key before '='");}

    const auto & table = detail::key_table();
    const auto it = table.find(key);
    if (it == table.end()) {throw ParseError(line_no, "unknown key '" + std::string(key) + "'");}
    if (!seen.insert(std::string(key)).second) {
      throw ParseError(line_no, "duplicate key '" + std::string(key) + "'");
    }
    if (value.empty()) {throw ParseError(line_no, "key '" + std::string(key) + "' has no value");}
    it->second(sc, value, line_no, key);
  }

  if (sc.failure_injection && sc.failure_injection->time < 0.0) {
    throw ValidationError("failure.time", "failure.kind given without failure.time");
  }
  // Joint angles default to mid-range for limits without an explicit angle.
  if (seen.contains("failure.joints") && !seen.contains("failure.joint_angles")) {
    sc.joint_angles.clear();
    for (const auto & l : sc.joint_limits) {sc.joint_angles.push_back({l.name, 0.5 * (l.low + l.high)});}
  }
  sc.validate();
  return sc;
}

inline std::string read_text_file(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {throw IoError("cannot open '" + path + "'");}
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline Scenario load_scenario_file(const std::string & path)
{
  return load_scenario(read_text_file(path));
}

}  // namespace catchsim

#endif  // CATCHSIM__SCENARIO_HPP_
