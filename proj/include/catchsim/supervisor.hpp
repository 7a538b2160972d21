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

#ifndef CATCHSIM__SUPERVISOR_HPP_
#define CATCHSIM__SUPERVISOR_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "catchsim/dynamics.hpp"
#include "catchsim/errors.hpp"
#include "catchsim/sensors.hpp"

namespace catchsim
{

enum class Mode { Shadowing, ForceControl, Recovery, Hold };
enum class FailureCause { GroundProximity, JointFault };
enum class ViolationKind { AccelBound, LiftOff, CableForce };

// Where the set-point filter takes its initial position and velocity from.
enum class InitSource { Planarizer, Robot };

inline std::string_view to_string(Mode m)
{
  switch (m) {
    case Mode::Shadowing: return "shadowing";
    case Mode::ForceControl: return "force";
    case Mode::Recovery: return "recovery";
    case Mode::Hold: return "hold";
  }
  return "?";
}

inline std::optional<Mode> mode_from_string(std::string_view s)
{
  for (Mode m : {Mode::Shadowing, Mode::ForceControl, Mode::Recovery, Mode::Hold}) {
    if (to_string(m) == s) {return m;}
  }
  return std::nullopt;
}

inline std::string_view to_string(FailureCause c)
{
  return c == FailureCause::GroundProximity ? "ground_proximity" : "joint_fault";
}

inline std::string_view to_string(ViolationKind k)
{
  switch (k) {
    case ViolationKind::AccelBound: return "accel_bound";
    case ViolationKind::LiftOff: return "lift_off";
    case ViolationKind::CableForce: return "cable_force";
  }
  return "?";
}

struct MonitoredPoint
{
  std::string name;
  std::function<double(const PlantState &)> height;

  // Point riding at a fixed vertical offset from the robot reference.
  static MonitoredPoint offset_from_robot(std::string name, double offset)
  {
    return MonitoredPoint{std::move(name), [offset](const PlantState & s) {return s.robot_pos + offset;}};
  }
};

struct JointLimit
{
  std::string name;
  double low;    // rad
  double high;   // rad
};

struct JointAngle
{
  std::string name;
  double angle;  // rad
};

struct FailureConfig
{
  std::vector<MonitoredPoint> points;
  double min_height{0.05};
  std::vector<JointLimit> joints;
  InitSource init_source{InitSource::Planarizer};

  void validate() const
  {
    if (points.empty()) {throw ValidationError("failure.points", "at least one monitored point required");}
    if (!(min_height >= 0.0)) {throw ValidationError("failure.min_height", "must be >= 0");}
    for (const auto & j : joints) {
      if (!(j.low < j.high)) {throw ValidationError("failure.joints", "limit '" + j.name + "' needs low < high");}
    }
  }
};

struct Violation
{
  double time;
  ViolationKind kind;
  double value;
};

struct SupervisorState
{
  Mode mode{Mode::Shadowing};
  std::optional<FailureCause> failure_cause;
  std::optional<double> failure_time;
  bool robot_motors_halted{false};
  std::vector<Violation> violations;
  bool spring_engaged{false};   // spring stretched at least once since the catch began

  static SupervisorState start(Mode initial)
  {
    SupervisorState s;
    s.mode = initial;
    return s;
  }
};

struct AuxSignals
{
  std::vector<double> point_heights;
  std::vector<JointAngle> joint_angles;
};

struct SpfSeed
{
  double position;
  double velocity;
};

// Set-point filter output and its final target, needed for the Hold hand-off.
struct RecoveryProgress
{
  double ref_pos;
  double ref_vel;
  double target;
};

struct SupervisorActions
{
  bool halt_robot{false};
  std::optional<SpfSeed> init_spf;
  Mode active_mode{Mode::Shadowing};
};

struct SupervisorStep
{
  SupervisorState state;
  SupervisorActions actions;
};

inline constexpr double kHoldPositionTolerance = 1e-3;   // m
inline constexpr double kHoldVelocityTolerance = 1e-3;   // m/s

// Strict: a point exactly at min_height is not a failure.
inline bool check_ground_failure(std::span<const double> point_heights, double min_height)
{
  if (point_heights.empty()) {throw EmptyPointList();}
  return *std::min_element(point_heights.begin(), point_heights.end()) < min_height;
}

inline bool check_joint_fault(std::span<const JointAngle> angles, const FailureConfig & cfg)
{
  bool fault = false;
  for (const auto & a : angles) {
    auto it = std::find_if(cfg.joints.begin(), cfg.joints.end(), [&](const JointLimit & l) {return l.name == a.name;});
    if (it == cfg.joints.end()) {throw UnknownJoint(a.name);}
    fault = fault || a.angle < it->low || a.angle > it->high;
  }
  return fault;
}

inline bool is_catch_mode(Mode m) { return m == Mode::Recovery || m == Mode::Hold; }

inline SupervisorStep supervisor_step(
  SupervisorState sup, const SensorReadings & readings, const AuxSignals & aux,
  const FailureConfig & cfg, double t, std::optional<RecoveryProgress> progress = std::nullopt)
{
  SupervisorActions actions;
  if (sup.mode == Mode::Shadowing || sup.mode == Mode::ForceControl) {
    const bool ground = check_ground_failure(aux.point_heights, cfg.min_height);
    const bool joint = check_joint_fault(aux.joint_angles, cfg);
    if (ground || joint) {
      sup.failure_cause = ground ? FailureCause::GroundProximity : FailureCause::JointFault;
      sup.failure_time = t;
      sup.robot_motors_halted = true;
      sup.mode = Mode::Recovery;
      actions.init_spf = cfg.init_source == InitSource::Planarizer ?
        SpfSeed{readings.planarizer_pos, readings.planarizer_vel} :
        SpfSeed{readings.robot_pos, readings.robot_vel};
    }
  } else if (sup.mode == Mode::Recovery && progress) {
    if (std::abs(progress->ref_pos - progress->target) < kHoldPositionTolerance &&
      std::abs(progress->ref_vel) < kHoldVelocityTolerance)
    {
      sup.mode = Mode::Hold;
    }
  }
  actions.halt_robot = sup.robot_motors_halted;
  actions.active_mode = sup.mode;
  return {std::move(sup), actions};
}

// Logs recovery-time constraint breaches. Never changes the mode.
inline SupervisorState monitor_constraints(
  SupervisorState sup, const PlantState & s, double robot_accel_now, double spring_force_now,
  const ModelParams & p, double bound)
{
  if (!is_catch_mode(sup.mode)) {return sup;}
  if (robot_accel_now <= bound) {
    sup.violations.push_back({s.time, ViolationKind::AccelBound, robot_accel_now});
  }
  const double dy = s.deflection();
  if (dy > 0.0) {
    sup.spring_engaged = true;
  } else if (sup.spring_engaged) {
    sup.violations.push_back({s.time, ViolationKind::LiftOff, dy});
  }
  if (spring_force_now > p.cable_force_limit) {
    sup.violations.push_back({s.time, ViolationKind::CableForce, spring_force_now});
  }
  return sup;
}

}  // namespace catchsim

#endif  // CATCHSIM__SUPERVISOR_HPP_
