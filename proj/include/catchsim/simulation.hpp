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

// Closed-loop driver: sensors, filters, supervisor and control law at the
// control rate, with fixed physics substeps in between.

#ifndef CATCHSIM__SIMULATION_HPP_
#define CATCHSIM__SIMULATION_HPP_

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "catchsim/controllers.hpp"
#include "catchsim/dynamics.hpp"
#include "catchsim/errors.hpp"
#include "catchsim/metrics.hpp"
#include "catchsim/scenario.hpp"
#include "catchsim/sensors.hpp"
#include "catchsim/signal.hpp"
#include "catchsim/supervisor.hpp"
#include "catchsim/telemetry.hpp"

namespace catchsim
{

struct RunResult
{
  std::vector<TelemetryRecord> telemetry;
  MetricsReport metrics;
  SupervisorState supervisor;
};

// Thrown when the plant diverges. Carries the telemetry up to and including
// an `error=non_finite_state` row.
class SimulationAborted : public NonFiniteState
{
public:
  SimulationAborted(const std::string & what, std::vector<TelemetryRecord> partial)
  : NonFiniteState(what), partial_(std::move(partial))
  {
  }
  const std::vector<TelemetryRecord> & partial_telemetry() const { return partial_; }

private:
  std::vector<TelemetryRecord> partial_;
};

// Header comment lines written ahead of the telemetry CSV.
inline std::vector<std::string> telemetry_metadata(const Scenario & sc)
{
  return {
    "scenario = " + sc.name,
    "spring_mode = " + std::string(to_string(sc.spring_mode)),
    "seed = " + std::to_string(sc.sensors.rng_seed),
  };
}

namespace detail
{

inline PlantState initial_state(const Scenario & sc)
{
  PlantState s;
  if (sc.robot_drive == RobotDrive::Scripted) {
    s.robot_pos = sc.robot_motion.value(0.0);
    s.robot_vel = sc.robot_motion.rate(0.0);
  } else {
    s.robot_pos = sc.robot_y0;
    s.robot_vel = sc.robot_v0;
  }
  const double vmax = sc.params.motor_speed_limit;
  if (sc.planarizer_y0) {
    s.planarizer_pos = *sc.planarizer_y0;
  } else if (sc.initial_mode == Mode::ForceControl) {
    // Pre-tensioned to the first desired force.
    s.planarizer_pos = s.robot_pos + std::max(0.0, sc.desired_force_at(0.0)) / sc.params.stiffness;
  } else {
    s.planarizer_pos = s.robot_pos - sc.shadow.offset;
    s.planarizer_vel = std::clamp(s.robot_vel, -vmax, vmax);
  }
  return s;
}

inline void append_tag(std::string & event, std::string_view tag)
{
  if (!event.empty()) {event += ';';}
  event += tag;
}

}  // namespace detail

/// Runs a validated scenario to completion.
///
/// Per control tick: sample sensors, update the force filter, run the
/// supervisor, step the set-point filter when recovering, evaluate the active
/// law, log a row, then integrate dt_control / dt_physics physics substeps.
/// Telemetry has tick_count() + 1 rows, the first at t = 0.
inline RunResult run(const Scenario & sc)
{
  const ModelParams & p = sc.params;
  const FailureConfig failure_cfg = sc.failure_config();
  const std::size_t ticks = sc.tick_count();
  const std::size_t substeps = sc.substeps();
  const double dt_c = sc.dt_control;
  const double dt_p = dt_c / static_cast<double>(substeps);
  const double bound = accel_bound(p, damping_bound(p.damping, sc.max_deflection_rate));
  const bool scripted = sc.robot_drive == RobotDrive::Scripted;
  auto external = [&sc](double t, double y, double v) {return sc.external_force(t, y, v);};

  PlantState state = detail::initial_state(sc);
  SensorModel sensors(sc.sensors, state.robot_vel, state.planarizer_vel);
  LowPass force_filter{spring_force(state.deflection(), state.deflection_rate(), p, sc.spring_mode),
    sc.force.cutoff};
  SupervisorState sup = SupervisorState::start(sc.initial_mode);
  std::optional<SetPointFilter> spf;
  double lift_target = 0.0;

  RunResult result;
  result.telemetry.reserve(ticks + 1);
  std::string pending_events;

  for (std::size_t n = 0; n <= ticks; ++n) {
    const double t = static_cast<double>(n) * dt_c;
    state.time = t;
    TelemetryRecord row;
    row.event = std::move(pending_events);
    pending_events.clear();

    try {
      const double f_true = spring_force(state.deflection(), state.deflection_rate(), p, sc.spring_mode);
      const SensorReadings readings = sensors.sample(state, f_true, dt_c);
      if (n > 0) {force_filter = lowpass_step(force_filter, readings.force, dt_c);}

      AuxSignals aux;
      for (const auto & point : failure_cfg.points) {aux.point_heights.push_back(point.height(state));}
      aux.joint_angles = sc.joint_angles;
      if (sc.failure_injection && t + 1e-12 >= sc.failure_injection->time) {
        if (sc.failure_injection->kind == FailureCause::GroundProximity) {
          aux.point_heights.front() = 0.0;
        } else {
          const auto & name = aux.joint_angles.front().name;
          const auto limit = std::find_if(failure_cfg.joints.begin(), failure_cfg.joints.end(),
              [&](const JointLimit & l) {return l.name == name;});
          aux.joint_angles.front().angle = limit->high + 0.1;
        }
      }

      std::optional<RecoveryProgress> progress;
      if (spf) {progress = RecoveryProgress{spf->position, spf->velocity, lift_target};}
      const Mode before = sup.mode;
      auto step = supervisor_step(std::move(sup), readings, aux, failure_cfg, t, progress);
      sup = std::move(step.state);
      if (sup.mode != before) {
        if (sup.failure_cause && !is_catch_mode(before)) {
          detail::append_tag(row.event, "failure=" + std::string(to_string(*sup.failure_cause)));
        }
        detail::append_tag(row.event, "mode=" + std::string(to_string(sup.mode)));
      }

      if (step.actions.init_spf) {
        spf = spf_init(step.actions.init_spf->position, step.actions.init_spf->velocity, sc.trajectory);
        // The robot hangs F_g / k below the planarizer once lifted.
        lift_target = readings.robot_pos + sc.recovery.safe_rise + sc.recovery.clearance +
          modified_gravity(p) / p.stiffness;
      } else if (sup.mode == Mode::Recovery && spf) {
        spf = spf_step(*spf, lift_target, dt_c);
      } else if (sup.mode == Mode::Hold && spf) {
        spf->position = lift_target;
        spf->velocity = 0.0;
      }

      double cmd = 0.0;
      switch (sup.mode) {
        case Mode::Shadowing:
          cmd = shadowing_cmd(readings.robot_pos, readings.robot_vel, readings.planarizer_pos, sc.shadow);
          break;
        case Mode::ForceControl:
          cmd = force_cmd(force_filter.value, sc.desired_force_at(t), readings.robot_vel, sc.force);
          break;
        case Mode::Recovery:
        case Mode::Hold:
          cmd = recovery_cmd(spf->position, spf->velocity, readings.planarizer_pos, sc.recovery);
          break;
      }

      state.planarizer_vel = motor_segment(state, cmd, p).velocity(0.0);
      const double f_spring = spring_force(state.deflection(), state.deflection_rate(), p, sc.spring_mode);
      const double accel = scripted ? sc.robot_motion.accel(t) :
        robot_accel(state, external(t, state.robot_pos, state.robot_vel), p, sc.spring_mode);
      const std::size_t logged = sup.violations.size();
      sup = monitor_constraints(std::move(sup), state, accel, f_spring, p, bound);
      for (std::size_t i = logged; i < sup.violations.size(); ++i) {
        detail::append_tag(row.event, "violation=" + std::string(to_string(sup.violations[i].kind)));
      }

      row.time = t;
      row.robot_pos = state.robot_pos;
      row.robot_vel = state.robot_vel;
      row.planarizer_pos = state.planarizer_pos;
      row.planarizer_vel = state.planarizer_vel;
      row.deflection = state.deflection();
      row.spring_force = f_spring;
      row.force_raw = readings.force;
      row.force_filtered = force_filter.value;
      row.motor_cmd = cmd;
      row.mode = sup.mode;
      if (spf) {
        row.ref_pos = spf->position;
        row.ref_vel = spf->velocity;
      }
      result.telemetry.push_back(row);
      if (n == ticks) {break;}

      bool hit_stop = false;
      for (std::size_t i = 0; i < substeps; ++i) {
        if (scripted) {
          const MotorSegment motor = motor_segment(state, cmd, p);
          const double t_next = t + static_cast<double>(i + 1) * dt_p;
          state.planarizer_pos = motor.position(dt_p);
          state.planarizer_vel = motor.velocity(dt_p);
          state.robot_pos = sc.robot_motion.value(t_next);
          state.robot_vel = sc.robot_motion.rate(t_next);
          state.time = t_next;
          ensure_finite(state);
        } else {
          state = step_physics(state, cmd, external, dt_p, p, sc.spring_mode);
        }
        hit_stop = enforce_travel_limits(state, p) || hit_stop;
      }
      if (hit_stop) {pending_events = "travel_limit";}
    } catch (const NonFiniteState & e) {
      // Takes the next tick slot so timestamps stay strictly increasing.
      TelemetryRecord err;
      err.time = static_cast<double>(result.telemetry.size()) * dt_c;
      err.robot_pos = state.robot_pos;
      err.robot_vel = state.robot_vel;
      err.planarizer_pos = state.planarizer_pos;
      err.planarizer_vel = state.planarizer_vel;
      err.deflection = state.deflection();
      err.mode = sup.mode;
      err.event = "error=non_finite_state";
      result.telemetry.push_back(std::move(err));
      throw SimulationAborted(e.what(), std::move(result.telemetry));
    }
  }

  result.metrics = compute_metrics(result.telemetry, sc);
  result.supervisor = std::move(sup);
  return result;
}

}  // namespace catchsim

#endif  // CATCHSIM__SIMULATION_HPP_
