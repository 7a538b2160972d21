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

// Vertical plant of the cable-and-spring support: the robot as a point mass
// hanging on a unidirectional series spring whose far end is driven by the
// planarizer motor (a saturated velocity source).

#ifndef CATCHSIM__DYNAMICS_HPP_
#define CATCHSIM__DYNAMICS_HPP_

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

#include "catchsim/errors.hpp"

namespace catchsim
{

struct ModelParams
{
  double robot_mass{11.07};          // kg
  double hanging_mass{0.45};         // kg, counterweight keeping the cable taut
  double gravity{9.81};              // m/s^2
  double stiffness{5250.0};          // N/m
  double damping{300.0};             // N*s/m
  double blend_width{1e-3};          // m, width of the slack/taut transition band
  double motor_speed_limit{2.4};     // m/s
  double cable_force_limit{500.0};   // N, monitored only
  double travel{0.9};                // m, usable vertical travel
  double motor_lag{0.0};             // s, first-order motor lag; 0 = ideal velocity source

  void validate() const
  {
    auto require = [](bool ok, const char * field, const char * what) {
        if (!ok) {throw ValidationError(field, what);}
      };
    require(std::isfinite(robot_mass) && robot_mass > hanging_mass, "params.M", "must exceed params.M_h");
    require(std::isfinite(hanging_mass) && hanging_mass > 0.0, "params.M_h", "must be > 0");
    require(std::isfinite(gravity) && gravity >= 0.0, "params.g", "must be >= 0");
    require(std::isfinite(stiffness) && stiffness > 0.0, "params.k", "must be > 0");
    require(std::isfinite(damping) && damping >= 0.0, "params.b", "must be >= 0");
    require(std::isfinite(blend_width) && blend_width > 0.0, "params.epsilon", "must be > 0");
    require(std::isfinite(motor_speed_limit) && motor_speed_limit > 0.0, "params.v_motor_max", "must be > 0");
    require(std::isfinite(cable_force_limit) && cable_force_limit > 0.0, "params.F_cable_max", "must be > 0");
    require(std::isfinite(travel) && travel > 0.0, "params.y_travel", "must be > 0");
    require(std::isfinite(motor_lag) && motor_lag >= 0.0, "params.motor_tau", "must be >= 0");
  }
};

// Verbatim keeps the original constitutive law sign-for-sign (it is
// discontinuous at zero deflection). Corrected is C1 in the deflection.
enum class SpringMode { Verbatim, Corrected };

inline std::string_view to_string(SpringMode mode)
{
  return mode == SpringMode::Verbatim ? "verbatim" : "corrected";
}

struct PlantState
{
  double time{0.0};
  double robot_pos{0.0};
  double robot_vel{0.0};
  double planarizer_pos{0.0};   // motor position mapped into robot coordinates
  double planarizer_vel{0.0};

  // Spring deflection; positive means the cable is stretched.
  double deflection() const { return planarizer_pos - robot_pos; }
  double deflection_rate() const { return planarizer_vel - robot_vel; }

  bool is_finite() const
  {
    return std::isfinite(time) && std::isfinite(robot_pos) && std::isfinite(robot_vel) &&
           std::isfinite(planarizer_pos) && std::isfinite(planarizer_vel);
  }
};

// Net load of gravity on the robot less the hanging-mass counterweight.
inline double modified_gravity(const ModelParams & p)
{
  return p.gravity * (p.robot_mass - p.hanging_mass);
}

inline double spring_force(double deflection, double rate, const ModelParams & p, SpringMode mode)
{
  const double eps = p.blend_width;
  if (deflection > 0.0) {
    return p.stiffness * deflection + p.damping * rate;
  }
  if (deflection < -eps) {
    return 0.0;
  }
  const double r = deflection / eps;
  const double blend = 1.0 - 2.0 * r * r * r - 3.0 * r * r;
  if (mode == SpringMode::Verbatim) {
    return p.stiffness * deflection - p.damping * blend * rate;
  }
  // Cubic elastic blend: value 0 at both ends, slope k at 0 and 0 at -eps.
  const double elastic = p.stiffness * deflection * (1.0 + r) * (1.0 + r);
  return elastic + p.damping * blend * rate;
}

inline double robot_accel(
  const PlantState & s, double external_force, const ModelParams & p, SpringMode mode)
{
  const double f_spring = spring_force(s.deflection(), s.deflection_rate(), p, mode);
  return (f_spring + external_force - modified_gravity(p)) / p.robot_mass;
}

// Upper bound on the damping force for a given bound on the deflection rate.
inline double damping_bound(double damping, double max_deflection_rate)
{
  return damping * max_deflection_rate;
}

// Lowest robot acceleration that keeps the spring stretched when the damping
// force is bounded by `damping_force_bound`.
inline double accel_bound(const ModelParams & p, double damping_force_bound)
{
  return -modified_gravity(p) / p.robot_mass + damping_force_bound / p.robot_mass;
}

// Closed-form planarizer trajectory over one step for a constant command.
// With no lag the velocity jumps to the saturated command; with a lag it
// relaxes toward it exponentially.
struct MotorSegment
{
  double start_pos;
  double start_vel;
  double target_vel;
  double lag;

  double velocity(double s) const
  {
    if (lag <= 0.0) {return target_vel;}
    return target_vel + (start_vel - target_vel) * std::exp(-s / lag);
  }
  double position(double s) const
  {
    if (lag <= 0.0) {return start_pos + target_vel * s;}
    return start_pos + target_vel * s + (start_vel - target_vel) * lag * (1.0 - std::exp(-s / lag));
  }
};

inline MotorSegment motor_segment(const PlantState & s, double motor_cmd, const ModelParams & p)
{
  const double vmax = p.motor_speed_limit;
  const double target = std::clamp(motor_cmd, -vmax, vmax);
  return MotorSegment{s.planarizer_pos, std::clamp(s.planarizer_vel, -vmax, vmax), target, p.motor_lag};
}

inline void ensure_finite(const PlantState & s)
{
  if (!s.is_finite()) {
    throw NonFiniteState("plant state became non-finite at t = " + std::to_string(s.time));
  }
}

// Advances the plant by `dt` with classical RK4 on the robot coordinates.
// `external_force(t, robot_pos, robot_vel)` is the ground reaction on the feet.
template<class ExternalForce>
PlantState step_physics(
  const PlantState & s, double motor_cmd, ExternalForce && external_force, double dt,
  const ModelParams & p, SpringMode mode)
{
  if (!(dt > 0.0) || dt > 1e-3 + 1e-15) {
    throw std::invalid_argument("physics step must be in (0, 1 ms]");
  }
  const MotorSegment motor = motor_segment(s, motor_cmd, p);
  const double f_grav = modified_gravity(p);

  auto accel = [&](double offset, double pos, double vel) {
      const double f_spring = spring_force(motor.position(offset) - pos, motor.velocity(offset) - vel, p, mode);
      return (f_spring + external_force(s.time + offset, pos, vel) - f_grav) / p.robot_mass;
    };

  const double y0 = s.robot_pos;
  const double v0 = s.robot_vel;
  const double h = dt;

  const double k1y = v0;
  const double k1v = accel(0.0, y0, v0);
  const double k2y = v0 + 0.5 * h * k1v;
  const double k2v = accel(0.5 * h, y0 + 0.5 * h * k1y, k2y);
  const double k3y = v0 + 0.5 * h * k2v;
  const double k3v = accel(0.5 * h, y0 + 0.5 * h * k2y, k3y);
  const double k4y = v0 + h * k3v;
  const double k4v = accel(h, y0 + h * k3y, k4y);

  PlantState out;
  out.time = s.time + dt;
  out.robot_pos = y0 + h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
  out.robot_vel = v0 + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  out.planarizer_pos = motor.position(dt);
  out.planarizer_vel = motor.velocity(dt);
  ensure_finite(out);
  return out;
}

// Clamps both carriages to the usable travel. Returns true if a stop was hit.
inline bool enforce_travel_limits(PlantState & s, const ModelParams & p)
{
  bool hit = false;
  auto clamp_axis = [&](double & pos, double & vel) {
      if (pos < 0.0) {
        pos = 0.0;
        vel = std::max(vel, 0.0);
        hit = true;
      } else if (pos > p.travel) {
        pos = p.travel;
        vel = std::min(vel, 0.0);
        hit = true;
      }
    };
  clamp_axis(s.robot_pos, s.robot_vel);
  clamp_axis(s.planarizer_pos, s.planarizer_vel);
  return hit;
}

}  // namespace catchsim

#endif  // CATCHSIM__DYNAMICS_HPP_
