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

// The three planarizer velocity laws. None of them saturate; the motor model
// does, so telemetry keeps the demanded velocity.

#ifndef CATCHSIM__CONTROLLERS_HPP_
#define CATCHSIM__CONTROLLERS_HPP_

namespace catchsim
{

struct ShadowGains
{
  double offset{0.02};   // m, planarizer trails the robot by this much
  double kp{5.0};        // 1/s
  double kff{1.0};
};

struct ForceGains
{
  double cutoff{100.0};  // rad/s, load-cell low-pass
  double kp{0.002};      // m/(N*s)
  double kff{1.0};
};

struct RecoveryGains
{
  double kp{5.0};            // 1/s
  double kff{1.0};
  double safe_rise{0.08};    // m above the failure height
  double clearance{0.005};   // m, added to the lift target beyond safe_rise
};

// Proportional tracking of (robot - offset) with robot velocity feed-forward.
inline double shadowing_cmd(double robot_pos, double robot_vel, double planarizer_pos, const ShadowGains & g)
{
  return g.kp * (robot_pos - g.offset - planarizer_pos) + g.kff * robot_vel;
}

inline double force_cmd(double filtered_force, double desired_force, double robot_vel, const ForceGains & g)
{
  return g.kp * (desired_force - filtered_force) + g.kff * robot_vel;
}

inline double recovery_cmd(double ref_pos, double ref_vel, double planarizer_pos, const RecoveryGains & g)
{
  return g.kp * (ref_pos - planarizer_pos) + g.kff * ref_vel;
}

}  // namespace catchsim

#endif  // CATCHSIM__CONTROLLERS_HPP_
