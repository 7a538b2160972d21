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

// Bundled reproduction scenarios. Kept byte-identical to scenarios/*.cfg
// (checked by test_suite).

#ifndef CATCHSIM__SUITE_SCENARIOS_HPP_
#define CATCHSIM__SUITE_SCENARIOS_HPP_

#include <string_view>

namespace catchsim::suite
{

inline constexpr std::string_view kShadowingScenario = R"cfg(# Transparent shadowing: the robot is moved up and down by hand while the
# planarizer trails it by d without loading the cable.
name = shadowing
duration = 10
dt_control = 0.001
dt_physics = 0.0001
mode = shadowing
seed = 1

robot.drive = scripted
robot.waveform = sine
robot.offset = 0.3
robot.amplitude = 0.1
robot.frequency = 0.25

shadow.d = 0.02
shadow.k_p = 5
shadow.k_ff = 1
)cfg";

inline constexpr std::string_view kForceStepsScenario = R"cfg(# Vertical force control on a supported robot: one-second force steps.
name = force_steps
duration = 4
dt_control = 0.001
dt_physics = 0.0001
mode = force
seed = 7

robot.drive = scripted
robot.waveform = constant
robot.offset = 0.3

force.omega_c = 100
force.k_p = 0.002
force.k_ff = 1
f_des.steps = 0:10, 1:20, 2:50, 3:30
sensors.loadcell_noise_std = 1.5
)cfg";

inline constexpr std::string_view kRecoveryScenario = R"cfg(# Catch and lift: the robot stands on the ground while being shadowed; a knee
# touches down at t = 2 s, the robot motors halt and the planarizer lifts it.
name = recovery
duration = 3.5
dt_control = 0.001
dt_physics = 0.0001
mode = shadowing
seed = 3

robot.drive = free
# resting on the ground contact: 0.3 - F_g / ground_stiffness
robot.y0 = 0.299479089
f_ext.type = ground
f_ext.ground_height = 0.3
f_ext.ground_stiffness = 200000
f_ext.ground_damping = 3000

failure.time = 2.0
failure.kind = ground

recovery.tau = 0.0833
recovery.v_max = 0.5
recovery.a_max = 5
recovery.k_p = 5
recovery.k_ff = 1
recovery.safe_rise = 0.08
)cfg";

}  // namespace catchsim::suite

#endif  // CATCHSIM__SUITE_SCENARIOS_HPP_
