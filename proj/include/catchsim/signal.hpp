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

#ifndef CATCHSIM__SIGNAL_HPP_
#define CATCHSIM__SIGNAL_HPP_

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>

namespace catchsim
{

// First-order low-pass 1/(s/cutoff + 1).
struct LowPass
{
  double value{0.0};
  double cutoff{1.0};   // rad/s
};

// Zero-order-hold discretization; exact for inputs held over the step.
inline LowPass lowpass_step(LowPass state, double input, double dt)
{
  const double alpha = 1.0 - std::exp(-state.cutoff * dt);
  state.value += alpha * (input - state.value);
  return state;
}

struct SetPointLimits
{
  double tau{0.0833};          // s
  double max_velocity{0.5};    // m/s
  double max_accel{5.0};       // m/s^2
};

/// Critically damped second-order reference shaper with acceleration and
/// velocity saturation.
///
/// Linear part is k / (s^2 + b s + k) with k = 1/tau^2 and b = 2/tau, i.e.
/// 1/(tau s + 1)^2. The acceleration is clamped before the velocity
/// integrator and the velocity is clamped before the position integrator,
/// so both limits hold exactly at every sample.
struct SetPointFilter
{
  double position{0.0};
  double velocity{0.0};
  SetPointLimits limits{};

  double stiffness() const { return 1.0 / (limits.tau * limits.tau); }
  double damping() const { return 2.0 / limits.tau; }
};

// The velocity is not clamped here; the first step does it, so a start from
// an over-speed state stays bumpless in position.
inline SetPointFilter spf_init(double position, double velocity, const SetPointLimits & limits)
{
  return SetPointFilter{position, velocity, limits};
}

inline SetPointFilter spf_step(SetPointFilter s, double target, double dt)
{
  const double a_max = s.limits.max_accel;
  const double v_max = s.limits.max_velocity;
  const double accel = std::clamp(s.stiffness() * (target - s.position) - s.damping() * s.velocity, -a_max, a_max);
  s.velocity = std::clamp(s.velocity + accel * dt, -v_max, v_max);
  s.position += s.velocity * dt;
  return s;
}

// Backward difference through a low-pass.
inline std::pair<double, LowPass> velocity_estimate(double previous, double current, double dt, LowPass filter)
{
  filter = lowpass_step(filter, (current - previous) / dt, dt);
  return {filter.value, filter};
}

// Stateful wrapper that remembers the previous sample. The first sample only
// primes the history and returns the seeded filter value.
class VelocityEstimator
{
public:
  explicit VelocityEstimator(double cutoff, double initial_velocity = 0.0)
  : filter_{initial_velocity, cutoff}
  {
  }

  double update(double position, double dt)
  {
    if (previous_) {
      filter_ = velocity_estimate(*previous_, position, dt, filter_).second;
    }
    previous_ = position;
    return filter_.value;
  }

  double value() const { return filter_.value; }

private:
  LowPass filter_;
  std::optional<double> previous_;
};

}  // namespace catchsim

#endif  // CATCHSIM__SIGNAL_HPP_
