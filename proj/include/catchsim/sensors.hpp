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

#ifndef CATCHSIM__SENSORS_HPP_
#define CATCHSIM__SENSORS_HPP_

#include <cmath>
#include <cstdint>
#include <random>

#include "catchsim/dynamics.hpp"
#include "catchsim/signal.hpp"

namespace catchsim
{

struct SensorConfig
{
  double encoder_resolution{1e-5};    // m
  double loadcell_noise_std{0.0};     // N
  double velocity_cutoff{200.0};      // rad/s
  std::uint64_t rng_seed{0};

  void validate() const
  {
    if (!(encoder_resolution >= 0.0) || !std::isfinite(encoder_resolution)) {
      throw ValidationError("sensors.encoder_resolution", "must be >= 0");
    }
    if (!(loadcell_noise_std >= 0.0) || !std::isfinite(loadcell_noise_std)) {
      throw ValidationError("sensors.loadcell_noise_std", "must be >= 0");
    }
    if (!(velocity_cutoff > 0.0) || !std::isfinite(velocity_cutoff)) {
      throw ValidationError("sensors.velocity_cutoff", "must be > 0");
    }
  }
};

struct SensorReadings
{
  double robot_pos{0.0};
  double planarizer_pos{0.0};
  double robot_vel{0.0};        // estimated
  double planarizer_vel{0.0};   // estimated
  double force{0.0};            // raw load cell
};

// Incremental-encoder quantization (floor). The small bias keeps exact
// multiples of the resolution from dropping a count to rounding error.
inline double quantize(double value, double resolution)
{
  if (resolution <= 0.0) {return value;}
  return std::floor(value / resolution + 1e-9) * resolution;
}

class SensorModel
{
public:
  SensorModel(const SensorConfig & cfg, double robot_vel0 = 0.0, double planarizer_vel0 = 0.0)
  : cfg_(cfg),
    rng_(cfg.rng_seed),
    robot_est_(cfg.velocity_cutoff, robot_vel0),
    planarizer_est_(cfg.velocity_cutoff, planarizer_vel0)
  {
  }

  SensorReadings sample(const PlantState & s, double true_force, double dt)
  {
    SensorReadings r;
    r.robot_pos = quantize(s.robot_pos, cfg_.encoder_resolution);
    r.planarizer_pos = quantize(s.planarizer_pos, cfg_.encoder_resolution);
    r.robot_vel = robot_est_.update(r.robot_pos, dt);
    r.planarizer_vel = planarizer_est_.update(r.planarizer_pos, dt);
    r.force = true_force;
    if (cfg_.loadcell_noise_std > 0.0) {
      r.force += cfg_.loadcell_noise_std * normal_(rng_);
    }
    return r;
  }

private:
  SensorConfig cfg_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  VelocityEstimator robot_est_;
  VelocityEstimator planarizer_est_;
};

}  // namespace catchsim

#endif  // CATCHSIM__SENSORS_HPP_
