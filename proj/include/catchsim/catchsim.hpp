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

// Umbrella header.

#ifndef CATCHSIM__CATCHSIM_HPP_
#define CATCHSIM__CATCHSIM_HPP_

#include "catchsim/controllers.hpp"
#include "catchsim/dynamics.hpp"
#include "catchsim/errors.hpp"
#include "catchsim/metrics.hpp"
#include "catchsim/scenario.hpp"
#include "catchsim/sensors.hpp"
#include "catchsim/signal.hpp"
#include "catchsim/simulation.hpp"
#include "catchsim/supervisor.hpp"
#include "catchsim/telemetry.hpp"

#endif  // CATCHSIM__CATCHSIM_HPP_
