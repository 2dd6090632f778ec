// Copyright 2026 The flybelt Authors
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

#ifndef FLYBELT_SIMULATE_HPP_
#define FLYBELT_SIMULATE_HPP_

#include <array>
#include <string>
#include <vector>

#include "flybelt/multibody.hpp"
#include "flybelt/profile.hpp"

namespace flybelt {

struct SimOptions {
  double dt = 1e-3;
  // Simulated time. Negative means "until the profile ends".
  double horizon = -1.0;
  bool record_states = false;
  StepOptions step;
};

// Traces on the uniform integrator grid, first row at t = 0.
struct SimOutput {
  std::vector<double> t;
  std::vector<double> alpha;   // commanded motor angle, rad
  std::vector<double> eps2;    // torsion, rad, unwrapped
  std::vector<double> theta2;  // nutation, rad
  std::array<std::vector<double>, 3> tension;  // N, cables A..C
  std::vector<SystemState> states;             // only with record_states

  // Largest |c(q)| (all nine rows) seen after any accepted step.
  double max_constraint_residual = 0.0;
  // Largest |yaw1 - alpha| after any accepted step.
  double max_motor_error = 0.0;
  // Samples at which some cable tension was negative.
  std::size_t compression_samples = 0;

  std::size_t size() const { return t.size(); }
  double dt() const { return t.size() > 1 ? t[1] - t[0] : 0.0; }
};

// Drives the plant with the piecewise-linear profile. dt must divide the
// profile sampling period. Throws ValidationError otherwise.
SimOutput simulate(const MotionProfile& profile, const SystemState& initial,
                   const PlantParams& p, const SimOptions& opt = {});

// Same, with an arbitrary smooth motor trajectory over [0, duration].
SimOutput simulate(const MotorTrajectory& motor, double duration, const SystemState& initial,
                   const PlantParams& p, const SimOptions& opt = {});

// Continuous branch of a wrapped angle sequence.
void unwrap(std::vector<double>& angles);

// CSV with header t,alpha,eps2,theta2,tensionA,tensionB,tensionC.
std::string sim_output_csv(const SimOutput& out);

}  // namespace flybelt

#endif  // FLYBELT_SIMULATE_HPP_
