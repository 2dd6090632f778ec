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

// Point-to-point repositioning scenario: plan the motor command with each
// strategy, simulate the belt from rest, and score the residual oscillation.

#ifndef FLYBELT_SCENARIO_HPP_
#define FLYBELT_SCENARIO_HPP_

#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "flybelt/design.hpp"
#include "flybelt/modal_set.hpp"
#include "flybelt/motion.hpp"
#include "flybelt/plant.hpp"
#include "flybelt/simulate.hpp"

namespace flybelt {

struct ScenarioConfig {
  PlantParams plant;
  double from = 0.0;                    // rad
  double to = std::numbers::pi;         // rad
  double dt = 1e-3;                     // integrator step, s
  double horizon = 12.0;                // simulated time, s
  double ts = 0.01;                     // command sampling period, s
  double rate_limit = std::numbers::pi / 3.0;  // constant-velocity strategy, rad/s
  Poly3Limits poly = Poly3Limits::defaults();
  ModalSet modes;                       // shaper design model
  double time_optimal_sf = 0.0;
  double h2_sf = 0.15;
  double settle_band_deg = 2.0;
  double settle_hold = 2.5;             // s inside the band before the record ends
  std::vector<Strategy> strategies = {Strategy::kConstVelocity, Strategy::kPolynomial,
                                      Strategy::kTimeOptimalShaped, Strategy::kH2Shaped};

  void validate() const;
};

// Residual-oscillation measures, angles in degrees.
//
// The window opens when the commanded angle reaches its final value and runs
// to the end of the record. Torsion error is eps2 - eps2(0) minus the
// commanded rotation; nutation error is theta2 - theta2(0), which removes the
// static tilt of an unbalanced belt.
struct StrategyMetrics {
  double torsion_pkpk = 0.0;
  double torsion_rms = 0.0;
  double nutation_pkpk = 0.0;
  double nutation_rms = 0.0;
  double transient_time = 0.0;  // command arrival, s
  // First time after which |torsion error| stays within the band; empty unless
  // the record then continues inside it for at least the hold time.
  std::optional<double> settling_time;
};

StrategyMetrics compute_metrics(const SimOutput& out, double settle_band_deg = 2.0,
                                double settle_hold = 2.5);

struct StrategyRun {
  Strategy strategy = Strategy::kCustom;
  MotionProfile command;
  SimOutput sim;
  StrategyMetrics metrics;
};

// Designs the shapers needed by the config (at most once each).
struct ScenarioShapers {
  std::optional<ShaperDesign> time_optimal;
  std::optional<ShaperDesign> h2;
};
ScenarioShapers design_scenario_shapers(const ScenarioConfig& cfg);

MotionProfile plan_command(Strategy s, const ScenarioConfig& cfg, const ScenarioShapers& shapers);

// Settled equilibrium of the configured plant with the motor at `from`.
SystemState scenario_initial_state(const ScenarioConfig& cfg);

StrategyRun run_strategy(Strategy s, const ScenarioConfig& cfg, const ScenarioShapers& shapers,
                         const SystemState& initial);

std::vector<StrategyRun> run_scenario(const ScenarioConfig& cfg);

// Versioned JSON report. `failure` marks an interrupted run.
std::string metrics_json(const ScenarioConfig& cfg, const std::vector<StrategyRun>& runs,
                         const std::optional<std::string>& failure = std::nullopt);

}  // namespace flybelt

#endif  // FLYBELT_SCENARIO_HPP_
