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

// Tests for the repositioning scenario, its metrics and configuration files.

#include "flybelt/scenario.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "flybelt/config.hpp"
#include "flybelt/error.hpp"
#include "flybelt/motion.hpp"
#include "flybelt/multibody.hpp"

namespace flybelt {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRad = kPi / 180.0;

// Hand-built trace: alpha ramps 0 -> 1 rad over the first `ramp` samples,
// torsion follows `eps` (degrees, relative to the commanded rotation).
SimOutput trace(const std::vector<double>& eps_deg, std::size_t ramp, double dt = 0.5) {
  SimOutput out;
  const std::size_t n = eps_deg.size();
  for (std::size_t i = 0; i < n; ++i) {
    out.t.push_back(double(i) * dt);
    const double a = i >= ramp ? 1.0 : double(i) / double(ramp);
    out.alpha.push_back(a);
    out.eps2.push_back(a + eps_deg[i] * kRad);
    out.theta2.push_back(0.25 * kRad + (i % 2 ? 0.5 : -0.5) * kRad);
  }
  return out;
}

TEST(MetricsTest, WindowStartsAtCommandArrival) {
  // Samples 0..1 ramp; arrival at index 2 (t = 1.0). Window errors: 3, -1, 1, -3.
  const SimOutput out = trace({0.0, 10.0, 3.0, -1.0, 1.0, -3.0}, 2);
  const StrategyMetrics m = compute_metrics(out, 2.0, 0.0);
  EXPECT_DOUBLE_EQ(m.transient_time, 1.0);
  EXPECT_NEAR(m.torsion_pkpk, 6.0, 1e-12);
  EXPECT_NEAR(m.torsion_rms, std::sqrt((9.0 + 1.0 + 1.0 + 9.0) / 4.0), 1e-12);
  // Nutation relative to theta2(0) alternates between 0 and 1 degree.
  EXPECT_NEAR(m.nutation_pkpk, 1.0, 1e-12);
  EXPECT_NEAR(m.nutation_rms, std::sqrt(0.5), 1e-12);
}

TEST(MetricsTest, SettlingNeedsTheHoldTime) {
  // Last excursion beyond 2 deg at t = 1.0; inside the band from t = 1.5.
  const SimOutput out = trace({0.0, 0.0, 5.0, 1.0, 0.5, 0.1, 0.0, 0.0}, 2);
  const StrategyMetrics loose = compute_metrics(out, 2.0, 2.0);
  ASSERT_TRUE(loose.settling_time.has_value());
  EXPECT_DOUBLE_EQ(*loose.settling_time, 1.5);
  EXPECT_FALSE(compute_metrics(out, 2.0, 2.5).settling_time.has_value());
  // Never settles when the last sample is outside the band.
  EXPECT_FALSE(compute_metrics(trace({0.0, 0.0, 0.0, 3.0}, 2), 2.0, 0.0).settling_time);
  // The ramp itself lags the final angle, so a clean trace settles on arrival.
  EXPECT_DOUBLE_EQ(*compute_metrics(trace({0.0, 0.0, 1.0, 0.0}, 2), 2.0, 0.0).settling_time, 1.0);
}

TEST(MetricsTest, EmptyTraceGivesZeros) {
  const StrategyMetrics m = compute_metrics(SimOutput{});
  EXPECT_EQ(m.torsion_pkpk, 0.0);
  EXPECT_FALSE(m.settling_time.has_value());
}

TEST(ScenarioTest, ZeroLengthManeuverStaysAtRest) {
  ScenarioConfig cfg;
  cfg.from = cfg.to = 0.7;
  cfg.horizon = 6.0;
  const auto runs = run_scenario(cfg);
  ASSERT_EQ(runs.size(), 4u);
  for (const StrategyRun& r : runs) {
    EXPECT_LT(r.metrics.torsion_pkpk, 1e-6) << strategy_name(r.strategy);
    EXPECT_LT(r.metrics.nutation_pkpk, 1e-6) << strategy_name(r.strategy);
    EXPECT_EQ(r.command.target(), 0.7);
  }
}

TEST(ScenarioTest, InitialStateIsTheTurnedRestPose) {
  ScenarioConfig cfg;
  cfg.from = 1.0;
  const SystemState s = scenario_initial_state(cfg);
  EXPECT_NEAR(s.q[body_offset(0) + kYaw], 1.0, 1e-12);
  EXPECT_LT(eval_constraints(s, cfg.plant).cwiseAbs().maxCoeff(), 1e-10);
  const MotionProfile hold{cfg.ts, {1.0}, Strategy::kCustom};
  SimOptions so;
  so.horizon = 3.0;
  const SimOutput out = simulate(hold, s, cfg.plant, so);
  for (std::size_t i = 0; i < out.size(); ++i) {
    ASSERT_NEAR(out.eps2[i], out.eps2[0], 1e-9) << out.t[i];
    ASSERT_NEAR(out.theta2[i], out.theta2[0], 1e-9) << out.t[i];
  }
}

TEST(ScenarioTest, RunsAreBitForBitRepeatable) {
  ScenarioConfig cfg;
  cfg.horizon = 5.0;
  cfg.strategies = {Strategy::kConstVelocity};
  const StrategyRun a = run_scenario(cfg).front();
  const StrategyRun b = run_scenario(cfg).front();
  EXPECT_EQ(a.sim.eps2, b.sim.eps2);
  EXPECT_EQ(a.sim.theta2, b.sim.theta2);
  EXPECT_EQ(a.metrics.torsion_rms, b.metrics.torsion_rms);
}

TEST(ScenarioTest, CommandLongerThanHorizonIsRejected) {
  ScenarioConfig cfg;
  cfg.horizon = 2.0;
  cfg.strategies = {Strategy::kConstVelocity};
  EXPECT_THROW(run_scenario(cfg), ValidationError);
}

TEST(ScenarioTest, InvalidConfigsAreRejected) {
  const auto rejects = [](auto edit) {
    ScenarioConfig cfg;
    edit(cfg);
    EXPECT_THROW(cfg.validate(), ValidationError);
  };
  rejects([](ScenarioConfig& c) { c.dt = 3e-3; });
  rejects([](ScenarioConfig& c) { c.horizon = 0.0; });
  rejects([](ScenarioConfig& c) { c.h2_sf = 1.5; });
  rejects([](ScenarioConfig& c) { c.settle_hold = -1.0; });
  rejects([](ScenarioConfig& c) { c.strategies.clear(); });
  rejects([](ScenarioConfig& c) { c.strategies = {Strategy::kCustom}; });
  rejects([](ScenarioConfig& c) { c.modes.omega2 = 1.0; });
  rejects([](ScenarioConfig& c) { c.to = NAN; });
}

TEST(ConfigTest, RoundTripIsExact) {
  ScenarioConfig cfg;
  cfg.to = 2.0 / 3.0;
  cfg.plant.cable_length = {1.5, 1.51, 1.49};
  cfg.h2_sf = 0.3;
  cfg.settle_hold = 1.25;
  cfg.strategies = {Strategy::kH2Shaped, Strategy::kPolynomial};
  const std::string text = scenario_to_json(cfg);
  const ScenarioConfig back = scenario_from_json(text);
  EXPECT_EQ(scenario_to_json(back), text);
  EXPECT_EQ(back.to, cfg.to);
  EXPECT_EQ(back.plant.cable_length[1], 1.51);
  EXPECT_EQ(back.strategies, cfg.strategies);
}

TEST(ConfigTest, MissingKeysUseDefaults) {
  const ScenarioConfig cfg = scenario_from_json(R"({"maneuver": {"to": 1.0}})");
  EXPECT_EQ(cfg.to, 1.0);
  EXPECT_EQ(cfg.horizon, ScenarioConfig{}.horizon);
  EXPECT_EQ(cfg.plant.arm_radius, reference_plant().arm_radius);
}

TEST(ConfigTest, MalformedFilesAreRejected) {
  for (const char* text : {
           R"({"maneuver": {"too": 1.0}})",
           R"({"simulaton": {}})",
           R"({"version": 2})",
           R"({"simulation": {"dt": "fast"}})",
           R"({"strategies": ["warp"]})",
           R"({"shaper": {"modes": {"omega1": 3.0, "omega2": 2.0}}})",
           R"({"simulation": {"dt": 0.003}})",
           "{",
           "[]",
       }) {
    EXPECT_THROW(scenario_from_json(text), ValidationError) << text;
  }
}

TEST(ConfigTest, PlantFileAcceptsBareAndNestedForms) {
  const PlantParams p = plant_from_json(plant_to_json(reference_plant()));
  EXPECT_EQ(plant_to_json(p), plant_to_json(reference_plant()));
  const PlantParams q = plant_from_json(R"({"plant": {"belt_mass": 2.0}})");
  EXPECT_EQ(q.belt_mass, 2.0);
  EXPECT_THROW(plant_from_json(R"({"belt_mas": 2.0})"), ValidationError);
}

TEST(MetricsJsonTest, ParsesAndCarriesEveryStrategy) {
  ScenarioConfig cfg;
  StrategyRun run;
  run.strategy = Strategy::kPolynomial;
  run.command = step_profile(0.0, 1.0, cfg.ts);
  run.metrics.torsion_pkpk = 1.5;
  run.metrics.settling_time = 2.25;
  StrategyRun other = run;
  other.strategy = Strategy::kH2Shaped;
  other.metrics.settling_time.reset();
  const auto j = nlohmann::json::parse(metrics_json(cfg, {run, other}));
  EXPECT_EQ(j["status"], "complete");
  EXPECT_EQ(j["settle_hold"], cfg.settle_hold);
  ASSERT_EQ(j["strategies"].size(), 2u);
  EXPECT_EQ(j["strategies"][0]["strategy"], "polynomial");
  EXPECT_EQ(j["strategies"][0]["torsion_pkpk"], 1.5);
  EXPECT_EQ(j["strategies"][0]["settling_time"], 2.25);
  EXPECT_TRUE(j["strategies"][1]["settling_time"].is_null());
}

TEST(MetricsJsonTest, FailureIsRecordedAndEscaped) {
  const auto j = nlohmann::json::parse(
      metrics_json(ScenarioConfig{}, {}, std::string("bad \"value\"\nat line 2")));
  EXPECT_EQ(j["status"], "failed");
  EXPECT_EQ(j["error"], "bad \"value\"\nat line 2");
  EXPECT_TRUE(j["strategies"].empty());
}

}  // namespace
}  // namespace flybelt
