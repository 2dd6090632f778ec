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

#include "flybelt/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "flybelt/csv.hpp"
#include "flybelt/error.hpp"

namespace flybelt {
namespace {

constexpr double kDeg = 180.0 / std::numbers::pi;
constexpr int kJsonVersion = 1;

std::string json_real(double v) { return std::isfinite(v) ? format_real(v) : "null"; }

std::string json_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          out += fmt::format("\\u{:04x}", int(c));
        } else {
          out += c;
        }
    }
  }
  return out;
}

}  // namespace

void ScenarioConfig::validate() const {
  plant.validate();
  if (!std::isfinite(from) || !std::isfinite(to)) {
    throw ValidationError("maneuver angles must be finite");
  }
  if (!(dt > 0.0) || !(ts > 0.0) || !(horizon > 0.0) || !std::isfinite(horizon)) {
    throw ValidationError(
        fmt::format("dt, ts and horizon must be positive (dt {}, ts {}, horizon {})", dt, ts,
                    horizon));
  }
  const double ratio = ts / dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
    throw ValidationError(fmt::format("dt = {} must divide ts = {}", dt, ts));
  }
  if (!(rate_limit > 0.0)) {
    throw ValidationError(fmt::format("rate limit must be positive, got {}", rate_limit));
  }
  poly.validate();
  modes.validate();
  for (double sf : {time_optimal_sf, h2_sf}) {
    if (!(sf >= 0.0 && sf <= 1.0)) {
      throw ValidationError(fmt::format("smoothing factor must lie in [0, 1], got {}", sf));
    }
  }
  if (!(settle_band_deg > 0.0) || !(settle_hold >= 0.0)) {
    throw ValidationError("settling band must be positive and the hold time non-negative");
  }
  if (strategies.empty()) {
    throw ValidationError("no strategies selected");
  }
  for (Strategy s : strategies) {
    if (s == Strategy::kCustom) {
      throw ValidationError("the custom strategy cannot be planned from a scenario");
    }
  }
}

StrategyMetrics compute_metrics(const SimOutput& out, double settle_band_deg,
                                double settle_hold) {
  StrategyMetrics m;
  const std::size_t n = out.size();
  if (n == 0) {
    return m;
  }
  // Command arrival: first sample of the final constant stretch of alpha.
  std::size_t start = n - 1;
  while (start > 0 && out.alpha[start - 1] == out.alpha[n - 1]) {
    --start;
  }
  const double shift = out.alpha[n - 1] - out.alpha[0];
  double tmin = INFINITY, tmax = -INFINITY, tsq = 0.0;
  double nmin = INFINITY, nmax = -INFINITY, nsq = 0.0;
  for (std::size_t i = start; i < n; ++i) {
    const double et = (out.eps2[i] - out.eps2[0] - shift) * kDeg;
    const double en = (out.theta2[i] - out.theta2[0]) * kDeg;
    tmin = std::min(tmin, et);
    tmax = std::max(tmax, et);
    tsq += et * et;
    nmin = std::min(nmin, en);
    nmax = std::max(nmax, en);
    nsq += en * en;
  }
  const double count = double(n - start);
  m.torsion_pkpk = tmax - tmin;
  m.torsion_rms = std::sqrt(tsq / count);
  m.nutation_pkpk = nmax - nmin;
  m.nutation_rms = std::sqrt(nsq / count);
  m.transient_time = out.t[start];

  // Last sample outside the band decides the settling time.
  std::size_t last_out = n;
  for (std::size_t i = n; i-- > 0;) {
    const double et = (out.eps2[i] - out.eps2[0] - shift) * kDeg;
    if (std::abs(et) > settle_band_deg) {
      last_out = i;
      break;
    }
  }
  if (last_out == n || last_out + 1 < n) {
    const double settled = last_out == n ? out.t[0] : out.t[last_out + 1];
    if (out.t[n - 1] - settled >= settle_hold - 1e-12) {
      m.settling_time = settled;
    }
  }
  return m;
}

ScenarioShapers design_scenario_shapers(const ScenarioConfig& cfg) {
  ScenarioShapers sh;
  const auto wants = [&](Strategy s) {
    return std::find(cfg.strategies.begin(), cfg.strategies.end(), s) != cfg.strategies.end();
  };
  if (wants(Strategy::kTimeOptimalShaped)) {
    sh.time_optimal = design_shaper(DesignRequest{cfg.modes, cfg.ts, cfg.time_optimal_sf});
  }
  if (wants(Strategy::kH2Shaped)) {
    if (sh.time_optimal && cfg.h2_sf == cfg.time_optimal_sf) {
      sh.h2 = sh.time_optimal;
    } else {
      sh.h2 = design_shaper(DesignRequest{cfg.modes, cfg.ts, cfg.h2_sf});
    }
  }
  return sh;
}

MotionProfile plan_command(Strategy s, const ScenarioConfig& cfg, const ScenarioShapers& shapers) {
  switch (s) {
    case Strategy::kConstVelocity:
      return const_velocity_profile(cfg.from, cfg.to, cfg.rate_limit, cfg.ts);
    case Strategy::kPolynomial:
      return poly3_profile(cfg.from, cfg.to, cfg.poly, cfg.ts, cfg.horizon);
    case Strategy::kTimeOptimalShaped:
    case Strategy::kH2Shaped: {
      const auto& d = s == Strategy::kH2Shaped ? shapers.h2 : shapers.time_optimal;
      if (!d) {
        throw ValidationError(fmt::format("no shaper designed for {}", strategy_name(s)));
      }
      return shaped_profile(step_profile(cfg.from, cfg.to, cfg.ts), d->shaper, s);
    }
    case Strategy::kCustom:
      break;
  }
  throw ValidationError("the custom strategy cannot be planned from a scenario");
}

SystemState scenario_initial_state(const ScenarioConfig& cfg) {
  SystemState s = settle_equilibrium(build_initial_state(cfg.plant), cfg.plant);
  // The rest pose is symmetric about the vertical axis: turn it to `from`.
  const double c = std::cos(cfg.from), sn = std::sin(cfg.from);
  for (int b = 0; b < 2; ++b) {
    const int o = body_offset(b);
    const double x = s.q[o + kX], y = s.q[o + kY];
    s.q[o + kX] = c * x - sn * y;
    s.q[o + kY] = sn * x + c * y;
    s.q[o + kYaw] += cfg.from;
  }
  return project(s, cfg.plant, cfg.from, 0.0);
}

StrategyRun run_strategy(Strategy s, const ScenarioConfig& cfg, const ScenarioShapers& shapers,
                         const SystemState& initial) {
  StrategyRun run;
  run.strategy = s;
  run.command = plan_command(s, cfg, shapers);
  if (run.command.duration() > cfg.horizon + 1e-9) {
    throw ValidationError(fmt::format("{} command lasts {:.3f} s, beyond the {} s horizon",
                                      strategy_name(s), run.command.duration(), cfg.horizon));
  }
  SimOptions so;
  so.dt = cfg.dt;
  so.horizon = cfg.horizon;
  run.sim = simulate(run.command, initial, cfg.plant, so);
  run.metrics = compute_metrics(run.sim, cfg.settle_band_deg, cfg.settle_hold);
  return run;
}

std::vector<StrategyRun> run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  const ScenarioShapers shapers = design_scenario_shapers(cfg);
  const SystemState initial = scenario_initial_state(cfg);
  std::vector<StrategyRun> runs;
  for (Strategy s : cfg.strategies) {
    runs.push_back(run_strategy(s, cfg, shapers, initial));
  }
  return runs;
}

std::string metrics_json(const ScenarioConfig& cfg, const std::vector<StrategyRun>& runs,
                         const std::optional<std::string>& failure) {
  std::string out = fmt::format(
      "{{\n  \"format\": \"flybelt-metrics\",\n  \"version\": {},\n  \"status\": \"{}\",\n",
      kJsonVersion, failure ? "failed" : "complete");
  if (failure) {
    out += fmt::format("  \"error\": \"{}\",\n", json_escape(*failure));
  }
  out += fmt::format(
      "  \"units\": {{\"angles\": \"deg\", \"times\": \"s\"}},\n"
      "  \"horizon\": {},\n  \"dt\": {},\n  \"ts\": {},\n  \"from\": {},\n  \"to\": {},\n"
      "  \"settle_band_deg\": {},\n  \"settle_hold\": {},\n"
      "  \"window\": \"from command arrival to the horizon\",\n"
      "  \"strategies\": [",
      json_real(cfg.horizon), json_real(cfg.dt), json_real(cfg.ts), json_real(cfg.from),
      json_real(cfg.to), json_real(cfg.settle_band_deg), json_real(cfg.settle_hold));
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const StrategyRun& r = runs[i];
    const StrategyMetrics& m = r.metrics;
    out += fmt::format(
        "{}\n    {{\"strategy\": \"{}\", \"torsion_pkpk\": {}, \"torsion_rms\": {}, "
        "\"nutation_pkpk\": {}, \"nutation_rms\": {}, \"transient_time\": {}, "
        "\"settling_time\": {}, \"command_duration\": {}, \"max_constraint_residual\": {}, "
        "\"compression_samples\": {}}}",
        i ? "," : "", strategy_name(r.strategy), json_real(m.torsion_pkpk),
        json_real(m.torsion_rms), json_real(m.nutation_pkpk), json_real(m.nutation_rms),
        json_real(m.transient_time), m.settling_time ? json_real(*m.settling_time) : "null",
        json_real(r.command.duration()), json_real(r.sim.max_constraint_residual),
        r.sim.compression_samples);
  }
  out += runs.empty() ? "]\n}\n" : "\n  ]\n}\n";
  return out;
}

}  // namespace flybelt
