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

#include "flybelt/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "flybelt/csv.hpp"
#include "flybelt/error.hpp"

namespace flybelt {

std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::kConstVelocity:
      return "const-velocity";
    case Strategy::kPolynomial:
      return "polynomial";
    case Strategy::kTimeOptimalShaped:
      return "t-opt-shaped";
    case Strategy::kH2Shaped:
      return "h2-opt-shaped";
    case Strategy::kCustom:
      return "custom";
  }
  return "custom";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
  for (Strategy s : {Strategy::kConstVelocity, Strategy::kPolynomial,
                     Strategy::kTimeOptimalShaped, Strategy::kH2Shaped, Strategy::kCustom}) {
    if (strategy_name(s) == name) {
      return s;
    }
  }
  return std::nullopt;
}

std::size_t MotionProfile::segment(double t) const {
  if (alpha.size() < 2 || t < 0.0) {
    return 0;
  }
  const double k = std::floor(t / ts * (1.0 + 1e-12) + 1e-9);
  return std::min(std::size_t(k), alpha.size() - 1);
}

MotorSample MotionProfile::sample(double t) const {
  if (alpha.empty()) {
    return {};
  }
  const std::size_t k = segment(t);
  if (k + 1 >= alpha.size()) {
    return {alpha.back(), 0.0, 0.0};
  }
  const double rate = (alpha[k + 1] - alpha[k]) / ts;
  return {alpha[k] + rate * (t - double(k) * ts), rate, 0.0};
}

void unwrap(std::vector<double>& angles) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double offset = 0.0;
  for (std::size_t i = 1; i < angles.size(); ++i) {
    const double raw = angles[i] + offset;
    const double jump = raw - angles[i - 1];
    const double turns = std::round(jump / kTwoPi);
    offset -= turns * kTwoPi;
    angles[i] = raw - turns * kTwoPi;
  }
}

namespace {

void record(SimOutput& out, const SystemState& s, const PlantParams& p, double t,
            const MotorSample& motor, const SimOptions& opt) {
  out.t.push_back(t);
  out.alpha.push_back(motor.angle);
  out.eps2.push_back(torsion_angle(s, p));
  out.theta2.push_back(nutation_angle(s));
  const DynamicsSolution dyn = solve_dynamics(s, p, motor, opt.step);
  const Eigen::Vector3d tension = dyn.tensions();
  for (int k = 0; k < 3; ++k) {
    out.tension[k].push_back(tension[k]);
  }
  if (dyn.compression()) {
    ++out.compression_samples;
  }
  if (opt.record_states) {
    out.states.push_back(s);
  }
}

void audit(SimOutput& out, const SystemState& s, const PlantParams& p, double motor_angle) {
  const double c = eval_constraints(s, p).cwiseAbs().maxCoeff();
  const double m = std::abs(s.q[kYaw] - motor_angle);
  out.max_constraint_residual = std::max({out.max_constraint_residual, c, m});
  out.max_motor_error = std::max(out.max_motor_error, m);
}

std::size_t step_count(double horizon, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ValidationError(fmt::format("integrator step must be positive, got {}", dt));
  }
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) {
    throw ValidationError(fmt::format("simulation horizon must be non-negative, got {}", horizon));
  }
  return std::size_t(std::llround(horizon / dt));
}

}  // namespace

SimOutput simulate(const MotionProfile& profile, const SystemState& initial,
                   const PlantParams& p, const SimOptions& opt) {
  p.validate();
  if (profile.alpha.empty()) {
    throw ValidationError("empty motion profile");
  }
  const double ratio = profile.ts / opt.dt;
  const long per_sample = std::lround(ratio);
  if (per_sample < 1 || std::abs(ratio - double(per_sample)) > 1e-9 * ratio) {
    throw ValidationError(fmt::format(
        "profile period {} s is not an integer multiple of the integrator step {} s",
        profile.ts, opt.dt));
  }
  const double horizon = opt.horizon < 0.0 ? profile.duration() : opt.horizon;
  const std::size_t steps = step_count(horizon, opt.dt);
  const std::size_t last = profile.alpha.size() - 1;

  // Exact interpolation on the integer grid: step k lies inside segment
  // k / per_sample.
  auto motor_at = [&](std::size_t k) -> MotorSample {
    const std::size_t seg = k / std::size_t(per_sample);
    if (seg >= last) {
      return {profile.alpha[last], 0.0, 0.0};
    }
    const double a0 = profile.alpha[seg], a1 = profile.alpha[seg + 1];
    const double frac = double(k - seg * std::size_t(per_sample)) / double(per_sample);
    return {a0 + (a1 - a0) * frac, (a1 - a0) / profile.ts, 0.0};
  };

  SimOutput out;
  out.t.reserve(steps + 1);
  SystemState s = project(initial, p, motor_at(0).angle, motor_at(0).rate, opt.step);
  audit(out, s, p, motor_at(0).angle);
  record(out, s, p, 0.0, motor_at(0), opt);
  for (std::size_t k = 0; k < steps; ++k) {
    s = step(s, p, motor_at(k), opt.dt, opt.step);
    const MotorSample next = motor_at(k + 1);
    // The quadratic hold lands on the knot up to rounding; pin it exactly.
    if (s.q[kYaw] != next.angle) {
      s = project(s, p, next.angle, s.qdot[kYaw], opt.step);
    }
    audit(out, s, p, next.angle);
    record(out, s, p, double(k + 1) * opt.dt, next, opt);
  }
  unwrap(out.eps2);
  return out;
}

SimOutput simulate(const MotorTrajectory& motor, double duration, const SystemState& initial,
                   const PlantParams& p, const SimOptions& opt) {
  p.validate();
  const double horizon = opt.horizon < 0.0 ? duration : opt.horizon;
  const std::size_t steps = step_count(horizon, opt.dt);
  SimOutput out;
  out.t.reserve(steps + 1);
  const MotorSample m0 = motor(0.0);
  SystemState s = project(initial, p, m0.angle, m0.rate, opt.step);
  audit(out, s, p, m0.angle);
  record(out, s, p, 0.0, m0, opt);
  for (std::size_t k = 0; k < steps; ++k) {
    const double t0 = double(k) * opt.dt;
    s = step(s, p, motor, t0, opt.dt, opt.step);
    const MotorSample m = motor(double(k + 1) * opt.dt);
    audit(out, s, p, m.angle);
    record(out, s, p, double(k + 1) * opt.dt, m, opt);
  }
  unwrap(out.eps2);
  return out;
}

std::string sim_output_csv(const SimOutput& out) {
  const std::vector<std::string> header = {"t",        "alpha",    "eps2",    "theta2",
                                           "tensionA", "tensionB", "tensionC"};
  const std::vector<const std::vector<double>*> cols = {
      &out.t,          &out.alpha,      &out.eps2,      &out.theta2,
      &out.tension[0], &out.tension[1], &out.tension[2]};
  return write_csv(header, cols);
}

}  // namespace flybelt
