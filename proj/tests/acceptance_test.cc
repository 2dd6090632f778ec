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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. Thresholds are fixed here and never
// relaxed to make a run pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "flybelt/design.hpp"
#include "flybelt/lp.hpp"
#include "flybelt/modal.hpp"
#include "flybelt/modal_set.hpp"
#include "flybelt/motion.hpp"
#include "flybelt/multibody.hpp"
#include "flybelt/plant.hpp"
#include "flybelt/qp.hpp"
#include "flybelt/scenario.hpp"
#include "flybelt/shaper.hpp"
#include "flybelt/simulate.hpp"

namespace {

using namespace flybelt;
using Clock = std::chrono::steady_clock;
using Eigen::VectorXd;

constexpr double kPi = std::numbers::pi;
constexpr double kTs = 0.01;

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Residual vibration of a damped mode after an impulse train, evaluated
// directly as |sum A_i exp(-xi w (t_n - t_i)) exp(j w_d t_i)|.
double residual_vibration(const std::vector<double>& h, double ts, double omega, double xi) {
  const double wd = omega * std::sqrt(1.0 - xi * xi);
  const double tn = ts * double(h.size() - 1);
  std::complex<double> sum = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double t = ts * double(i);
    sum += h[i] * std::exp(-xi * omega * (tn - t)) * std::polar(1.0, wd * t);
  }
  return std::abs(sum);
}

ModalSet random_modes(std::mt19937& rng) {
  std::uniform_real_distribution<double> w(1.0, 10.0), xi(0.0, 0.1);
  double a = w(rng), b = w(rng);
  while (a == b) b = w(rng);
  return ModalSet{std::min(a, b), xi(rng), std::max(a, b), xi(rng)};
}

// C1: free decay of the reference plant, identified frequencies within 5% of
// 2.58 and 3.55 rad/s, in under 30 s.
Verdict modal_reproduction() {
  const auto t0 = Clock::now();
  const ModalSet m = identify_modes(free_decay(reference_plant()));
  const double elapsed = seconds_since(t0);
  const double e1 = std::abs(m.omega1 - 2.58) / 2.58, e2 = std::abs(m.omega2 - 3.55) / 3.55;
  return {e1 < 0.05 && e2 < 0.05 && elapsed < 30.0,
          fmt::format("omega1 {:.4f} ({:.2f}%), omega2 {:.4f} ({:.2f}%), {:.1f} s", m.omega1,
                      100 * e1, m.omega2, 100 * e2, elapsed)};
}

// C2: V < 1e-8 at both design modes by direct evaluation, and the shaped
// 180 deg step leaves < 0.5 deg pk-pk torsion after arrival.
Verdict zero_vibration() {
  ScenarioConfig cfg;
  cfg.modes = ModalSet{2.58, 0.0, 3.55, 0.0};
  cfg.strategies = {Strategy::kH2Shaped};
  const ScenarioShapers shapers = design_scenario_shapers(cfg);
  const ShaperFir& sh = shapers.h2->shaper;
  const double v1 = residual_vibration(sh.h, sh.ts, 2.58, 0.0);
  const double v2 = residual_vibration(sh.h, sh.ts, 3.55, 0.0);
  const StrategyRun run =
      run_strategy(Strategy::kH2Shaped, cfg, shapers, scenario_initial_state(cfg));
  const double pkpk = run.metrics.torsion_pkpk;
  return {v1 < 1e-8 && v2 < 1e-8 && pkpk < 0.5,
          fmt::format("V(2.58) {:.2e}, V(3.55) {:.2e}, shaped-step torsion pk-pk {:.4f} deg "
                      "(limit 0.5)",
                      v1, v2, pkpk)};
}

// C3: torsion rms strictly decreasing across the four strategies, with the
// constant-velocity pk-pk figures inside their bands.
Verdict strategy_ordering() {
  const ScenarioConfig cfg;
  const std::vector<StrategyRun> runs = run_scenario(cfg);
  std::vector<double> rms;
  std::string detail = "torsion rms";
  for (const StrategyRun& r : runs) {
    rms.push_back(r.metrics.torsion_rms);
    detail += fmt::format(" {} {:.4f}", strategy_name(r.strategy), r.metrics.torsion_rms);
  }
  bool ordered = true;
  for (std::size_t i = 1; i < rms.size(); ++i) ordered = ordered && rms[i - 1] > rms[i];
  const StrategyMetrics& cv = runs.front().metrics;
  const bool torsion_band = std::abs(cv.torsion_pkpk - 57.2) <= 0.25 * 57.2;
  const bool nutation_band = std::abs(cv.nutation_pkpk - 1.52) <= 0.30 * 1.52;
  detail += fmt::format("; ordered {}; const-velocity torsion pk-pk {:.2f} (57.2 +/-25%: {}), "
                        "nutation pk-pk {:.3f} (1.52 +/-30%: {})",
                        ordered, cv.torsion_pkpk, torsion_band, cv.nutation_pkpk, nutation_band);
  return {ordered && torsion_band && nutation_band, detail};
}

// C4: bisection equals an exhaustive scan on 20 random modal sets; each full
// design finishes in under 5 s.
Verdict nmin_correctness() {
  std::mt19937 rng(20260418);
  int agree = 0;
  double slowest = 0.0;
  std::string mismatch;
  for (int trial = 0; trial < 20; ++trial) {
    const ModalSet m = random_modes(rng);
    const int bisected = find_nmin(m, kTs).n_min;
    int scanned = -1;
    for (int n = 2; n <= 10 * bisected; ++n) {
      if (lp_feasible(build_constraints(m, n, kTs)).feasible()) {
        scanned = n;
        break;
      }
    }
    const auto t0 = Clock::now();
    design_shaper(DesignRequest{m, kTs, 0.15});
    slowest = std::max(slowest, seconds_since(t0));
    if (bisected == scanned) {
      ++agree;
    } else if (mismatch.empty()) {
      mismatch = fmt::format("; first mismatch {{{:.3f}, {:.3f}, {:.3f}, {:.3f}}}: {} vs {}",
                             m.omega1, m.xi1, m.omega2, m.xi2, bisected, scanned);
    }
  }
  return {agree == 20 && slowest < 5.0,
          fmt::format("{}/20 agree, slowest design {:.2f} s{}", agree, slowest, mismatch)};
}

// Random feasible points of {A h = b, h >= 0}: convex combinations of LP
// vertices for random costs, plus points on segments towards the optimum.
std::vector<VectorXd> random_feasible_points(const ConstraintSystem& cs, const VectorXd& best,
                                             int count, std::mt19937& rng) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  LpProblem lp{cs.a_eq, cs.b_eq, {}};
  const LpResult start = lp_solve(lp);
  std::vector<VectorXd> vertices;
  for (int k = 0; k < 24; ++k) {
    lp.cost = VectorXd(cs.a_eq.cols());
    for (auto& c : lp.cost) c = g(rng);
    const LpResult r = lp_solve_from(lp, start.basis);
    if (r.status == LpStatus::kOptimal) vertices.push_back(r.x);
  }
  std::vector<VectorXd> points;
  for (int k = 0; k < count; ++k) {
    VectorXd w(vertices.size());
    for (auto& x : w) x = -std::log(u(rng) + 1e-300);
    w /= w.sum();
    VectorXd h = VectorXd::Zero(cs.a_eq.cols());
    for (std::size_t i = 0; i < vertices.size(); ++i) h += w[i] * vertices[i];
    if (k % 2) {
      const double t = std::pow(10.0, -3.0 * u(rng));
      h = (1.0 - t) * best + t * h;
    }
    points.push_back(h);
  }
  return points;
}

// C5: the returned taps beat 1000 random feasible points on 20 random designs
// and satisfy the optimality conditions to 1e-8.
Verdict qp_optimality() {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> sf(0.0, 1.0);
  int good = 0;
  double worst_kkt = 0.0, worst_primal = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const ModalSet m = random_modes(rng);
    const ShaperDesign d = design_shaper(DesignRequest{m, kTs, sf(rng)});
    const ConstraintSystem cs = build_constraints(m, d.n, kTs);
    const QpProblem p{cs.a_eq, cs.b_eq};
    const KktResiduals k = kkt_residuals(p, d.qp.h, d.qp.nu, d.qp.mu);
    const double kkt =
        std::max({k.stationarity, k.primal, k.bound, k.dual, k.complementarity});
    worst_kkt = std::max(worst_kkt, kkt);
    const double hh = d.qp.h.squaredNorm();
    bool beaten = false;
    for (const VectorXd& x : random_feasible_points(cs, d.qp.h, 1000, rng)) {
      const double primal = (cs.a_eq * x - cs.b_eq).cwiseAbs().maxCoeff();
      worst_primal = std::max(worst_primal, primal);
      beaten = beaten || x.squaredNorm() < hh;
    }
    good += !beaten && kkt < 1e-8;
  }
  return {good == 20 && worst_primal < 1e-8,
          fmt::format("{}/20 designs unbeaten with KKT < 1e-8; worst KKT {:.2e}, worst sample "
                      "feasibility {:.2e}",
                      good, worst_kkt, worst_primal)};
}

// C6: norm and largest per-sample step of the shaped 180 deg step are
// nonincreasing in the smoothing factor.
Verdict smoothing_monotonicity() {
  double prev_norm = INFINITY, prev_step = INFINITY;
  bool ok = true;
  std::string detail = "s_f: |h|_2, max |d alpha| (rad)";
  for (double s : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const ShaperDesign d = design_shaper(DesignRequest{ModalSet{}, kTs, s});
    const MotionProfile p =
        shaped_profile(step_profile(0.0, kPi, kTs), d.shaper, Strategy::kCustom);
    double step = 0.0;
    for (std::size_t k = 1; k < p.alpha.size(); ++k) {
      step = std::max(step, std::abs(p.alpha[k] - p.alpha[k - 1]));
    }
    const double norm = std::sqrt(d.qp.h.squaredNorm());
    ok = ok && norm <= prev_norm && step <= prev_step;
    detail += fmt::format("; {:.2f}: {:.5f}, {:.5f}", s, norm, step);
    prev_norm = norm;
    prev_step = step;
  }
  return {ok, detail};
}

// C7: constraint residual over a 12 s maneuver, energy drift of an undamped
// free oscillation over 10 s, and the effect of halving dt on eps2.
Verdict simulator_integrity() {
  ScenarioConfig cfg;
  cfg.strategies = {Strategy::kConstVelocity};
  const ScenarioShapers none;
  const SystemState rest = scenario_initial_state(cfg);
  const StrategyRun coarse = run_strategy(Strategy::kConstVelocity, cfg, none, rest);
  const double residual = coarse.sim.max_constraint_residual;

  const PlantParams p = cfg.plant;
  SystemState s = rest;
  s.q[body_offset(1) + kYaw] += 0.05;
  s.q[body_offset(1) + kRoll] += 0.02;
  s = project(s, p, 0.0, 0.0);
  const double e0 = mechanical_energy(s, p);
  SimOptions so;
  so.record_states = true;
  const MotorTrajectory held = [](double) { return MotorSample{0.0, 0.0, 0.0}; };
  const SimOutput free = simulate(held, 10.0, s, p, so);
  double drift = 0.0;
  for (const SystemState& x : free.states) {
    drift = std::max(drift, std::abs(mechanical_energy(x, p) - e0));
  }
  const double rel_drift = drift / std::abs(e0);

  ScenarioConfig fine_cfg = cfg;
  fine_cfg.dt = cfg.dt / 2.0;
  const StrategyRun fine = run_strategy(Strategy::kConstVelocity, fine_cfg, none, rest);
  double change = 0.0;
  for (std::size_t i = 0; i < coarse.sim.size(); ++i) {
    change = std::max(change, std::abs(coarse.sim.eps2[i] - fine.sim.eps2[2 * i]));
  }
  return {residual < 1e-8 && rel_drift < 1e-6 && change < 1e-5,
          fmt::format("max |c(q)| {:.2e} over {} s, energy drift {:.2e} relative over 10 s, "
                      "dt-halving max |d eps2| {:.2e} rad",
                      residual, cfg.horizon, rel_drift, change)};
}

// C8: the streaming chain with a single update reproduces the shaped step
// bit for bit.
Verdict pipeline_equivalence() {
  const ShaperDesign d = design_shaper(DesignRequest{ModalSet{}, kTs, 0.15});
  const AngleUpdate update[] = {{kTs, kPi}};
  const MotionProfile pipe = run_pipeline(update, d.shaper, LimiterConfig{});
  const MotionProfile ref =
      shaped_profile(step_profile(0.0, kPi, kTs), d.shaper, Strategy::kCustom);
  std::size_t mismatches = pipe.alpha.size() < ref.alpha.size() ? ref.alpha.size() : 0;
  for (std::size_t k = 0; k < std::min(pipe.alpha.size(), ref.alpha.size()); ++k) {
    mismatches += pipe.alpha[k] != ref.alpha[k];
  }
  for (std::size_t k = ref.alpha.size(); k < pipe.alpha.size(); ++k) {
    mismatches += pipe.alpha[k] != ref.alpha.back();
  }
  return {mismatches == 0, fmt::format("{} samples compared, {} differ", ref.alpha.size(),
                                       mismatches)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"modal reproduction", modal_reproduction},
      {"zero vibration", zero_vibration},
      {"strategy ordering", strategy_ordering},
      {"n_min correctness", nmin_correctness},
      {"QP optimality", qp_optimality},
      {"smoothing monotonicity", smoothing_monotonicity},
      {"simulator integrity", simulator_integrity},
      {"pipeline equivalence", pipeline_equivalence},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    const auto t0 = Clock::now();
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, fmt::format("threw: {}", e.what())};
    }
    failures += !v.pass;
    fmt::print("{} C{} {}: {} [{:.1f} s]\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
               v.detail, seconds_since(t0));
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
