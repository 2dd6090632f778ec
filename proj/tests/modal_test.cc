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

// Tests for modal identification and frequency-response sweeps.

#include "flybelt/modal.hpp"

#include <array>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "flybelt/error.hpp"
#include "flybelt/modal_set.hpp"
#include "flybelt/plant.hpp"

namespace flybelt {
namespace {

// Sum of decaying tones sampled at dt for `duration` seconds.
std::vector<double> tones(std::initializer_list<std::array<double, 3>> parts, double dt,
                          double duration) {
  std::vector<double> x(std::size_t(duration / dt) + 1, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = double(i) * dt;
    for (const auto& [amp, w, xi] : parts) {
      x[i] += amp * std::exp(-xi * w * t) * std::cos(w * std::sqrt(1 - xi * xi) * t + 0.3);
    }
  }
  return x;
}

// Torsion frequency of a trifilar suspension: w^2 = m g r1 r2 / (I h), with
// I the belt inertia about its geometric axis and h the vertical drop.
double trifilar_torsion(const PlantParams& p) {
  const double gap = p.arm_radius - p.belt_radius;
  const double drop = std::sqrt(p.cable_length[0] * p.cable_length[0] - gap * gap);
  const double inertia = p.belt_inertia.z() + p.belt_mass * p.com_offset * p.com_offset;
  return std::sqrt(p.belt_mass * p.gravity * p.arm_radius * p.belt_radius / (inertia * drop));
}

TEST(SpectrumTest, RecoversTwoUndampedTones) {
  const double dt = 0.01;
  const auto torsion = tones({{1.0, 3.55, 0.0}, {0.4, 2.58, 0.0}}, dt, 60.0);
  const auto nutation = tones({{1.0, 2.58, 0.0}}, dt, 60.0);
  const ModalSet m = identify_modes(torsion, nutation, dt);
  EXPECT_NEAR(m.omega1, 2.58, 0.005 * 2.58);
  EXPECT_NEAR(m.omega2, 3.55, 0.005 * 3.55);
  EXPECT_EQ(m.xi1, 0.0);
  EXPECT_EQ(m.xi2, 0.0);
}

TEST(SpectrumTest, RecoversDampingOfDecayingTones) {
  const double dt = 0.01;
  const auto torsion = tones({{1.0, 3.55, 0.05}, {0.3, 2.58, 0.05}}, dt, 60.0);
  const auto nutation = tones({{1.0, 2.58, 0.05}}, dt, 60.0);
  const ModalSet m = identify_modes(torsion, nutation, dt);
  EXPECT_NEAR(m.omega1, 2.58, 0.005 * 2.58);
  EXPECT_NEAR(m.omega2, 3.55, 0.005 * 3.55);
  EXPECT_NEAR(m.xi1, 0.05, 0.1 * 0.05);
  EXPECT_NEAR(m.xi2, 0.05, 0.1 * 0.05);
}

TEST(SpectrumTest, SingleToneIsNotEnough) {
  const double dt = 0.01;
  const auto x = tones({{1.0, 2.58, 0.0}}, dt, 60.0);
  EXPECT_THROW(identify_modes(x, x, dt), NumericalError);
}

TEST(FreeDecayTest, ReferencePlantModes) {
  const PlantParams p = reference_plant();
  const ModalSet m = identify_modes(free_decay(p));
  // Swing mode against the published value; torsion against the closed-form
  // trifilar frequency of these parameters.
  EXPECT_NEAR(m.omega1, 2.58, 0.05 * 2.58);
  EXPECT_NEAR(m.omega2, trifilar_torsion(p), 0.005 * trifilar_torsion(p));
  EXPECT_EQ(m.xi1, 0.0);
  EXPECT_EQ(m.xi2, 0.0);
}

TEST(FreeDecayTest, DampedPlantReportsDamping) {
  PlantParams p = reference_plant();
  p.rotational_damping = 2e-4;
  const ModalSet m = identify_modes(free_decay(p));
  EXPECT_GT(m.xi2, 1e-3);
  EXPECT_LT(m.xi2, 0.1);
}

TEST(FrfTest, SlowSweepFollowsTheMotor) {
  const PlantParams p = reference_plant();
  const std::vector<double> grid = {0.1};
  const FrfCurve f = compute_frf(p, grid);
  EXPECT_NEAR(std::abs(f.eps2[0]), 1.0, 0.01);
  EXPECT_FALSE(f.capped[0]);
}

TEST(FrfTest, GainIsLinearInTheSweepAmplitude) {
  const PlantParams p = reference_plant();
  const std::vector<double> grid = {1.0};
  FrfOptions small, large;
  large.amplitude = 2.0 * small.amplitude;
  const double a = std::abs(compute_frf(p, grid, small).eps2[0]);
  const double b = std::abs(compute_frf(p, grid, large).eps2[0]);
  EXPECT_NEAR(b / a, 1.0, 0.02);
}

TEST(FrfTest, UndampedResonancesAreTheOnlyCaps) {
  const PlantParams p = reference_plant();
  const ModalSet m = identify_modes(free_decay(p));
  const std::vector<double> grid = {1.0, 1.8, 2.2, m.omega1, 3.1, 3.4, m.omega2, 4.1, 4.6};
  const FrfCurve f = compute_frf(p, grid);
  int caps = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    caps += f.capped[i];
  }
  EXPECT_EQ(caps, 2);
  EXPECT_TRUE(f.capped[3]);
  EXPECT_TRUE(f.capped[6]);
  // Each mode is a local gain maximum between its neighbours.
  for (std::size_t i : {3u, 6u}) {
    EXPECT_GT(std::abs(f.eps2[i]), std::abs(f.eps2[i - 1]));
    EXPECT_GT(std::abs(f.eps2[i]), std::abs(f.eps2[i + 1]));
  }
}

TEST(FrfTest, SymmetricBeltShowsOnlyTorsion) {
  PlantParams p = reference_plant();
  p.com_offset = 0.0;
  const double wt = trifilar_torsion(p);
  const std::vector<double> grid = {1.8, 2.2, 2.58, 3.1, wt, 4.6};
  const FrfCurve f = compute_frf(p, grid);
  int peaks = 0;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    peaks += std::abs(f.eps2[i]) > std::abs(f.eps2[i - 1]) &&
             std::abs(f.eps2[i]) > std::abs(f.eps2[i + 1]);
  }
  EXPECT_EQ(peaks, 1);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_EQ(f.capped[i], grid[i] == wt) << grid[i];
    EXPECT_LT(std::abs(f.theta2[i]), 1e-6) << grid[i];
  }
}

TEST(FrfTest, RejectsBadGrid) {
  const std::vector<double> grid = {-1.0};
  EXPECT_THROW(compute_frf(reference_plant(), grid), ValidationError);
}

TEST(ModalJsonTest, RoundTripAndValidation) {
  const ModalSet m{2.5748421, 0.0012, 3.7328813, 0.0};
  const ModalSet back = modal_set_from_json(modal_set_to_json(m));
  EXPECT_EQ(back.omega1, m.omega1);
  EXPECT_EQ(back.xi1, m.xi1);
  EXPECT_EQ(back.omega2, m.omega2);
  EXPECT_EQ(back.xi2, m.xi2);
  EXPECT_NO_THROW(modal_set_from_json(R"({"omega1": 2.58, "omega2": 3.55, "note": "x"})"));
  EXPECT_THROW(modal_set_from_json(R"({"omega1": 3.55, "omega2": 2.58})"), ValidationError);
  EXPECT_THROW(modal_set_from_json(R"({"omega1": 2.58})"), ValidationError);
  EXPECT_THROW(modal_set_from_json("[1, 2"), ValidationError);
}

}  // namespace
}  // namespace flybelt
