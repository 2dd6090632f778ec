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

// Tests for the minimum-length search and the shaper design pipeline.

#include "flybelt/design.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "flybelt/error.hpp"
#include "flybelt/lp.hpp"
#include "flybelt/modal_set.hpp"
#include "flybelt/shaper.hpp"

namespace flybelt {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTs = 0.01;

// Smallest feasible n by checking every length from 2 upwards.
int scan_nmin(const ConstraintBuilder& build, int cap) {
  for (int n = 2; n <= cap; ++n) {
    if (lp_feasible(build(n)).feasible()) {
      return n;
    }
  }
  return -1;
}

ConstraintBuilder dual_mode(const ModalSet& m, double ts) {
  return [m, ts](int n) { return build_constraints(m, n, ts); };
}

ShaperFir as_shaper(const LpResult& r) {
  return ShaperFir{kTs, std::vector<double>(r.x.data(), r.x.data() + r.x.size())};
}

TEST(NminTest, BisectionMatchesExhaustiveScan) {
  const ModalSet m;
  const NminSearch s = find_nmin(m, kTs);
  EXPECT_EQ(s.n_min, scan_nmin(dual_mode(m, kTs), 2000));
  // Cross-checked with an independent LP solver.
  EXPECT_EQ(s.n_min, 412);
  EXPECT_LT(s.lp_solves, 30);
}

TEST(NminTest, WitnessPassesTheSensitivityCheck) {
  const ModalSet m;
  const NminSearch s = find_nmin(m, kTs);
  const ShaperFir sh = as_shaper(s.witness);
  ASSERT_EQ(int(sh.size()), s.n_min);
  EXPECT_LT(sensitivity(sh, m.omega1, m.xi1), 1e-8);
  EXPECT_LT(sensitivity(sh, m.omega2, m.xi2), 1e-8);
  EXPECT_NEAR(sh.gain(), 1.0, 1e-12);
}

TEST(NminTest, TwoTapsCannotMeetNineRows) {
  EXPECT_FALSE(lp_feasible(build_constraints(ModalSet{}, 2, kTs)).feasible());
}

TEST(NminTest, SingleModeZvNeedsHalfAPeriod) {
  for (double w : {2.58, 3.55, 7.0}) {
    const Mode mode{w, 0.0};
    const ConstraintBuilder zv = [mode](int n) {
      return build_zv_constraints(std::span<const Mode>(&mode, 1), n, kTs, false);
    };
    const int start = int(std::ceil(2.0 * kPi / (w * kTs)));
    const NminSearch s = find_nmin(zv, start, 10 * start);
    EXPECT_EQ(s.n_min, scan_nmin(zv, 10 * start)) << w;
    EXPECT_LT(std::abs((s.n_min - 1) * kTs - kPi / w), kTs) << w;
    // The textbook two-impulse shaper at that length.
    EXPECT_LT(sensitivity(as_shaper(s.witness), w, 0.0), 1e-8);
  }
}

TEST(NminTest, HalvingFrequenciesDoublesTheLength) {
  const ModalSet m{3.0, 0.02, 5.0, 0.01};
  const ModalSet slow{1.5, 0.02, 2.5, 0.01};
  const int n = find_nmin(m, kTs).n_min, n_slow = find_nmin(slow, kTs).n_min;
  // n taps span (n - 1) samples; the span doubles to within one sample.
  EXPECT_LE(std::abs((n_slow - 1) - 2 * (n - 1)), 1) << n << " " << n_slow;
  EXPECT_EQ(n, scan_nmin(dual_mode(m, kTs), 4 * n));
}

TEST(NminTest, ExhaustedCapIsANumericalFailure) {
  const ModalSet m;
  EXPECT_THROW(find_nmin(dual_mode(m, kTs), 10, 40), NumericalError);
  EXPECT_THROW(find_nmin(dual_mode(m, kTs), 1, 40), ValidationError);
}

TEST(DesignTest, SmoothingMapsToLength) {
  EXPECT_EQ(taps_for_smoothing(412, 0.0), 412);
  EXPECT_EQ(taps_for_smoothing(412, 0.15), 474);
  EXPECT_EQ(taps_for_smoothing(412, 1.0), 824);
}

TEST(DesignTest, TimeOptimalShaperIsSparse) {
  const ShaperDesign d = design_shaper(DesignRequest{ModalSet{}, kTs, 0.0});
  EXPECT_EQ(d.n, d.n_min);
  int tiny = 0;
  for (double a : d.shaper.h) tiny += a < 1e-6;
  EXPECT_GE(tiny, int(0.4 * d.n));
}

TEST(DesignTest, EveryDesignCancelsBothModes) {
  const ModalSet m;
  double previous = INFINITY;
  for (double sf : {0.0, 0.15, 0.5, 1.0}) {
    const ShaperDesign d = design_shaper(DesignRequest{m, kTs, sf});
    EXPECT_EQ(d.n, taps_for_smoothing(d.n_min, sf));
    EXPECT_LT(sensitivity(d.shaper, m.omega1, m.xi1), 1e-8) << sf;
    EXPECT_LT(sensitivity(d.shaper, m.omega2, m.xi2), 1e-8) << sf;
    EXPECT_NO_THROW(d.shaper.validate(1e-9));
    EXPECT_LT(d.qp.kkt.stationarity, 1e-8);
    const double norm = std::sqrt(d.qp.objective);
    EXPECT_LT(norm, previous) << sf;
    previous = norm;
  }
  EXPECT_EQ(design_shaper(DesignRequest{m, kTs, 1.0}).n, 2 * 412);
}

TEST(DesignTest, InvalidRequestsAreRejected) {
  EXPECT_THROW(design_shaper(DesignRequest{ModalSet{}, kTs, 1.5}), ValidationError);
  EXPECT_THROW(design_shaper(DesignRequest{ModalSet{}, kTs, -0.1}), ValidationError);
  EXPECT_THROW(design_shaper(DesignRequest{ModalSet{}, 0.0, 0.0}), ValidationError);
  EXPECT_THROW(design_shaper(DesignRequest{ModalSet{3.55, 0.0, 2.58, 0.0}, kTs, 0.0}),
               ValidationError);
  EXPECT_THROW(design_shaper(DesignRequest{ModalSet{2.58, 1.2, 3.55, 0.0}, kTs, 0.0}),
               ValidationError);
}

}  // namespace
}  // namespace flybelt
