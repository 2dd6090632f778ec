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

// Dense revised simplex for standard-form problems
//
//   min c^T x  s.t.  A x = b,  x >= 0
//
// Phase 1 minimizes the sum of artificial variables; phase 2 the given cost.
// Entering columns are priced by normalized reduced cost, falling back to
// Bland's rule for the rest of a phase once it stalls on degenerate pivots;
// ties break on the lowest index, so the pivot sequence is fully determined by
// the input.

#ifndef FLYBELT_LP_HPP_
#define FLYBELT_LP_HPP_

#include <span>
#include <vector>

#include <Eigen/Core>

#include "flybelt/shaper.hpp"

namespace flybelt {

// Shared by LP verdicts and QP optimality checks.
inline constexpr double kFeasibilityTolerance = 1e-9;

struct LpProblem {
  Eigen::MatrixXd a_eq;
  Eigen::VectorXd b_eq;
  Eigen::VectorXd cost;  // empty: feasibility only
};

struct LpOptions {
  double tolerance = kFeasibilityTolerance;
  int max_iterations = 200000;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  Eigen::VectorXd x;  // structural variables only
  // One entry per row. Values >= x.size() denote the artificial variable of
  // row (value - x.size()), left basic at zero on a redundant row.
  std::vector<int> basis;
  double objective = 0.0;
  double phase1_infeasibility = 0.0;
  int iterations = 0;

  bool feasible() const { return status != LpStatus::kInfeasible; }
};

// Throws NumericalError when the iteration cap is hit.
LpResult lp_solve(const LpProblem& problem, const LpOptions& opt = {});

// Phase 2 only, starting from a feasible basis returned by an earlier solve of
// a problem with the same constraints.
LpResult lp_solve_from(const LpProblem& problem, std::span<const int> basis,
                       const LpOptions& opt = {});

// Feasibility of the shaper constraint system with h >= 0.
LpResult lp_feasible(const ConstraintSystem& cs, const LpOptions& opt = {});

}  // namespace flybelt

#endif  // FLYBELT_LP_HPP_
