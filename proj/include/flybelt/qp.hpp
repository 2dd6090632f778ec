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

// Minimum-energy solution of an equality system with optional
// non-negativity:
//
//   min h^T h  s.t.  A h = b  (, h >= 0)
//
// solved by a primal active-set method started from a feasible vertex.

#ifndef FLYBELT_QP_HPP_
#define FLYBELT_QP_HPP_

#include <vector>

#include <Eigen/Core>

#include "flybelt/lp.hpp"

namespace flybelt {

struct QpProblem {
  Eigen::MatrixXd a_eq;
  Eigen::VectorXd b_eq;
  bool nonnegative = true;
};

struct QpOptions {
  double tolerance = kFeasibilityTolerance;
  int max_iterations = 100000;
};

// Residuals of the optimality conditions
//
//   2h - A^T nu - mu = 0,  A h = b,  h >= 0,  mu >= 0,  mu_i h_i = 0.
struct KktResiduals {
  double stationarity = 0.0;     // inf-norm of the gradient residual
  double primal = 0.0;           // inf-norm of A h - b
  double bound = 0.0;            // max(0, -min h)
  double dual = 0.0;             // max(0, -min mu)
  double complementarity = 0.0;  // max |mu_i h_i|
};

struct QpResult {
  Eigen::VectorXd h;
  Eigen::VectorXd nu;  // equality multipliers
  Eigen::VectorXd mu;  // bound multipliers (zero without bounds)
  double objective = 0.0;
  int iterations = 0;
  KktResiduals kkt;
};

KktResiduals kkt_residuals(const QpProblem& p, const Eigen::VectorXd& h,
                           const Eigen::VectorXd& nu, const Eigen::VectorXd& mu);

// Finds the starting vertex with the LP. Throws ValidationError when the
// constraints are infeasible and NumericalError when the iteration does not
// converge or the final KKT residuals are out of tolerance.
QpResult qp_solve(const QpProblem& p, const QpOptions& opt = {});

// Starts from a feasible `h0`; entries of h0 that are zero start on their
// bound. The columns of A on the initial free set must have full row rank.
QpResult qp_solve_from(const QpProblem& p, const Eigen::VectorXd& h0, const QpOptions& opt = {});

}  // namespace flybelt

#endif  // FLYBELT_QP_HPP_
