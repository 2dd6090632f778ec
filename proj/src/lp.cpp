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

#include "flybelt/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/LU>
#include <fmt/format.h>

#include "flybelt/error.hpp"

namespace flybelt {
namespace {

constexpr double kReducedCostTol = 1e-10;
constexpr double kPivotTol = 1e-9;
constexpr double kMinRcond = 1e-13;
constexpr int kDegenerateRunLimit = 5000;
// Steps shorter than this (relative to the right-hand side scale) do not move
// the objective in any meaningful way and count as degenerate; ratios this
// close count as ties.
constexpr double kDegenerateStep = 1e-12;
constexpr double kLexTol = 1e-12;

// Columns 0..n-1 are structural, n..n+m-1 artificial (identity after the
// rows have been sign-normalized so that b >= 0).
class Simplex {
 public:
  Simplex(const LpProblem& p, const LpOptions& opt) : opt_(opt) {
    n_ = int(p.a_eq.cols());
    m_ = int(p.a_eq.rows());
    if (p.b_eq.size() != m_) {
      throw ValidationError(fmt::format("LP: {} rows but {} right-hand sides", m_, p.b_eq.size()));
    }
    if (p.cost.size() != 0 && p.cost.size() != n_) {
      throw ValidationError(fmt::format("LP: cost has {} entries, expected {}", p.cost.size(), n_));
    }
    if (!p.a_eq.allFinite() || !p.b_eq.allFinite() || !p.cost.allFinite()) {
      throw ValidationError("LP: non-finite problem data");
    }
    a_.resize(m_, n_ + m_);
    a_.leftCols(n_) = p.a_eq;
    a_.rightCols(m_).setIdentity();
    b_ = p.b_eq;
    for (int i = 0; i < m_; ++i) {
      if (b_[i] < 0.0) {
        a_.row(i).head(n_) *= -1.0;
        b_[i] = -b_[i];
      }
    }
    b_scale_ = std::max(1.0, b_.cwiseAbs().maxCoeff());
    col_norm_ = a_.colwise().norm().transpose().cwiseMax(1e-300);
  }

  int n() const { return n_; }
  int m() const { return m_; }

  void set_basis(std::span<const int> basis) {
    if (int(basis.size()) != m_) {
      throw ValidationError(fmt::format("LP: basis has {} entries, expected {}", basis.size(), m_));
    }
    basis_.assign(basis.begin(), basis.end());
    in_basis_.assign(n_ + m_, 0);
    for (int j : basis_) {
      if (j < 0 || j >= n_ + m_ || in_basis_[j]) {
        throw ValidationError("LP: invalid starting basis");
      }
      in_basis_[j] = 1;
    }
    factor();
  }

  void set_artificial_basis() {
    std::vector<int> basis(m_);
    for (int i = 0; i < m_; ++i) {
      basis[i] = n_ + i;
    }
    set_basis(basis);
  }

  // Runs the simplex loop on `cost` (length n + m). Artificial columns never
  // enter unless `artificials_may_enter`.
  LpStatus run(const Eigen::VectorXd& cost, bool artificials_may_enter) {
    const int limit = artificials_may_enter ? n_ + m_ : n_;
    const double step_tol = kDegenerateStep * b_scale_;
    degenerate_run_ = 0;
    bool bland = false;
    while (true) {
      if (iterations_ >= opt_.max_iterations) {
        throw NumericalError(
            fmt::format("LP: no convergence after {} simplex iterations", iterations_));
      }
      Eigen::VectorXd cb(m_);
      for (int i = 0; i < m_; ++i) {
        cb[i] = cost[basis_[i]];
      }
      const Eigen::VectorXd y = lu_.transpose().solve(cb);
      // Dantzig pricing on column-normalized reduced costs with a
      // lexicographic ratio test. Rounding can still defeat the lexicographic
      // order, so a very long degenerate run switches to Bland (lowest
      // improving index, lowest leaving index) for the rest of the phase.
      bland = bland || degenerate_run_ >= kDegenerateRunLimit;
      int enter = -1;
      double best_score = 0.0;
      for (int j = 0; j < limit; ++j) {
        if (in_basis_[j]) {
          continue;
        }
        const double d = cost[j] - y.dot(a_.col(j));
        if (d >= -kReducedCostTol) {
          continue;
        }
        if (bland) {
          enter = j;
          break;
        }
        const double score = d / col_norm_[j];
        if (score < best_score) {
          best_score = score;
          enter = j;
        }
      }
      if (enter < 0) {
        return LpStatus::kOptimal;
      }
      const Eigen::VectorXd w = lu_.solve(a_.col(enter));
      const double piv_tol = kPivotTol * std::max(1.0, w.cwiseAbs().maxCoeff());
      double best = 0.0;
      const int leave = leaving_row(w, piv_tol, step_tol, bland, &best);
      if (leave < 0) {
        return LpStatus::kUnbounded;
      }
      degenerate_run_ = best > step_tol ? 0 : degenerate_run_ + 1;
      pivot(leave, enter);
      ++iterations_;
    }
  }

  // Ratio test. Rows whose ratio ties the minimum are separated by the
  // lexicographic rule (rows of B^-1 scaled by the pivot column), which rules
  // out cycling under any entering rule; in Bland mode the lowest basic index
  // wins instead.
  int leaving_row(const Eigen::VectorXd& w, double piv_tol, double step_tol, bool bland,
                  double* theta_out) const {
    std::vector<int> ties;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m_; ++i) {
      if (w[i] <= piv_tol) {
        continue;
      }
      const double theta = std::max(xb_[i], 0.0) / w[i];
      if (theta < best - step_tol) {
        best = theta;
        ties.assign(1, i);
      } else if (theta <= best + step_tol) {
        ties.push_back(i);
      }
    }
    if (ties.empty()) {
      return -1;
    }
    // Ties are collected against a moving minimum; keep the ones that tie the
    // final value.
    std::erase_if(ties, [&](int i) { return std::max(xb_[i], 0.0) / w[i] > best + step_tol; });
    *theta_out = best;
    if (ties.size() > 1 && !bland) {
      const Eigen::MatrixXd inv = lu_.inverse();
      for (int k = 0; k < m_ && ties.size() > 1; ++k) {
        double lo = std::numeric_limits<double>::infinity();
        for (int i : ties) lo = std::min(lo, inv(i, k) / w[i]);
        std::erase_if(ties, [&](int i) { return inv(i, k) / w[i] > lo + kLexTol; });
      }
    }
    int leave = ties.front();
    for (int i : ties) {
      if (basis_[i] < basis_[leave]) leave = i;
    }
    return leave;
  }

  // Pivots zero-valued artificials out of the basis where a structural column
  // can replace them; rows where none can are redundant and keep theirs.
  void drive_out_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) {
        continue;
      }
      const Eigen::VectorXd row = lu_.transpose().solve(Eigen::VectorXd::Unit(m_, i));
      for (int j = 0; j < n_; ++j) {
        if (!in_basis_[j] && std::abs(row.dot(a_.col(j))) > kPivotTol) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  double artificial_sum() const {
    double s = 0.0;
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] >= n_) {
        s += std::max(xb_[i], 0.0);
      }
    }
    return s;
  }

  Eigen::VectorXd structural() const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n_);
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) {
        x[basis_[i]] = std::max(xb_[i], 0.0);
      }
    }
    return x;
  }

  double residual(const Eigen::VectorXd& x) const {
    return (a_.leftCols(n_) * x - b_).cwiseAbs().maxCoeff() / b_scale_;
  }

  double min_basic() const { return xb_.minCoeff(); }
  double b_scale() const { return b_scale_; }
  const std::vector<int>& basis() const { return basis_; }
  int iterations() const { return iterations_; }

 private:
  void pivot(int row, int col) {
    in_basis_[basis_[row]] = 0;
    basis_[row] = col;
    in_basis_[col] = 1;
    factor();
  }

  void factor() {
    Eigen::MatrixXd bmat(m_, m_);
    for (int i = 0; i < m_; ++i) {
      bmat.col(i) = a_.col(basis_[i]);
    }
    lu_.compute(bmat);
    const double rc = lu_.rcond();
    if (!(rc > kMinRcond)) {
      throw NumericalError(fmt::format("LP: basis matrix is singular (rcond {:.3g})", rc));
    }
    xb_ = lu_.solve(b_);
  }

  LpOptions opt_;
  int n_ = 0;
  int m_ = 0;
  Eigen::MatrixXd a_;
  Eigen::VectorXd b_;
  double b_scale_ = 1.0;
  std::vector<int> basis_;
  std::vector<char> in_basis_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  Eigen::VectorXd xb_;
  Eigen::VectorXd col_norm_;
  int iterations_ = 0;
  int degenerate_run_ = 0;
};

Eigen::VectorXd padded_cost(const LpProblem& p, int n, int m) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n + m);
  if (p.cost.size() == n) {
    c.head(n) = p.cost;
  }
  return c;
}

LpResult finish(const Simplex& s, const LpProblem& p, LpStatus status) {
  LpResult r;
  r.status = status;
  r.x = s.structural();
  r.basis = s.basis();
  r.iterations = s.iterations();
  r.objective = p.cost.size() ? p.cost.dot(r.x) : 0.0;
  return r;
}

}  // namespace

LpResult lp_solve(const LpProblem& problem, const LpOptions& opt) {
  Simplex s(problem, opt);
  s.set_artificial_basis();

  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(s.n() + s.m());
  phase1.tail(s.m()).setOnes();
  s.run(phase1, /*artificials_may_enter=*/false);
  const double infeas = s.artificial_sum() / s.b_scale();
  // The verdict also requires the basic solution to reproduce b.
  if (infeas > opt.tolerance || s.residual(s.structural()) > opt.tolerance) {
    LpResult r = finish(s, problem, LpStatus::kInfeasible);
    r.phase1_infeasibility = infeas;
    return r;
  }
  s.drive_out_artificials();
  LpStatus status = LpStatus::kOptimal;
  if (problem.cost.size() != 0) {
    status = s.run(padded_cost(problem, s.n(), s.m()), false);
  }
  LpResult r = finish(s, problem, status);
  r.phase1_infeasibility = infeas;
  return r;
}

LpResult lp_solve_from(const LpProblem& problem, std::span<const int> basis,
                       const LpOptions& opt) {
  Simplex s(problem, opt);
  s.set_basis(basis);
  if (s.min_basic() < -opt.tolerance * s.b_scale() ||
      s.residual(s.structural()) > opt.tolerance) {
    throw ValidationError("LP: starting basis is not primal feasible");
  }
  const LpStatus status = s.run(padded_cost(problem, s.n(), s.m()), false);
  return finish(s, problem, status);
}

LpResult lp_feasible(const ConstraintSystem& cs, const LpOptions& opt) {
  return lp_solve(LpProblem{cs.a_eq, cs.b_eq, {}}, opt);
}

}  // namespace flybelt
