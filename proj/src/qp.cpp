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

#include "flybelt/qp.hpp"

#include <cmath>
#include <limits>

#include <Eigen/QR>
#include <fmt/format.h>

#include "flybelt/error.hpp"

namespace flybelt {
namespace {

constexpr double kStationarityTol = 1e-8;

struct FreeSolution {
  Eigen::VectorXd h_free;
  Eigen::VectorXd nu;
};

// Minimum-norm solution of A_F h_F = b and the matching multipliers
// nu = 2 (A_F A_F^T)^{-1} b, both through a QR factorization of A_F^T.
FreeSolution solve_free(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                        const std::vector<int>& free) {
  const int m = int(a.rows());
  if (int(free.size()) < m) {
    throw NumericalError(fmt::format("QP: {} free variables cannot satisfy {} equality rows",
                                     free.size(), m));
  }
  Eigen::MatrixXd at(free.size(), m);
  for (std::size_t k = 0; k < free.size(); ++k) {
    at.row(k) = a.col(free[k]).transpose();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(at);
  const Eigen::MatrixXd r = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
  const double dmax = r.diagonal().cwiseAbs().maxCoeff();
  const double dmin = r.diagonal().cwiseAbs().minCoeff();
  if (!(dmin > 1e-13 * dmax)) {
    throw NumericalError("QP: equality rows are rank deficient on the free set");
  }
  // z = R^{-T} b; h_F = Q z; nu = 2 R^{-1} z.
  const Eigen::VectorXd z =
      r.triangularView<Eigen::Upper>().transpose().solve(b);
  Eigen::VectorXd qz = Eigen::VectorXd::Zero(free.size());
  qz.head(m) = z;
  FreeSolution out;
  out.h_free = qr.householderQ() * qz;
  out.nu = 2.0 * r.triangularView<Eigen::Upper>().solve(z);
  return out;
}

}  // namespace

KktResiduals kkt_residuals(const QpProblem& p, const Eigen::VectorXd& h, const Eigen::VectorXd& nu,
                           const Eigen::VectorXd& mu) {
  KktResiduals k;
  const Eigen::VectorXd grad = 2.0 * h - p.a_eq.transpose() * nu - mu;
  k.stationarity = grad.cwiseAbs().maxCoeff();
  k.primal = (p.a_eq * h - p.b_eq).cwiseAbs().maxCoeff();
  k.bound = std::max(0.0, -h.minCoeff());
  k.dual = mu.size() ? std::max(0.0, -mu.minCoeff()) : 0.0;
  k.complementarity = mu.size() ? mu.cwiseProduct(h).cwiseAbs().maxCoeff() : 0.0;
  return k;
}

namespace {

// Primal active-set iteration from a feasible h; on_bound marks the initial
// working set.
QpResult active_set(const QpProblem& p, Eigen::VectorXd h, std::vector<char> on_bound,
                    const QpOptions& opt) {
  const int n = int(p.a_eq.cols());
  QpResult res;

  Eigen::VectorXd nu;
  while (true) {
    if (res.iterations >= opt.max_iterations) {
      throw NumericalError(
          fmt::format("QP: active set did not settle after {} iterations", res.iterations));
    }
    ++res.iterations;
    std::vector<int> free;
    for (int i = 0; i < n; ++i) {
      if (!on_bound[i]) {
        free.push_back(i);
      }
    }
    const FreeSolution sol = solve_free(p.a_eq, p.b_eq, free);

    // Step toward the equality-constrained minimizer on the free set.
    double step = 1.0;
    int blocking = -1;
    double pmax = 0.0;
    for (std::size_t k = 0; k < free.size(); ++k) {
      const int i = free[k];
      const double pi = sol.h_free[k] - h[i];
      pmax = std::max(pmax, std::abs(pi));
      if (p.nonnegative && pi < 0.0) {
        const double s = h[i] / -pi;
        if (s < step) {
          step = s;
          blocking = i;
        }
      }
    }
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    if (blocking < 0 || pmax <= 1e-13 * scale) {
      // Full step: land exactly on the free-set minimizer.
      for (std::size_t k = 0; k < free.size(); ++k) {
        h[free[k]] = sol.h_free[k];
      }
      nu = sol.nu;
      // Bound multipliers mu_i = 2 h_i - a_i^T nu with h_i = 0.
      int release = -1;
      double most_negative = -opt.tolerance;
      if (p.nonnegative) {
        for (int i = 0; i < n; ++i) {
          if (!on_bound[i]) {
            continue;
          }
          const double mu = -p.a_eq.col(i).dot(nu);
          if (mu < most_negative) {
            most_negative = mu;
            release = i;
          }
        }
      }
      if (release < 0) {
        break;
      }
      on_bound[release] = 0;
      continue;
    }
    for (std::size_t k = 0; k < free.size(); ++k) {
      const int i = free[k];
      h[i] += step * (sol.h_free[k] - h[i]);
    }
    h[blocking] = 0.0;
    on_bound[blocking] = 1;
  }

  res.h = h;
  res.nu = nu;
  res.mu = Eigen::VectorXd::Zero(n);
  if (p.nonnegative) {
    for (int i = 0; i < n; ++i) {
      if (on_bound[i]) {
        res.mu[i] = 2.0 * h[i] - p.a_eq.col(i).dot(nu);
      }
    }
  }
  res.objective = h.squaredNorm();
  res.kkt = kkt_residuals(p, res.h, res.nu, res.mu);
  if (res.kkt.stationarity > kStationarityTol || res.kkt.primal > opt.tolerance ||
      res.kkt.bound > opt.tolerance || res.kkt.dual > opt.tolerance ||
      res.kkt.complementarity > opt.tolerance) {
    throw NumericalError(fmt::format(
        "QP: KKT check failed (stationarity {:.3g}, primal {:.3g}, dual {:.3g}, "
        "complementarity {:.3g})",
        res.kkt.stationarity, res.kkt.primal, res.kkt.dual, res.kkt.complementarity));
  }
  return res;
}

}  // namespace

QpResult qp_solve_from(const QpProblem& p, const Eigen::VectorXd& h0, const QpOptions& opt) {
  const int n = int(p.a_eq.cols());
  if (h0.size() != n || p.b_eq.size() != p.a_eq.rows()) {
    throw ValidationError("QP: dimension mismatch");
  }
  if (!p.nonnegative) {
    return qp_solve(p, opt);
  }
  if ((p.a_eq * h0 - p.b_eq).cwiseAbs().maxCoeff() > opt.tolerance ||
      h0.minCoeff() < -opt.tolerance) {
    throw ValidationError("QP: starting point is not feasible");
  }
  std::vector<char> on_bound(n, 0);
  Eigen::VectorXd h = h0;
  for (int i = 0; i < n; ++i) {
    if (h[i] <= 0.0) {
      h[i] = 0.0;
      on_bound[i] = 1;
    }
  }
  return active_set(p, h, on_bound, opt);
}

QpResult qp_solve(const QpProblem& p, const QpOptions& opt) {
  if (!p.nonnegative) {
    const int n = int(p.a_eq.cols());
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) {
      all[i] = i;
    }
    const FreeSolution sol = solve_free(p.a_eq, p.b_eq, all);
    QpResult res;
    res.h = sol.h_free;
    res.nu = sol.nu;
    res.mu = Eigen::VectorXd::Zero(n);
    res.objective = res.h.squaredNorm();
    res.iterations = 1;
    res.kkt = kkt_residuals(p, res.h, res.nu, res.mu);
    return res;
  }
  const LpResult lp = lp_solve(LpProblem{p.a_eq, p.b_eq, {}}, LpOptions{opt.tolerance});
  if (!lp.feasible()) {
    throw ValidationError(fmt::format("QP: constraints are infeasible (phase-1 residual {:.3g})",
                                      lp.phase1_infeasibility));
  }
  // Free set starts as the LP basis so the first subproblem is square.
  // Degenerate basic variables sit at zero but still start free.
  std::vector<char> on_bound(p.a_eq.cols(), 1);
  for (int j : lp.basis) {
    if (j < p.a_eq.cols()) {
      on_bound[j] = 0;
    }
  }
  return active_set(p, lp.x, on_bound, opt);
}

}  // namespace flybelt
