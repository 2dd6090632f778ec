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

// Discrete input-shaping FIR filters: impulse amplitudes on a uniform grid,
// residual-vibration sensitivity, the zero-vibration constraint rows, and
// streaming convolution.

#ifndef FLYBELT_SHAPER_HPP_
#define FLYBELT_SHAPER_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "flybelt/modal_set.hpp"

namespace flybelt {

// Impulse amplitudes A_1..A_n at t_i = (i - 1) * ts.
struct ShaperFir {
  double ts = 0.01;
  std::vector<double> h;

  std::size_t size() const { return h.size(); }
  double time(std::size_t i) const { return double(i) * ts; }  // 0-based i
  double duration() const { return h.empty() ? 0.0 : time(h.size() - 1); }
  double gain() const;

  static ShaperFir identity(double ts);

  // Unity static gain and non-negative amplitudes, both to `tol`. Throws
  // ValidationError.
  void validate(double tol = 1e-12) const;
};

// Residual vibration of a mode (omega, xi) excited through the shaper,
// relative to an unshaped impulse:
//
//   V = exp(-xi w t_n) sqrt(C^2 + S^2),
//   C = sum A_i exp(xi w t_i) cos(w_d t_i), S likewise with sin,
//   w_d = w sqrt(1 - xi^2).
double sensitivity(const ShaperFir& sh, double omega, double xi);

// Rows c, s, c_d, s_d of one mode for an n-tap filter (4 x n).
Eigen::MatrixXd mode_rows(const Mode& mode, int n, double ts);

// Equality system A_eq h = b_eq together with h >= 0.
struct ConstraintSystem {
  Eigen::MatrixXd a_eq;
  Eigen::VectorXd b_eq;

  int taps() const { return int(a_eq.cols()); }
  // Inequality in A h <= b form: -I h <= 0.
  Eigen::MatrixXd a_ineq() const { return -Eigen::MatrixXd::Identity(taps(), taps()); }
  Eigen::VectorXd b_ineq() const { return Eigen::VectorXd::Zero(taps()); }
};

// Nine rows: c, s, c_d, s_d for mode 1, the same for mode 2, then all ones
// with right-hand side 1.
ConstraintSystem build_constraints(const ModalSet& modes, int n, double ts);

// Any number of modes, with (robust) or without the derivative rows, plus the
// unity-gain row last.
ConstraintSystem build_zv_constraints(std::span<const Mode> modes, int n, double ts,
                                      bool robust);

struct SampledSignal {
  double ts = 0.01;
  std::vector<double> samples;
};

// Streaming form of the filter: one instance per command stream.
//
//   y(k) = base + sum_i A_i (u(k - i + 1) - base)
//
// where the input is assumed to have rested at `base` before the first push.
class ShaperRuntime {
 public:
  explicit ShaperRuntime(const ShaperFir& sh, double base = 0.0);

  double push(double u);
  double base() const { return base_; }

 private:
  std::vector<double> coef_;
  std::vector<double> history_;  // deviations from base, ring buffer
  std::size_t head_ = 0;
  double base_;
};

// Zero initial condition, output length equals input length. Throws
// ValidationError when the sampling periods differ.
SampledSignal convolve(const ShaperFir& sh, const SampledSignal& u);

// Coefficient files. Decimal values carry 17 significant digits so a write
// followed by a read reproduces every double exactly. Readers reject
// negative taps and a static gain away from 1 (tolerance 1e-9).
std::string shaper_to_xml(const ShaperFir& sh);
ShaperFir shaper_from_xml(std::string_view xml);
std::string shaper_to_json(const ShaperFir& sh);
ShaperFir shaper_from_json(std::string_view json);

}  // namespace flybelt

#endif  // FLYBELT_SHAPER_HPP_
