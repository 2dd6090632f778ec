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

#include "flybelt/shaper.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "flybelt/error.hpp"

namespace flybelt {

double ShaperFir::gain() const {
  double s = 0.0;
  for (double a : h) {
    s += a;
  }
  return s;
}

ShaperFir ShaperFir::identity(double ts) { return ShaperFir{ts, {1.0}}; }

void ShaperFir::validate(double tol) const {
  if (!(ts > 0.0) || !std::isfinite(ts)) {
    throw ValidationError(fmt::format("shaper sampling period must be positive, got {}", ts));
  }
  if (h.empty()) {
    throw ValidationError("shaper has no taps");
  }
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!std::isfinite(h[i]) || h[i] < -tol) {
      throw ValidationError(fmt::format("shaper tap {} is negative or not finite: {}", i + 1, h[i]));
    }
  }
  if (std::abs(gain() - 1.0) > tol) {
    throw ValidationError(fmt::format("shaper static gain is {:.17g}, expected 1", gain()));
  }
}

double sensitivity(const ShaperFir& sh, double omega, double xi) {
  if (!(omega > 0.0) || !(xi >= 0.0 && xi < 1.0)) {
    throw ValidationError(fmt::format("sensitivity needs omega > 0 and 0 <= xi < 1 ({}, {})",
                                      omega, xi));
  }
  const double wd = omega * std::sqrt(1.0 - xi * xi);
  double c = 0.0, s = 0.0;
  for (std::size_t i = 0; i < sh.h.size(); ++i) {
    const double t = sh.time(i);
    const double e = std::exp(xi * omega * t);
    c += sh.h[i] * e * std::cos(wd * t);
    s += sh.h[i] * e * std::sin(wd * t);
  }
  return std::exp(-xi * omega * sh.duration()) * std::hypot(c, s);
}

Eigen::MatrixXd mode_rows(const Mode& mode, int n, double ts) {
  const double wd = mode.omega * std::sqrt(1.0 - mode.xi * mode.xi);
  Eigen::MatrixXd rows(4, n);
  for (int i = 0; i < n; ++i) {
    const double t = double(i) * ts;
    const double e = std::exp(mode.xi * mode.omega * t);
    const double c = e * std::cos(wd * t), s = e * std::sin(wd * t);
    rows(0, i) = c;
    rows(1, i) = s;
    rows(2, i) = t * c;
    rows(3, i) = t * s;
  }
  return rows;
}

ConstraintSystem build_zv_constraints(std::span<const Mode> modes, int n, double ts,
                                      bool robust) {
  if (n < 1 || !(ts > 0.0)) {
    throw ValidationError(fmt::format("invalid shaper size n={} ts={}", n, ts));
  }
  const int per_mode = robust ? 4 : 2;
  const int m = per_mode * int(modes.size()) + 1;
  ConstraintSystem cs{Eigen::MatrixXd::Zero(m, n), Eigen::VectorXd::Zero(m)};
  for (std::size_t k = 0; k < modes.size(); ++k) {
    cs.a_eq.middleRows(per_mode * int(k), per_mode) = mode_rows(modes[k], n, ts).topRows(per_mode);
  }
  cs.a_eq.row(m - 1).setOnes();
  cs.b_eq[m - 1] = 1.0;
  return cs;
}

ConstraintSystem build_constraints(const ModalSet& modes, int n, double ts) {
  modes.validate();
  if (n < 2) {
    throw ValidationError(fmt::format("a dual-mode shaper needs n >= 2, got {}", n));
  }
  const Mode both[2] = {modes.first(), modes.second()};
  return build_zv_constraints(both, n, ts, true);
}

ShaperRuntime::ShaperRuntime(const ShaperFir& sh, double base)
    : coef_(sh.h), history_(sh.h.size(), 0.0), base_(base) {
  if (coef_.empty()) {
    throw ValidationError("shaper has no taps");
  }
}

double ShaperRuntime::push(double u) {
  const std::size_t n = coef_.size();
  head_ = (head_ + 1) % n;
  history_[head_] = u - base_;
  double acc = 0.0;
  std::size_t idx = head_;
  for (std::size_t i = 0; i < n; ++i) {
    acc += coef_[i] * history_[idx];
    idx = (idx == 0) ? n - 1 : idx - 1;
  }
  return base_ + acc;
}

SampledSignal convolve(const ShaperFir& sh, const SampledSignal& u) {
  if (std::abs(u.ts - sh.ts) > 1e-12 * sh.ts) {
    throw ValidationError(
        fmt::format("signal sampled at {} s but shaper designed for {} s", u.ts, sh.ts));
  }
  ShaperRuntime rt(sh, 0.0);
  SampledSignal y{u.ts, {}};
  y.samples.reserve(u.samples.size());
  for (double v : u.samples) {
    y.samples.push_back(rt.push(v));
  }
  return y;
}

}  // namespace flybelt
