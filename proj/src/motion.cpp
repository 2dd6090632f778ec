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

#include "flybelt/motion.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "flybelt/csv.hpp"
#include "flybelt/error.hpp"

namespace flybelt {
namespace {

constexpr double kPi = std::numbers::pi;

void check_ts(double ts) {
  if (!(ts > 0.0) || !std::isfinite(ts)) {
    throw ValidationError(fmt::format("sampling period must be positive, got {}", ts));
  }
}

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw ValidationError(fmt::format("{} must be finite", what));
  }
}

// Number of sampling periods covering `duration`, tolerant of round-off in
// exact multiples.
std::size_t periods(double duration, double ts) {
  return std::size_t(std::max(0.0, std::ceil(duration / ts - 1e-9)));
}

}  // namespace

double shortest_path_target(double current, double requested) {
  check_finite(current, "current angle");
  check_finite(requested, "requested angle");
  double d = std::remainder(requested - current, 2.0 * kPi);
  if (d <= -kPi) {
    d = kPi;
  }
  return current + d;
}

MotionProfile const_velocity_profile(double from, double to, double rate, double ts) {
  check_ts(ts);
  check_finite(from, "start angle");
  check_finite(to, "target angle");
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw ValidationError(fmt::format("rate limit must be positive, got {}", rate));
  }
  if (to == from) {
    return MotionProfile{ts, {from}, Strategy::kConstVelocity};
  }
  const double delta = to - from;
  const double dir = delta < 0.0 ? -1.0 : 1.0;
  const std::size_t n = std::max<std::size_t>(1, periods(std::abs(delta) / rate, ts));
  MotionProfile p{ts, {}, Strategy::kConstVelocity};
  p.alpha.resize(n + 1);
  for (std::size_t k = 0; k < n; ++k) {
    const double a = from + dir * rate * double(k) * ts;
    p.alpha[k] = dir > 0.0 ? std::min(a, to) : std::max(a, to);
  }
  p.alpha[n] = to;
  return p;
}

void Poly3Limits::validate() const {
  if (!(vmax > 0.0) || !(amax > 0.0) || !(jmax > 0.0) || !std::isfinite(vmax) ||
      !std::isfinite(amax) || !std::isfinite(jmax)) {
    throw ValidationError(
        fmt::format("motion limits must be positive (v {}, a {}, j {})", vmax, amax, jmax));
  }
}

Poly3Limits Poly3Limits::for_duration(double distance, double duration, double vmax) {
  // With amax^2 = vmax jmax the jerk phases fill the acceleration phase:
  // ta = 2 vmax / amax, and the move takes distance / vmax + ta.
  const double cruise_time = distance / vmax;
  const double ta = duration - cruise_time;
  if (!(ta > 0.0) || ta > cruise_time) {
    throw ValidationError(fmt::format(
        "no rate-saturating move covers {} rad in {} s at {} rad/s", distance, duration, vmax));
  }
  Poly3Limits lim;
  lim.vmax = vmax;
  lim.amax = 2.0 * vmax / ta;
  lim.jmax = lim.amax * lim.amax / vmax;
  return lim;
}

Poly3Limits Poly3Limits::defaults() { return for_duration(kPi, 5.3, kPi / 3.0); }

Poly3Timing poly3_timing(double h, const Poly3Limits& lim) {
  lim.validate();
  const double v = lim.vmax, a = lim.amax, j = lim.jmax;
  Poly3Timing t;
  if (!(h > 0.0)) {
    return t;
  }
  if (v * j >= a * a) {
    t.tj = a / j;
    t.ta = t.tj + v / a;
  } else {
    t.tj = std::sqrt(v / j);
    t.ta = 2.0 * t.tj;
  }
  t.tv = h / v - t.ta;
  if (t.tv < 0.0) {
    // Peak rate not reached.
    t.tv = 0.0;
    t.tj = a / j;
    t.ta = (a * a / j + std::sqrt(std::pow(a, 4) / (j * j) + 4.0 * a * h)) / (2.0 * a);
    if (t.ta < 2.0 * t.tj) {
      // Neither is peak acceleration.
      t.tj = std::cbrt(h / (2.0 * j));
      t.ta = 2.0 * t.tj;
    }
  }
  t.alim = j * t.tj;
  t.vlim = t.alim * (t.ta - t.tj);
  return t;
}

MotionProfile poly3_profile(double from, double to, const Poly3Limits& lim, double ts,
                            double max_duration) {
  check_ts(ts);
  check_finite(from, "start angle");
  check_finite(to, "target angle");
  const double h = std::abs(to - from);
  const double dir = to < from ? -1.0 : 1.0;
  const Poly3Timing tm = poly3_timing(h, lim);
  if (h == 0.0) {
    return MotionProfile{ts, {from}, Strategy::kPolynomial};
  }
  if (tm.total() > max_duration) {
    throw ValidationError(fmt::format("move of {} rad needs {:.3f} s, above the {} s horizon", h,
                                      tm.total(), max_duration));
  }
  // Piecewise-constant jerk schedule, integrated exactly.
  const std::array<double, 7> len = {tm.tj, tm.ta - 2.0 * tm.tj, tm.tj, tm.tv,
                                     tm.tj, tm.ta - 2.0 * tm.tj, tm.tj};
  const std::array<double, 7> jerk = {lim.jmax, 0.0, -lim.jmax, 0.0, -lim.jmax, 0.0, lim.jmax};
  auto position = [&](double t) {
    double q = 0.0, v = 0.0, a = 0.0;
    for (std::size_t s = 0; s < 7; ++s) {
      const double d = std::min(std::max(t, 0.0), len[s]);
      const double jk = jerk[s];
      q += v * d + a * d * d / 2.0 + jk * d * d * d / 6.0;
      v += a * d + jk * d * d / 2.0;
      a += jk * d;
      t -= len[s];
      if (t <= 0.0) {
        break;
      }
    }
    return std::min(q, h);
  };
  const std::size_t n = std::max<std::size_t>(1, periods(tm.total(), ts));
  MotionProfile p{ts, {}, Strategy::kPolynomial};
  p.alpha.resize(n + 1);
  for (std::size_t k = 0; k < n; ++k) {
    p.alpha[k] = from + dir * position(double(k) * ts);
  }
  p.alpha[n] = to;
  return p;
}

MotionProfile step_profile(double from, double to, double ts) {
  check_ts(ts);
  check_finite(from, "start angle");
  check_finite(to, "target angle");
  return MotionProfile{ts, {from, to}, Strategy::kCustom};
}

MotionProfile shaped_profile(const MotionProfile& raw, const ShaperFir& sh, Strategy tag) {
  if (raw.alpha.empty()) {
    throw ValidationError("cannot shape an empty profile");
  }
  if (std::abs(raw.ts - sh.ts) > 1e-12 * sh.ts) {
    throw ValidationError(
        fmt::format("profile sampled at {} s but shaper designed for {} s", raw.ts, sh.ts));
  }
  ShaperRuntime rt(sh, raw.start());
  MotionProfile out{raw.ts, {}, tag};
  out.alpha.reserve(raw.alpha.size() + sh.size() - 1);
  for (double u : raw.alpha) {
    out.alpha.push_back(rt.push(u));
  }
  for (std::size_t i = 1; i < sh.size(); ++i) {
    out.alpha.push_back(rt.push(raw.target()));
  }
  return out;
}

MotionProfile run_pipeline(std::span<const AngleUpdate> updates, const ShaperFir& sh,
                           const LimiterConfig& limiter, double initial, double duration) {
  sh.validate(1e-9);
  check_finite(initial, "initial angle");
  if (limiter.quantize && limiter.steps_per_rev <= 0) {
    throw ValidationError(
        fmt::format("steps per revolution must be positive, got {}", limiter.steps_per_rev));
  }
  double last = 0.0;
  for (const AngleUpdate& u : updates) {
    check_finite(u.angle, "update angle");
    if (!std::isfinite(u.t) || u.t < last) {
      throw ValidationError(fmt::format("angle updates must be time ordered (t = {})", u.t));
    }
    last = u.t;
  }
  const double ts = sh.ts;
  if (duration < 0.0) {
    duration = last + sh.duration() + ts;
  }
  const std::size_t ticks = periods(duration, ts);
  const double step = 2.0 * kPi / double(std::max(1, limiter.steps_per_rev));

  ShaperRuntime rt(sh, initial);
  MotionProfile out{ts, {}, Strategy::kCustom};
  out.alpha.reserve(ticks + 1);
  double held = initial;
  std::size_t next = 0;
  for (std::size_t k = 0; k <= ticks; ++k) {
    const double now = double(k) * ts;
    while (next < updates.size() && updates[next].t <= now + 1e-9 * ts) {
      held = shortest_path_target(held, updates[next].angle);
      if (limiter.quantize) {
        held = std::round(held / step) * step;
      }
      ++next;
    }
    out.alpha.push_back(rt.push(held));
  }
  return out;
}

std::string profile_csv(const MotionProfile& p) {
  std::vector<double> t(p.alpha.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    t[k] = double(k) * p.ts;
  }
  const std::string header[] = {"t", "alpha"};
  const std::vector<double>* cols[] = {&t, &p.alpha};
  return write_csv(header, cols);
}

MotionProfile profile_from_csv(std::string_view text) {
  const CsvTable table = read_csv(text);
  const auto& t = table.column("t");
  const auto& alpha = table.column("alpha");
  if (t.size() < 2) {
    throw ValidationError("profile CSV needs at least two samples");
  }
  MotionProfile p{t[1] - t[0], alpha, Strategy::kCustom};
  check_ts(p.ts);
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (std::abs(t[k] - t[0] - double(k) * p.ts) > 1e-9) {
      throw ValidationError(fmt::format("profile CSV is not uniformly sampled at row {}", k + 1));
    }
  }
  return p;
}

std::vector<AngleUpdate> updates_from_csv(std::string_view text) {
  const CsvTable table = read_csv(text);
  const auto& t = table.column("t");
  const auto& angle = table.column("angle");
  std::vector<AngleUpdate> out(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    out[k] = {t[k], angle[k]};
  }
  return out;
}

std::string updates_csv(std::span<const AngleUpdate> updates) {
  std::vector<double> t, angle;
  for (const AngleUpdate& u : updates) {
    t.push_back(u.t);
    angle.push_back(u.angle);
  }
  const std::string header[] = {"t", "angle"};
  const std::vector<double>* cols[] = {&t, &angle};
  return write_csv(header, cols);
}

}  // namespace flybelt
