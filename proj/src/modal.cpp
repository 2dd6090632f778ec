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

#include "flybelt/modal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fftw3.h>
#include <fmt/format.h>
#include <json.hpp>

#include "flybelt/csv.hpp"
#include "flybelt/error.hpp"

namespace flybelt {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kJsonVersion = 1;

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) {
    p <<= 1;
  }
  return p;
}

// Owns an FFTW real-to-complex transform of length n.
class RealFft {
 public:
  explicit RealFft(std::size_t n) : n_(n) {
    in_ = fftw_alloc_real(n);
    out_ = fftw_alloc_complex(n / 2 + 1);
    plan_ = fftw_plan_dft_r2c_1d(int(n), in_, out_, FFTW_ESTIMATE);
    back_ = fftw_plan_dft_c2r_1d(int(n), out_, in_, FFTW_ESTIMATE);
  }
  ~RealFft() {
    fftw_destroy_plan(plan_);
    fftw_destroy_plan(back_);
    fftw_free(in_);
    fftw_free(out_);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const { return n_; }
  std::size_t bins() const { return n_ / 2 + 1; }
  double* time() { return in_; }
  fftw_complex* freq() { return out_; }
  void forward() { fftw_execute(plan_); }
  // Unnormalized inverse; divide by size().
  void inverse() { fftw_execute(back_); }

 private:
  std::size_t n_;
  double* in_;
  fftw_complex* out_;
  fftw_plan plan_;
  fftw_plan back_;
};

void check_signal(std::span<const double> x, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ValidationError(fmt::format("sample interval must be positive, got {}", dt));
  }
  if (x.size() < 64) {
    throw ValidationError(fmt::format("need at least 64 samples, got {}", x.size()));
  }
  for (double v : x) {
    if (!std::isfinite(v)) {
      throw ValidationError("signal contains non-finite samples");
    }
  }
}

double mean(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) {
    s += v;
  }
  return s / double(x.size());
}

// Amplitude spectrum of the demeaned, Hann-windowed signal.
std::vector<double> hann_spectrum(std::span<const double> x, std::size_t nfft) {
  RealFft fft(nfft);
  const double mu = mean(x);
  const std::size_t n = x.size();
  std::fill(fft.time(), fft.time() + nfft, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 0.5 - 0.5 * std::cos(2.0 * kPi * double(i) / double(n - 1));
    fft.time()[i] = w * (x[i] - mu);
  }
  fft.forward();
  std::vector<double> mag(fft.bins());
  for (std::size_t k = 0; k < mag.size(); ++k) {
    mag[k] = std::hypot(fft.freq()[k][0], fft.freq()[k][1]);
  }
  return mag;
}

// Vertex offset in (-0.5, 0.5) of the parabola through three samples.
double parabola_offset(double a, double b, double c) {
  const double den = a - 2.0 * b + c;
  return den < 0.0 ? std::clamp(0.5 * (a - c) / den, -0.5, 0.5) : 0.0;
}

std::vector<double> decimate(const std::vector<double>& x, std::size_t factor) {
  std::vector<double> out;
  out.reserve(x.size() / factor + 1);
  for (std::size_t i = 0; i < x.size(); i += factor) {
    out.push_back(x[i]);
  }
  return out;
}

}  // namespace

void ModalSet::validate() const {
  for (double w : {omega1, omega2}) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw ValidationError(fmt::format("modal frequency must be positive, got {}", w));
    }
  }
  if (!(omega1 < omega2)) {
    throw ValidationError(
        fmt::format("modes must be ordered omega1 < omega2 (got {}, {})", omega1, omega2));
  }
  for (double x : {xi1, xi2}) {
    if (!(x >= 0.0 && x < 1.0)) {
      throw ValidationError(fmt::format("damping ratio must lie in [0, 1), got {}", x));
    }
  }
}

std::vector<SpectrumPeak> spectrum_peaks(std::span<const std::vector<double>> signals, double dt,
                                         const ModalIdOptions& opt) {
  if (signals.empty()) {
    throw ValidationError("no signals to analyse");
  }
  const std::size_t n = signals.front().size();
  for (const auto& s : signals) {
    check_signal(s, dt);
    if (s.size() != n) {
      throw ValidationError("signals must have equal length");
    }
  }
  const std::size_t nfft = next_pow2(std::size_t(std::max(1, opt.zero_padding)) * n);
  const double dw = 2.0 * kPi / (double(nfft) * dt);
  const std::size_t k_lo = std::max<std::size_t>(1, std::size_t(std::ceil(opt.min_omega / dw)));
  const std::size_t k_hi = std::min<std::size_t>(nfft / 2 - 1, std::size_t(opt.max_omega / dw));
  if (k_hi <= k_lo + 2) {
    throw ValidationError("search band holds too few frequency bins");
  }

  std::vector<double> combined(nfft / 2 + 1, 0.0);
  for (const auto& s : signals) {
    const std::vector<double> mag = hann_spectrum(s, nfft);
    const double peak = *std::max_element(mag.begin() + k_lo, mag.begin() + k_hi + 1);
    if (peak > 0.0) {
      for (std::size_t k = 0; k < combined.size(); ++k) {
        combined[k] += mag[k] / peak;
      }
    }
  }

  std::vector<SpectrumPeak> local;
  for (std::size_t k = k_lo; k <= k_hi; ++k) {
    const double a = combined[k - 1], b = combined[k], c = combined[k + 1];
    if (b > a && b >= c && b > 0.0) {
      const double tiny = 1e-300;
      const double la = std::log(a + tiny), lb = std::log(b + tiny), lc = std::log(c + tiny);
      const double off = parabola_offset(la, lb, lc);
      const double lpeak = lb - 0.25 * (la - lc) * off;
      local.push_back({(double(k) + off) * dw, std::exp(lpeak)});
    }
  }
  std::sort(local.begin(), local.end(),
            [](const SpectrumPeak& x, const SpectrumPeak& y) { return x.magnitude > y.magnitude; });

  const double min_sep = opt.min_separation_bins * 2.0 * kPi / (double(n) * dt);
  std::vector<SpectrumPeak> out;
  for (const SpectrumPeak& pk : local) {
    if (!out.empty() && pk.magnitude < opt.relative_floor * out.front().magnitude) {
      break;
    }
    const bool distinct = std::all_of(out.begin(), out.end(), [&](const SpectrumPeak& q) {
      return std::abs(q.omega - pk.omega) >= min_sep;
    });
    if (distinct) {
      out.push_back(pk);
    }
  }
  return out;
}

double estimate_damping(std::span<const double> x, double dt, double omega, double bandwidth,
                        const ModalIdOptions& opt) {
  check_signal(x, dt);
  if (!(omega > 0.0) || !(bandwidth > 0.0)) {
    throw ValidationError("band-pass needs positive centre frequency and bandwidth");
  }
  const std::size_t n = x.size();
  const std::size_t nfft = next_pow2(2 * n);
  RealFft fft(nfft);
  const double mu = mean(x);
  std::fill(fft.time(), fft.time() + nfft, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    fft.time()[i] = x[i] - mu;
  }
  fft.forward();
  // Raised-cosine pass band centred on omega.
  const double dw = 2.0 * kPi / (double(nfft) * dt);
  for (std::size_t k = 0; k < fft.bins(); ++k) {
    const double d = std::abs(double(k) * dw - omega) / bandwidth;
    const double g = d < 1.0 ? std::pow(std::cos(0.5 * kPi * d), 2) : 0.0;
    fft.freq()[k][0] *= g / double(nfft);
    fft.freq()[k][1] *= g / double(nfft);
  }
  fft.inverse();

  // Positive peaks away from the record ends, where the filter rings.
  const std::size_t guard = std::max<std::size_t>(
      std::size_t(0.1 * double(n)), std::size_t(kPi / (bandwidth * dt)));
  if (2 * guard + 8 >= n) {
    throw NumericalError("record too short for the damping estimate");
  }
  const double* y = fft.time();
  std::vector<double> tp, lp;
  for (std::size_t i = guard; i + guard < n; ++i) {
    if (y[i] > y[i - 1] && y[i] >= y[i + 1] && y[i] > 0.0) {
      const double off = parabola_offset(y[i - 1], y[i], y[i + 1]);
      const double amp = y[i] - 0.25 * (y[i - 1] - y[i + 1]) * off;
      tp.push_back((double(i) + off) * dt);
      lp.push_back(std::log(amp));
    }
  }
  if (tp.size() < 4) {
    throw NumericalError(fmt::format("too few oscillation peaks near {:.3f} rad/s", omega));
  }
  // Least-squares slope of log amplitude against time: -xi omega_n.
  const double tm = mean(tp), lm = mean(lp);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < tp.size(); ++i) {
    sxy += (tp[i] - tm) * (lp[i] - lm);
    sxx += (tp[i] - tm) * (tp[i] - tm);
  }
  const double sigma = -sxy / sxx;
  const double xi = sigma / std::hypot(omega, sigma);
  return xi < opt.damping_floor ? 0.0 : xi;
}

ModalSet identify_modes(std::span<const double> torsion, std::span<const double> nutation,
                        double dt, const ModalIdOptions& opt) {
  const std::vector<double> sig[2] = {{torsion.begin(), torsion.end()},
                                      {nutation.begin(), nutation.end()}};
  std::vector<SpectrumPeak> peaks = spectrum_peaks(sig, dt, opt);
  if (peaks.size() < 2) {
    throw NumericalError(
        fmt::format("free decay shows {} distinct mode(s); two are needed", peaks.size()));
  }
  peaks.resize(2);
  std::sort(peaks.begin(), peaks.end(),
            [](const SpectrumPeak& a, const SpectrumPeak& b) { return a.omega < b.omega; });

  // Damping from whichever signal carries the mode more strongly.
  const std::size_t n = torsion.size();
  const std::size_t nfft = next_pow2(std::size_t(std::max(1, opt.zero_padding)) * n);
  const double dw = 2.0 * kPi / (double(nfft) * dt);
  std::vector<double> mags[2] = {hann_spectrum(sig[0], nfft), hann_spectrum(sig[1], nfft)};
  double norm[2];
  for (int s = 0; s < 2; ++s) {
    norm[s] = *std::max_element(mags[s].begin() + 1, mags[s].end());
  }
  ModalSet out;
  double xi[2], wn[2];
  const double gap = peaks[1].omega - peaks[0].omega;
  for (int m = 0; m < 2; ++m) {
    const std::size_t k = std::size_t(std::lround(peaks[m].omega / dw));
    const int s = mags[0][k] / norm[0] >= mags[1][k] / norm[1] ? 0 : 1;
    const double bw = std::min(0.5 * gap, 0.3 * peaks[m].omega);
    xi[m] = estimate_damping(sig[s], dt, peaks[m].omega, bw, opt);
    wn[m] = peaks[m].omega / std::sqrt(1.0 - xi[m] * xi[m]);
  }
  out.omega1 = wn[0];
  out.xi1 = xi[0];
  out.omega2 = wn[1];
  out.xi2 = xi[1];
  out.validate();
  return out;
}

ModalSet identify_modes(const SimOutput& decay, const ModalIdOptions& opt) {
  const double dt = decay.dt();
  if (!(dt > 0.0)) {
    throw ValidationError("free decay record is empty");
  }
  const std::size_t factor =
      std::max<std::size_t>(1, std::size_t(std::lround(1.0 / (opt.analysis_rate * dt))));
  return identify_modes(decimate(decay.eps2, factor), decimate(decay.theta2, factor),
                        dt * double(factor), opt);
}

SimOutput free_decay(const PlantParams& p, const FreeDecayOptions& opt) {
  p.validate();
  if (!(opt.duration > 0.0) || !(opt.dt > 0.0)) {
    throw ValidationError("free decay needs positive duration and time step");
  }
  SystemState s = settle_equilibrium(build_initial_state(p), p);
  const int b = body_offset(1);
  s.q[b + kRoll] += opt.tilt_offset;
  s.q[b + kPitch] += opt.tilt_offset;
  s.q[b + kYaw] += opt.torsion_offset;
  s = project(s, p, 0.0, 0.0);
  const MotorTrajectory rest = [](double) { return MotorSample{0.0, 0.0, 0.0}; };
  SimOptions so;
  so.dt = opt.dt;
  return simulate(rest, opt.duration, s, p, so);
}

FrfCurve compute_frf(const PlantParams& p, std::span<const double> grid, const FrfOptions& opt) {
  p.validate();
  if (!(opt.amplitude > 0.0) || !(opt.dt > 0.0) || !(opt.min_duration > 0.0) ||
      !(opt.max_duration >= opt.min_duration)) {
    throw ValidationError(
        "sweep needs positive amplitude, time step and duration, and max >= min duration");
  }
  const SystemState rest = settle_equilibrium(build_initial_state(p), p);
  SimOptions so;
  so.dt = opt.dt;

  FrfCurve frf;
  for (double w : grid) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw ValidationError(fmt::format("sweep frequency must be positive, got {}", w));
    }
    const double period = 2.0 * kPi / w;
    const double a = opt.amplitude;
    const MotorTrajectory motor = [a, w](double t) {
      return MotorSample{a * std::sin(w * t), a * w * std::cos(w * t),
                         -a * w * w * std::sin(w * t)};
    };
    // The response from rest carries free oscillation at the natural
    // frequencies, which never decays without damping. The Hann-weighted
    // correlation rejects it once the record spans enough bins of the
    // frequency gap, so an unsettled estimate is retried on a longer record.
    std::complex<double> ge[2], gt[2];
    bool unsettled = true;
    for (double target = opt.min_duration;; target *= 2.0) {
      const double half_periods = std::max(1.0, std::ceil(0.5 * target / period));
      // Whole number of integrator steps per half window.
      const std::size_t half = std::size_t(std::ceil(half_periods * period / opt.dt));
      const SimOutput out = simulate(motor, double(2 * half) * opt.dt, rest, p, so);
      auto gain = [&](const std::vector<double>& y, std::size_t i0) {
        std::complex<double> num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < half; ++i) {
          const double win = 0.5 - 0.5 * std::cos(2.0 * kPi * double(i) / double(half));
          const std::complex<double> e = std::polar(win, -w * out.t[i0 + i]);
          num += (y[i0 + i] - y[0]) * e;
          den += out.alpha[i0 + i] * e;
        }
        return num / den;
      };
      ge[0] = gain(out.eps2, 0);
      ge[1] = gain(out.eps2, half);
      gt[0] = gain(out.theta2, 0);
      gt[1] = gain(out.theta2, half);
      const double scale = std::max({std::abs(ge[0]), std::abs(ge[1]), 1e-3});
      unsettled = std::abs(ge[1] - ge[0]) > opt.settle_tolerance * scale;
      if (!unsettled || std::abs(ge[1]) > opt.gain_cap || 2.0 * target > opt.max_duration) {
        break;
      }
    }
    const bool capped =
        unsettled || std::abs(ge[1]) > opt.gain_cap || std::abs(gt[1]) > opt.gain_cap;
    auto clip = [&](std::complex<double> g) {
      return std::abs(g) > opt.gain_cap ? std::polar(opt.gain_cap, std::arg(g)) : g;
    };
    frf.omega.push_back(w);
    frf.eps2.push_back(clip(ge[1]));
    frf.theta2.push_back(clip(gt[1]));
    frf.capped.push_back(capped);
  }
  return frf;
}

std::string frf_csv(const FrfCurve& frf) {
  std::vector<double> ge, pe, gt, pt;
  for (std::size_t i = 0; i < frf.omega.size(); ++i) {
    ge.push_back(std::abs(frf.eps2[i]));
    pe.push_back(std::arg(frf.eps2[i]));
    gt.push_back(std::abs(frf.theta2[i]));
    pt.push_back(std::arg(frf.theta2[i]));
  }
  const std::string header[] = {"omega", "gain_eps2", "phase_eps2", "gain_theta2", "phase_theta2"};
  const std::vector<double>* cols[] = {&frf.omega, &ge, &pe, &gt, &pt};
  return write_csv(header, cols);
}

std::string modal_set_to_json(const ModalSet& m) {
  return fmt::format(
      "{{\n  \"format\": \"flybelt-modes\",\n  \"version\": {},\n  \"omega1\": {},\n"
      "  \"xi1\": {},\n  \"omega2\": {},\n  \"xi2\": {}\n}}\n",
      kJsonVersion, format_real(m.omega1), format_real(m.xi1), format_real(m.omega2),
      format_real(m.xi2));
}

ModalSet modal_set_from_json(std::string_view json) {
  ModalSet m;
  try {
    const nlohmann::json j = nlohmann::json::parse(json);
    if (j.value("format", "flybelt-modes") != "flybelt-modes" ||
        j.value("version", kJsonVersion) != kJsonVersion) {
      throw ValidationError("modal set JSON: unsupported format or version");
    }
    m.omega1 = j.at("omega1").get<double>();
    m.omega2 = j.at("omega2").get<double>();
    m.xi1 = j.value("xi1", 0.0);
    m.xi2 = j.value("xi2", 0.0);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(fmt::format("modal set JSON: {}", e.what()));
  }
  m.validate();
  return m;
}

}  // namespace flybelt
