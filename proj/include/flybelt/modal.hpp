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

// Modal identification from simulated responses: spectral peak picking on
// free decays, damping from the decay of band-passed signals, and frequency
// responses from sinusoidal motor sweeps.

#ifndef FLYBELT_MODAL_HPP_
#define FLYBELT_MODAL_HPP_

#include <complex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flybelt/modal_set.hpp"
#include "flybelt/plant.hpp"
#include "flybelt/simulate.hpp"

namespace flybelt {

struct ModalIdOptions {
  int zero_padding = 16;         // FFT length >= zero_padding * samples
  double min_omega = 0.3;        // search band, rad/s
  double max_omega = 30.0;
  double min_separation_bins = 3.0;  // in unpadded bins
  double relative_floor = 0.02;      // of the strongest combined peak
  double damping_floor = 1e-3;       // smaller estimates are reported as 0
  double analysis_rate = 100.0;      // Hz; SimOutput traces are decimated to it
};

struct SpectrumPeak {
  double omega = 0.0;      // rad/s, interpolated
  double magnitude = 0.0;  // combined normalized magnitude
};

// Peaks of the Hann-windowed, zero-padded amplitude spectra of the given
// signals, each normalized to its own maximum in the band and summed.
// Strongest first.
std::vector<SpectrumPeak> spectrum_peaks(std::span<const std::vector<double>> signals, double dt,
                                         const ModalIdOptions& opt = {});

// Damping ratio of the component of `x` near `omega` (rad/s), from the
// logarithmic decrement of its band-passed peaks; `bandwidth` is the half
// width of the pass band.
double estimate_damping(std::span<const double> x, double dt, double omega, double bandwidth,
                        const ModalIdOptions& opt = {});

// Two strongest modes of a free decay, slower first. Throws NumericalError
// when fewer than two distinct peaks are found.
ModalSet identify_modes(std::span<const double> torsion, std::span<const double> nutation,
                        double dt, const ModalIdOptions& opt = {});
ModalSet identify_modes(const SimOutput& free_decay, const ModalIdOptions& opt = {});

struct FreeDecayOptions {
  double duration = 60.0;
  double dt = 1e-3;
  double torsion_offset = 0.05;  // rad, belt yaw
  double tilt_offset = 0.02;     // rad, belt roll and pitch
};

// Releases the belt from a perturbed equilibrium with the motor at rest.
SimOutput free_decay(const PlantParams& p, const FreeDecayOptions& opt = {});

struct FrfOptions {
  double amplitude = 0.01;     // motor sweep amplitude, rad
  double dt = 2e-3;
  double min_duration = 40.0;  // s, rounded up to an even number of periods
  double max_duration = 160.0;  // s; unsettled points are retried up to this
  double gain_cap = 100.0;
  double settle_tolerance = 0.05;  // relative change between half windows
};

struct FrfCurve {
  std::vector<double> omega;
  std::vector<std::complex<double>> eps2;    // torsion / motor angle
  std::vector<std::complex<double>> theta2;  // nutation / motor angle
  // Response did not settle (near a lightly damped mode) or exceeded the cap.
  std::vector<bool> capped;
};

// Sinusoidal motor sweeps from static equilibrium, one simulation per grid
// point. The gain is measured with Hann-weighted correlation over each half
// of the record; the second half is reported. When the halves disagree the
// record is doubled, up to max_duration, before the point is flagged.
FrfCurve compute_frf(const PlantParams& p, std::span<const double> grid,
                     const FrfOptions& opt = {});

// omega,gain_eps2,phase_eps2,gain_theta2,phase_theta2 (phase in rad).
std::string frf_csv(const FrfCurve& frf);

std::string modal_set_to_json(const ModalSet& m);
ModalSet modal_set_from_json(std::string_view json);

}  // namespace flybelt

#endif  // FLYBELT_MODAL_HPP_
