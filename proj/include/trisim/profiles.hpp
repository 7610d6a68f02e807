// Copyright 2026 The trisim Authors
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

#ifndef TRISIM_PROFILES_HPP
#define TRISIM_PROFILES_HPP

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

#include "trisim/grids.hpp"

namespace trisim {

using cdouble = std::complex<double>;

// Thrown when a lineshape does not fit a grid (under-resolved or out of range).
struct ResolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Single-photon spectral amplitude l(nu) on a FrequencyGrid, L2-normalized:
// sum |l_k|^2 domega = 1.
struct SpectralProfile {
  FrequencyGrid grid;
  Eigen::VectorXcd amp;

  double l2_norm() const;
  void normalize();
};

// Single-photon temporal amplitude zeta(t) on a TimeGrid, L2-normalized:
// sum |zeta_j|^2 dt = 1. Amplitudes are in the rotating frame of the grid
// carrier; the physical field is zeta(t)*exp(-i*carrier*t), which drops out
// of every modulus and same-carrier interference expression.
struct TemporalProfile {
  TimeGrid grid;
  Eigen::VectorXcd amp;

  double l2_norm() const;
  void normalize();

  // Linear interpolation between samples; zero outside the grid.
  cdouble value_at(double t) const {
    double x = (t - grid.t_start) / grid.dt;
    if (x < 0.0 || x > static_cast<double>(grid.n - 1)) return {0.0, 0.0};
    int i = static_cast<int>(x);
    if (i >= grid.n - 1) return amp[grid.n - 1];
    double f = x - i;
    return amp[i] * (1.0 - f) + amp[i + 1] * f;
  }
};

struct PumpSpec {
  double center_nm = 1541.3;
  double fwhm_pm = 100.0;      // intensity FWHM of the pump spectrum
  double rep_period_ns = 2.0;  // laser repetition period

  void validate() const {
    if (fwhm_pm <= 0.0) throw std::invalid_argument("PumpSpec: FWHM must be positive");
    if (rep_period_ns <= 0.0) throw std::invalid_argument("PumpSpec: period must be positive");
  }
};

// Lorentzian amplitude l(nu) = sqrt(fwhm/2pi) / (-i(nu - center) + fwhm/2).
// `center` is an angular detuning from the grid carrier (rad/ps), `fwhm` the
// FWHM of |l|^2 (rad/ps). Errors if the center lies outside the grid, if the
// linewidth resolves to fewer than 4 bins, or if the grid's temporal span is
// shorter than 10 decay times (1/e intensity width 1/fwhm).
SpectralProfile lorentzian_lineshape(double center, double fwhm, const FrequencyGrid& grid);

// Gaussian amplitude with the given FWHM of |g(nu)| (amplitude FWHM, rad/ps).
SpectralProfile gaussian_lineshape(double center, double amplitude_fwhm, const FrequencyGrid& grid);

// Amplitude FWHM (rad/ps) of the pump envelope: spec.fwhm_pm is the
// *intensity* FWHM, converted at spec.center_nm.
double pump_amplitude_fwhm(const PumpSpec& spec);

// Pump envelope: Gaussian centered on the carrier.
SpectralProfile gaussian_pump(const PumpSpec& spec, const FrequencyGrid& grid);

// Discrete version of zeta(t) = (1/sqrt(2pi)) Int l(nu) exp(-i nu t) dnu on
// the dual grid. Exact inverse of temporal_to_spectral.
TemporalProfile spectral_to_temporal(const SpectralProfile& s);
SpectralProfile temporal_to_spectral(const TemporalProfile& z);

// Analytic Lorentzian wave-packet sqrt(fwhm)*exp(-i*center*t - fwhm*t/2) for
// t >= 0; used as an oracle for the transform path and by the projections.
TemporalProfile lorentzian_temporal(double center, double fwhm, const TimeGrid& grid);

// Multiply by exp(-i*detuning*t): shifts the spectrum by +detuning.
TemporalProfile apply_detuning(const TemporalProfile& z, double detuning);

// Shift by round(delay/dt) bins; samples shifted past the end are dropped.
TemporalProfile delay_profile(const TemporalProfile& z, double delay_ps);

}  // namespace trisim

#endif
