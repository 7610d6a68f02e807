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

#include "trisim/profiles.hpp"

#include <unsupported/Eigen/FFT>

#include "trisim/units.hpp"

namespace trisim {

double SpectralProfile::l2_norm() const {
  return std::sqrt(amp.squaredNorm() * grid.domega);
}

void SpectralProfile::normalize() {
  double n = l2_norm();
  if (n == 0.0) throw std::invalid_argument("SpectralProfile: zero norm");
  amp /= n;
}

double TemporalProfile::l2_norm() const {
  return std::sqrt(amp.squaredNorm() * grid.dt);
}

void TemporalProfile::normalize() {
  double n = l2_norm();
  if (n == 0.0) throw std::invalid_argument("TemporalProfile: zero norm");
  amp /= n;
}

namespace {

// A profile only lives on a grid that spans >= 10 of its 1/e intensity widths.
void require_span(const FrequencyGrid& grid, double one_over_e_time_ps, const char* what) {
  double span = grid.time_grid().span();
  if (span < 10.0 * one_over_e_time_ps)
    throw ResolutionError(std::string(what) + ": grid spans fewer than 10 temporal 1/e widths");
}

void require_center(const FrequencyGrid& grid, double center, const char* what) {
  if (center < grid.nu_min() || center > grid.nu_max())
    throw ResolutionError(std::string(what) + ": center frequency outside the grid");
}

}  // namespace

SpectralProfile lorentzian_lineshape(double center, double fwhm, const FrequencyGrid& grid) {
  grid.validate();
  if (fwhm <= 0.0) throw std::invalid_argument("lorentzian_lineshape: fwhm must be positive");
  require_center(grid, center, "lorentzian_lineshape");
  if (fwhm < 4.0 * grid.domega)
    throw ResolutionError("lorentzian_lineshape: linewidth resolves to fewer than 4 grid bins");
  require_span(grid, 1.0 / fwhm, "lorentzian_lineshape");

  SpectralProfile s;
  s.grid = grid;
  s.amp.resize(grid.n);
  const double pref = std::sqrt(fwhm / kTwoPi);
  for (int k = 0; k < grid.n; ++k) {
    double nu = grid.nu(k);
    s.amp[k] = pref / cdouble(fwhm / 2.0, -(nu - center));
  }
  s.normalize();
  return s;
}

SpectralProfile gaussian_lineshape(double center, double amplitude_fwhm, const FrequencyGrid& grid) {
  grid.validate();
  if (amplitude_fwhm <= 0.0)
    throw std::invalid_argument("gaussian_lineshape: fwhm must be positive");
  require_center(grid, center, "gaussian_lineshape");
  if (amplitude_fwhm < 4.0 * grid.domega)
    throw ResolutionError("gaussian_lineshape: linewidth resolves to fewer than 4 grid bins");

  // |g(nu)| = exp(-a (nu-c)^2) with a = 4 ln2 / fwhm^2. The dual temporal
  // intensity is exp(-t^2/2a): full 1/e width 2*sqrt(2a), used for the span check.
  const double a = std::log(2.0) * 4.0 / (amplitude_fwhm * amplitude_fwhm);
  require_span(grid, 2.0 * std::sqrt(2.0 * a), "gaussian_lineshape");

  SpectralProfile s;
  s.grid = grid;
  s.amp.resize(grid.n);
  for (int k = 0; k < grid.n; ++k) {
    double d = grid.nu(k) - center;
    s.amp[k] = std::exp(-a * d * d);
  }
  s.normalize();
  return s;
}

double pump_amplitude_fwhm(const PumpSpec& spec) {
  spec.validate();
  double intensity_fwhm = ghz_to_rad_ps(detuning_pm_to_ghz(spec.fwhm_pm, spec.center_nm));
  // Intensity FWHM -> amplitude FWHM (x sqrt(2) for a Gaussian).
  return intensity_fwhm * std::sqrt(2.0);
}

SpectralProfile gaussian_pump(const PumpSpec& spec, const FrequencyGrid& grid) {
  return gaussian_lineshape(0.0, pump_amplitude_fwhm(spec), grid);
}

TemporalProfile spectral_to_temporal(const SpectralProfile& s) {
  const int n = s.grid.n;
  const double domega = s.grid.domega;
  TimeGrid tg = s.grid.time_grid();

  // zeta_j = (domega/sqrt(2pi)) * (-1)^j * FFT[l_k exp(-i nu_k t_start)]_j
  // where FFT uses exp(-2pi i k j / n); the (-1)^j undoes the nu_k offset.
  std::vector<cdouble> in(n), out(n);
  for (int k = 0; k < n; ++k)
    in[k] = s.amp[k] * std::exp(cdouble(0.0, -s.grid.nu(k) * tg.t_start));
  Eigen::FFT<double> fft;
  fft.fwd(out, in);

  TemporalProfile z;
  z.grid = tg;
  z.amp.resize(n);
  const double pref = domega / std::sqrt(kTwoPi);
  for (int j = 0; j < n; ++j)
    z.amp[j] = out[j] * ((j & 1) ? -pref : pref);
  return z;
}

SpectralProfile temporal_to_spectral(const TemporalProfile& z) {
  const int n = z.grid.n;
  const double dt = z.grid.dt;
  FrequencyGrid fg = z.grid.frequency_grid();

  std::vector<cdouble> in(n), out(n);
  for (int j = 0; j < n; ++j)
    in[j] = (j & 1) ? -z.amp[j] : z.amp[j];
  Eigen::FFT<double> fft;
  fft.inv(out, in);  // (1/n) sum exp(+2pi i k j / n)

  SpectralProfile s;
  s.grid = fg;
  s.amp.resize(n);
  const double pref = dt * n / std::sqrt(kTwoPi);
  for (int k = 0; k < n; ++k)
    s.amp[k] = out[k] * pref * std::exp(cdouble(0.0, fg.nu(k) * z.grid.t_start));
  return s;
}

TemporalProfile lorentzian_temporal(double center, double fwhm, const TimeGrid& grid) {
  grid.validate();
  if (fwhm <= 0.0) throw std::invalid_argument("lorentzian_temporal: fwhm must be positive");
  if (grid.span() < 10.0 / fwhm)
    throw ResolutionError("lorentzian_temporal: grid spans fewer than 10 decay times");

  TemporalProfile z;
  z.grid = grid;
  z.amp = Eigen::VectorXcd::Zero(grid.n);
  const double pref = std::sqrt(fwhm);
  for (int j = 0; j < grid.n; ++j) {
    double t = grid.t(j);
    if (t < 0.0) continue;
    z.amp[j] = pref * std::exp(cdouble(-fwhm * t / 2.0, -center * t));
  }
  z.normalize();
  return z;
}

TemporalProfile apply_detuning(const TemporalProfile& z, double detuning) {
  TemporalProfile out = z;
  for (int j = 0; j < z.grid.n; ++j)
    out.amp[j] *= std::exp(cdouble(0.0, -detuning * z.grid.t(j)));
  return out;
}

TemporalProfile delay_profile(const TemporalProfile& z, double delay_ps) {
  long shift = std::lround(delay_ps / z.grid.dt);
  TemporalProfile out = z;
  out.amp = Eigen::VectorXcd::Zero(z.grid.n);
  for (int j = 0; j < z.grid.n; ++j) {
    long src = j - shift;
    if (src >= 0 && src < z.grid.n) out.amp[j] = z.amp[src];
  }
  return out;
}

}  // namespace trisim
