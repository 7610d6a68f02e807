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

#ifndef TRISIM_UNITS_HPP
#define TRISIM_UNITS_HPP

#include <cmath>
#include <stdexcept>

// Unit conventions used throughout:
//   time                — picoseconds (ps)
//   angular frequency   — rad/ps, stored as detuning from a carrier
//   plain frequency     — GHz at API boundaries
//   wavelength          — nm (centers), pm (detunings/bandwidths)

namespace trisim {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Speed of light in nm/ps (equivalently, in units where f[THz] = c / lambda[nm]).
inline constexpr double kSpeedOfLight = 2.99792458e5;

inline double ghz_to_rad_ps(double f_ghz) { return kTwoPi * f_ghz * 1e-3; }

inline double rad_ps_to_ghz(double w_rad_ps) { return w_rad_ps / (kTwoPi * 1e-3); }

// Wavelength detuning to frequency detuning, f = c*dl/l^2.
inline double detuning_pm_to_ghz(double delta_lambda_pm, double center_lambda_nm) {
  if (center_lambda_nm <= 0.0)
    throw std::invalid_argument("detuning_pm_to_ghz: center wavelength must be positive");
  return kSpeedOfLight * delta_lambda_pm / (center_lambda_nm * center_lambda_nm);
}

// Gaussian FWHM <-> standard deviation, FWHM = 2*sqrt(2 ln 2)*sigma.
inline double fwhm_to_sigma(double fwhm) {
  return fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
}

inline double sigma_to_fwhm(double sigma) {
  return sigma * 2.0 * std::sqrt(2.0 * std::log(2.0));
}

}  // namespace trisim

#endif
