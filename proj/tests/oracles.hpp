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
//
// Independent slow-path references used only by the tests. Each is written
// directly from the defining sum or integral, with none of the FFT/Gray-code
// shortcuts the library uses, so agreement is meaningful.

#ifndef TRISIM_TESTS_ORACLES_HPP
#define TRISIM_TESTS_ORACLES_HPP

#include <complex>
#include <random>

#include "trisim/profiles.hpp"

namespace trisim::oracles {

// zeta(t_j) = (domega / sqrt(2pi)) sum_k l_k exp(-i nu_k t_j), term by term.
inline TemporalProfile dft_spectral_to_temporal(const SpectralProfile& s) {
  TemporalProfile z;
  z.grid = s.grid.time_grid();
  z.amp.resize(s.grid.n);
  const double pref = s.grid.domega / std::sqrt(kTwoPi);
  for (int j = 0; j < s.grid.n; ++j) {
    cdouble acc(0.0, 0.0);
    const double t = z.grid.t(j);
    for (int k = 0; k < s.grid.n; ++k) {
      acc += s.amp[k] * std::exp(cdouble(0.0, -s.grid.nu(k) * t));
    }
    z.amp[j] = acc * pref;
  }
  return z;
}

// l(nu_k) = (dt / sqrt(2pi)) sum_j zeta_j exp(+i nu_k t_j), term by term.
inline SpectralProfile dft_temporal_to_spectral(const TemporalProfile& z) {
  SpectralProfile s;
  s.grid = z.grid.frequency_grid();
  s.amp.resize(z.grid.n);
  const double pref = z.grid.dt / std::sqrt(kTwoPi);
  for (int k = 0; k < z.grid.n; ++k) {
    cdouble acc(0.0, 0.0);
    const double nu = s.grid.nu(k);
    for (int j = 0; j < z.grid.n; ++j) {
      acc += z.amp[j] * std::exp(cdouble(0.0, nu * z.grid.t(j)));
    }
    s.amp[k] = acc * pref;
  }
  return s;
}

inline Eigen::MatrixXcd random_complex_matrix(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = std::complex<double>(u(rng), u(rng));
  }
  return m;
}

// Band-limited random spectrum: a sum of a few Gaussian bumps with random
// complex coefficients, normalized. Smooth enough that the grid resolves it.
inline SpectralProfile random_smooth_spectrum(const FrequencyGrid& grid, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SpectralProfile s;
  s.grid = grid;
  s.amp = Eigen::VectorXcd::Zero(grid.n);
  const double w = grid.span() / 16.0;
  for (int b = 0; b < 4; ++b) {
    const cdouble c(u(rng), u(rng));
    const double center = 0.25 * grid.span() * u(rng);
    for (int k = 0; k < grid.n; ++k) {
      const double d = (grid.nu(k) - center) / w;
      s.amp[k] += c * std::exp(-d * d);
    }
  }
  s.normalize();
  return s;
}

}  // namespace trisim::oracles

#endif
