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

#ifndef TRISIM_GRIDS_HPP
#define TRISIM_GRIDS_HPP

#include <cmath>
#include <stdexcept>

#include "trisim/units.hpp"

namespace trisim {

struct FrequencyGrid;

// Uniform time grid, t_i = t_start + i*dt, i in [0, n).
struct TimeGrid {
  double t_start = -1024.0;
  double dt = 0.5;
  int n = 8192;

  void validate() const {
    if (dt <= 0.0) throw std::invalid_argument("TimeGrid: dt must be positive");
    if (n < 2) throw std::invalid_argument("TimeGrid: need at least 2 points");
  }

  double t(int i) const { return t_start + i * dt; }
  double t_end() const { return t_start + (n - 1) * dt; }
  double span() const { return n * dt; }

  FrequencyGrid frequency_grid(double carrier_rad_ps = 0.0) const;

  bool same_as(const TimeGrid& o, double tol = 1e-9) const {
    return n == o.n && std::abs(dt - o.dt) < tol && std::abs(t_start - o.t_start) < tol;
  }
};

// Fourier-dual grid of a TimeGrid. Frequencies are angular detunings from
// `carrier`: nu_k = (k - n/2)*domega. The dual TimeGrid's t_start is carried
// along so spectral<->temporal transforms are bijective without extra state.
struct FrequencyGrid {
  double carrier = 0.0;  // absolute carrier, rad/ps; bookkeeping only
  double domega = kTwoPi / (8192 * 0.5);
  int n = 8192;
  double t_start = -1024.0;

  void validate() const {
    if (domega <= 0.0) throw std::invalid_argument("FrequencyGrid: domega must be positive");
    if (n < 2) throw std::invalid_argument("FrequencyGrid: need at least 2 points");
  }

  double nu(int k) const { return (k - n / 2) * domega; }
  double nu_min() const { return nu(0); }
  double nu_max() const { return nu(n - 1); }
  double span() const { return n * domega; }

  TimeGrid time_grid() const {
    TimeGrid g;
    g.dt = kTwoPi / (n * domega);
    g.n = n;
    g.t_start = t_start;
    return g;
  }

  bool same_as(const FrequencyGrid& o, double tol = 1e-9) const {
    return n == o.n && std::abs(domega - o.domega) < tol &&
           std::abs(carrier - o.carrier) < tol && std::abs(t_start - o.t_start) < tol;
  }
};

inline FrequencyGrid TimeGrid::frequency_grid(double carrier_rad_ps) const {
  validate();
  FrequencyGrid g;
  g.carrier = carrier_rad_ps;
  g.domega = kTwoPi / (n * dt);
  g.n = n;
  g.t_start = t_start;
  return g;
}

}  // namespace trisim

#endif
