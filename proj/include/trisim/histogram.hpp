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

#ifndef TRISIM_HISTOGRAM_HPP
#define TRISIM_HISTOGRAM_HPP

#include <vector>

namespace trisim {

// Timing response of one detection channel, both contributions Gaussian FWHM
// in ps. Channels add in quadrature.
struct JitterModel {
  double detector_fwhm_ps = 0.0;
  double tagger_fwhm_ps = 0.0;

  double channel_fwhm_sq() const {
    return detector_fwhm_ps * detector_fwhm_ps + tagger_fwhm_ps * tagger_fwhm_ps;
  }
};

// Effective Gaussian FWHM (ps) of a time-difference histogram built from the
// given channels: quadrature sum over every detector and tagger involved.
double combined_jitter_fwhm(const std::vector<JitterModel>& channels);

// Relative-delay histogram: density[i] is a probability density (1/ps) at
// tau = tau_start + (i + 0.5) * bin_width.
struct CoincidenceHistogram {
  double tau_start_ps = 0.0;
  double bin_width_ps = 1.0;
  std::vector<double> density;

  int n_bins() const { return static_cast<int>(density.size()); }
  double tau_center(int i) const { return tau_start_ps + (i + 0.5) * bin_width_ps; }
  double integral() const;
  // Sum of density * bin_width over bins whose center satisfies
  // |tau| <= window/2.
  double windowed_counts(double window_ps) const;
  double value_at(double tau_ps) const;  // nearest-bin lookup, 0 outside
};

// Convolves with a Gaussian of the given FWHM. The result is widened by the
// kernel's support so the integral is preserved to 1e-6 (relative). Requires
// bin_width <= fwhm / 4; fwhm <= 0 returns the input unchanged.
CoincidenceHistogram apply_jitter(const CoincidenceHistogram& h, double fwhm_ps);

}  // namespace trisim

#endif
