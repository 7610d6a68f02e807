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

#include "trisim/histogram.hpp"

#include <cmath>
#include <stdexcept>

#include "trisim/units.hpp"

namespace trisim {

double combined_jitter_fwhm(const std::vector<JitterModel>& channels) {
  double sq = 0.0;
  for (const auto& ch : channels) sq += ch.channel_fwhm_sq();
  return std::sqrt(sq);
}

double CoincidenceHistogram::integral() const {
  double s = 0.0;
  for (double d : density) s += d;
  return s * bin_width_ps;
}

double CoincidenceHistogram::windowed_counts(double window_ps) const {
  if (window_ps < 0.0) throw std::invalid_argument("window must be non-negative");
  double s = 0.0;
  for (int i = 0; i < n_bins(); ++i) {
    if (std::abs(tau_center(i)) <= 0.5 * window_ps) s += density[i];
  }
  return s * bin_width_ps;
}

double CoincidenceHistogram::value_at(double tau_ps) const {
  double x = (tau_ps - tau_start_ps) / bin_width_ps;
  int i = static_cast<int>(std::floor(x));
  if (i < 0 || i >= n_bins()) return 0.0;
  return density[i];
}

CoincidenceHistogram apply_jitter(const CoincidenceHistogram& h, double fwhm_ps) {
  if (fwhm_ps <= 0.0) return h;
  if (h.bin_width_ps > fwhm_ps / 4.0) {
    throw std::invalid_argument("histogram bin width must be <= jitter FWHM / 4");
  }
  const double sigma = fwhm_to_sigma(fwhm_ps);
  // Kernel support out to 6 sigma keeps the discrete mass within ~2e-9.
  const int radius = static_cast<int>(std::ceil(6.0 * sigma / h.bin_width_ps));
  std::vector<double> kernel(2 * radius + 1);
  double norm = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    double x = k * h.bin_width_ps / sigma;
    kernel[k + radius] = std::exp(-0.5 * x * x);
    norm += kernel[k + radius];
  }
  for (double& v : kernel) v /= norm;

  CoincidenceHistogram out;
  out.bin_width_ps = h.bin_width_ps;
  out.tau_start_ps = h.tau_start_ps - radius * h.bin_width_ps;
  out.density.assign(h.density.size() + 2 * radius, 0.0);
  for (size_t i = 0; i < h.density.size(); ++i) {
    if (h.density[i] == 0.0) continue;
    for (int k = 0; k <= 2 * radius; ++k) out.density[i + k] += h.density[i] * kernel[k];
  }
  return out;
}

}  // namespace trisim
