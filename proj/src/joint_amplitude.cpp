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

#include "trisim/joint_amplitude.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

#include "trisim/units.hpp"

namespace trisim {

double JointAmplitude::measure_s() const {
  return domain == JointDomain::kSpectral ? grid_s.domega : grid_s.time_grid().dt;
}

double JointAmplitude::measure_i() const {
  return domain == JointDomain::kSpectral ? grid_i.domega : grid_i.time_grid().dt;
}

double JointAmplitude::frobenius() const {
  return std::sqrt(amp.squaredNorm() * measure_s() * measure_i());
}

void JointAmplitude::normalize() {
  double f = frobenius();
  if (f == 0.0) throw std::invalid_argument("JointAmplitude: zero norm");
  amp /= f;
}

void JointAmplitude::validate() const {
  grid_s.validate();
  grid_i.validate();
  if (amp.rows() != grid_s.n || amp.cols() != grid_i.n)
    throw std::invalid_argument("JointAmplitude: amplitude shape does not match the grids");
}

FrequencyGrid default_jsa_grid() {
  FrequencyGrid g;
  g.n = 512;
  return g;
}

JointAmplitude build_jsa(const PumpSpec& pump, double ring_linewidth_ghz, double ring_center_ghz,
                         const FrequencyGrid& grid, bool unit_pump_envelope) {
  grid.validate();
  const int n = grid.n;
  const double center = ghz_to_rad_ps(ring_center_ghz);
  SpectralProfile ring = lorentzian_lineshape(center, ghz_to_rad_ps(ring_linewidth_ghz), grid);

  // G on the accessible sums nu_s + nu_i = (j - n) * domega, j in [0, 2n-2].
  Eigen::VectorXcd gsum;
  if (unit_pump_envelope) {
    gsum = Eigen::VectorXcd::Ones(2 * n - 1);
  } else {
    SpectralProfile alpha = gaussian_lineshape(center, pump_amplitude_fwhm(pump), grid);
    const int m = static_cast<int>(std::bit_ceil(static_cast<unsigned>(2 * n)));
    std::vector<cdouble> in(m, cdouble(0.0, 0.0)), fwd(m), conv(m);
    for (int k = 0; k < n; ++k) in[k] = alpha.amp[k] * ring.amp[k];
    Eigen::FFT<double> fft;
    fft.fwd(fwd, in);
    for (int k = 0; k < m; ++k) fwd[k] *= fwd[k];
    fft.inv(conv, fwd);
    gsum.resize(2 * n - 1);
    for (int j = 0; j < 2 * n - 1; ++j) gsum[j] = conv[j] * grid.domega;
  }

  JointAmplitude out;
  out.domain = JointDomain::kSpectral;
  out.grid_s = grid;
  out.grid_i = grid;
  out.amp.resize(n, n);
  for (int s = 0; s < n; ++s)
    for (int i = 0; i < n; ++i) out.amp(s, i) = gsum[s + i] * ring.amp[s] * ring.amp[i];
  out.normalize();
  return out;
}

namespace {

// Forward kernel per axis: on spectral samples this is spectral_to_temporal;
// on temporal samples the same exp(-i nu t) kernel is the conjugate of
// temporal_to_spectral applied to the conjugate.
Eigen::VectorXcd forward_axis(const FrequencyGrid& g, bool spectral, const Eigen::VectorXcd& v) {
  if (spectral) return spectral_to_temporal({g, v}).amp;
  return temporal_to_spectral({g.time_grid(), v.conjugate()}).amp.conjugate();
}

}  // namespace

JointAmplitude jsa_to_jta(const JointAmplitude& j) {
  j.validate();
  const bool spectral = j.domain == JointDomain::kSpectral;
  JointAmplitude out = j;
  for (int c = 0; c < out.amp.cols(); ++c)
    out.amp.col(c) = forward_axis(j.grid_s, spectral, out.amp.col(c));
  for (int r = 0; r < out.amp.rows(); ++r)
    out.amp.row(r) = forward_axis(j.grid_i, spectral, out.amp.row(r).transpose()).transpose();
  out.domain = spectral ? JointDomain::kTemporal : JointDomain::kSpectral;
  return out;
}

SchmidtDecomposition schmidt_decompose(const JointAmplitude& j) {
  j.validate();
  if (j.amp.norm() == 0.0) throw std::invalid_argument("schmidt_decompose: all-zero amplitude");

  Eigen::BDCSVD<Eigen::MatrixXcd> svd(j.amp, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double ms = j.measure_s(), mi = j.measure_i();

  Eigen::VectorXd lambda = (sigma.array().square() * ms * mi).matrix();
  lambda /= lambda.sum();

  // Keep modes up to cumulative weight 1 - 1e-13 so that reconstruction from
  // the retained terms is exact to ~3e-7 Frobenius.
  int keep = 0;
  double acc = 0.0;
  while (keep < lambda.size() && acc < 1.0 - 1e-13) acc += lambda[keep++];

  SchmidtDecomposition d;
  d.weights.reserve(keep);
  for (int k = 0; k < keep; ++k) d.weights.push_back(lambda[k] / acc);

  const bool spectral = j.domain == JointDomain::kSpectral;
  for (int k = 0; k < keep; ++k) {
    Eigen::VectorXcd us = svd.matrixU().col(k) / std::sqrt(ms);
    Eigen::VectorXcd vi = svd.matrixV().col(k).conjugate() / std::sqrt(mi);
    if (spectral) {
      d.signal_modes.push_back(spectral_to_temporal({j.grid_s, us}));
      d.idler_modes.push_back(spectral_to_temporal({j.grid_i, vi}));
    } else {
      d.signal_modes.push_back({j.grid_s.time_grid(), us});
      d.idler_modes.push_back({j.grid_i.time_grid(), vi});
    }
  }
  return d;
}

double purity(const SchmidtDecomposition& d) {
  double p = 0.0;
  for (double w : d.weights) p += w * w;
  return p;
}

TemporalProfile resample_to_grid(const TemporalProfile& z, const TimeGrid& target) {
  z.grid.validate();
  target.validate();
  if (std::abs(z.grid.t_start - target.t_start) > 1e-9)
    throw std::invalid_argument("resample_to_grid: grids must share t_start");
  double span = z.grid.span();
  if (std::abs(span - target.span()) > 1e-9 * span)
    throw std::invalid_argument("resample_to_grid: grids must share the total span");
  if (target.n < z.grid.n || (target.n - z.grid.n) % 2 != 0)
    throw std::invalid_argument("resample_to_grid: target must be a finer grid of even excess");
  if (target.n == z.grid.n) return {target, z.amp};

  SpectralProfile s = temporal_to_spectral(z);
  FrequencyGrid fg = s.grid;
  fg.n = target.n;  // same domega: the spans agree
  Eigen::VectorXcd big = Eigen::VectorXcd::Zero(target.n);
  big.segment((target.n - z.grid.n) / 2, z.grid.n) = s.amp;
  return spectral_to_temporal({fg, big});
}

namespace {

PhotonEnsemble truncated_ensemble(const SchmidtDecomposition& d,
                                  const std::vector<TemporalProfile>& modes, double cumulative,
                                  const TimeGrid& detection) {
  if (d.weights.empty()) throw std::invalid_argument("schmidt ensemble: empty decomposition");
  if (cumulative <= 0.0 || cumulative > 1.0)
    throw std::invalid_argument("schmidt ensemble: cumulative weight must be in (0, 1]");

  int keep = 1;
  double acc = d.weights[0];
  while (acc < cumulative && keep < d.size()) acc += d.weights[keep++];

  PhotonEnsemble e;
  for (int k = 0; k < keep; ++k) {
    e.weights.push_back(d.weights[k] / acc);
    e.modes.push_back(resample_to_grid(modes[k], detection));
  }
  e.validate();
  return e;
}

}  // namespace

PhotonEnsemble signal_ensemble(const SchmidtDecomposition& d, double cumulative,
                               const TimeGrid& detection) {
  return truncated_ensemble(d, d.signal_modes, cumulative, detection);
}

PhotonEnsemble idler_ensemble(const SchmidtDecomposition& d, double cumulative,
                              const TimeGrid& detection) {
  return truncated_ensemble(d, d.idler_modes, cumulative, detection);
}

}  // namespace trisim
