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

#include "trisim/interference.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "trisim/units.hpp"

namespace trisim {

namespace {

// c[m] = sum_j conj(u_j) v_{j+m}, m in [-(n-1), n-1], via zero-padded FFTs.
Eigen::VectorXcd cross_correlate(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) {
  const int n = static_cast<int>(u.size());
  const size_t nfft = std::bit_ceil(static_cast<size_t>(2 * n));
  Eigen::VectorXcd pu = Eigen::VectorXcd::Zero(nfft);
  Eigen::VectorXcd pv = Eigen::VectorXcd::Zero(nfft);
  pu.head(n) = u;
  pv.head(n) = v;
  Eigen::FFT<double> fft;
  Eigen::VectorXcd fu(nfft), fv(nfft);
  fft.fwd(fu, pu);
  fft.fwd(fv, pv);
  Eigen::VectorXcd prod = fu.conjugate().cwiseProduct(fv);
  Eigen::VectorXcd w(nfft);
  fft.inv(w, prod);
  Eigen::VectorXcd c(2 * n - 1);
  for (int m = -(n - 1); m <= n - 1; ++m) {
    c[m + n - 1] = m >= 0 ? w[m] : w[nfft + m];
  }
  return c;
}

double perm_abs_sq(const CMatrix& sub, const std::function<cdouble(int, double)>& zeta,
                   const std::vector<double>& times) {
  const int n = static_cast<int>(sub.rows());
  CMatrix lam(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) lam(i, j) = sub(i, j) * zeta(j, times[i]);
  }
  return std::norm(permanent(lam));
}

CoincidenceHistogram convolve_real(const CoincidenceHistogram& h, double fwhm) {
  return apply_jitter(h, fwhm);
}

}  // namespace

void PhotonEnsemble::validate() const {
  if (weights.empty() || weights.size() != modes.size()) {
    throw std::invalid_argument("ensemble weights and modes must match and be non-empty");
  }
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("ensemble weights must be non-negative");
  }
  for (const auto& m : modes) {
    if (!m.grid.same_as(modes.front().grid)) {
      throw std::invalid_argument("ensemble modes must share one time grid");
    }
  }
}

PhotonEnsemble PhotonEnsemble::pure(TemporalProfile mode) {
  PhotonEnsemble e;
  e.weights = {1.0};
  e.modes.push_back(std::move(mode));
  return e;
}

double coincidence_probability_pure(const CMatrix& sub,
                                    const std::vector<TemporalProfile>& profiles,
                                    const std::vector<double>& times_ps) {
  const int n = static_cast<int>(sub.rows());
  if (sub.cols() != n || static_cast<int>(profiles.size()) != n ||
      static_cast<int>(times_ps.size()) != n) {
    throw std::invalid_argument("submatrix, profiles and times must have matching dimension");
  }
  return perm_abs_sq(
      sub, [&](int j, double t) { return profiles[j].value_at(t); }, times_ps);
}

double coincidence_probability_mixed(const CMatrix& sub,
                                     const std::vector<PhotonEnsemble>& photons,
                                     const std::vector<double>& times_ps) {
  const int n = static_cast<int>(sub.rows());
  if (sub.cols() != n || static_cast<int>(photons.size()) != n ||
      static_cast<int>(times_ps.size()) != n) {
    throw std::invalid_argument("submatrix, photons and times must have matching dimension");
  }
  for (const auto& p : photons) p.validate();

  std::vector<int> idx(n, 0);
  double total = 0.0;
  while (true) {
    double w = 1.0;
    for (int j = 0; j < n; ++j) w *= photons[j].weights[idx[j]];
    if (w > 0.0) {
      total += w * perm_abs_sq(
                       sub, [&](int j, double t) { return photons[j].modes[idx[j]].value_at(t); },
                       times_ps);
    }
    int j = 0;
    for (; j < n; ++j) {
      if (++idx[j] < photons[j].size()) break;
      idx[j] = 0;
    }
    if (j == n) break;
  }
  return total;
}

double hadamard_pair_probability(double phi, const TemporalProfile& z1, const TemporalProfile& z2,
                                 double t0_ps, double tau_ps) {
  const cdouble e = std::polar(1.0, phi);
  const cdouble amp =
      z1.value_at(t0_ps + tau_ps) * z2.value_at(t0_ps) + e * z1.value_at(t0_ps) * z2.value_at(t0_ps + tau_ps);
  return std::norm(amp) / 16.0;
}

CoincidenceHistogram relative_time_fringe(const JointDensityFn& density, const TimeGrid& grid) {
  grid.validate();
  const int n = grid.n;
  CoincidenceHistogram h;
  h.bin_width_ps = grid.dt;
  h.tau_start_ps = (-(n - 1) - 0.5) * grid.dt;
  h.density.assign(2 * n - 1, 0.0);
  for (int m = -(n - 1); m <= n - 1; ++m) {
    const double tau = m * grid.dt;
    const int j0 = std::max(0, -m);
    const int j1 = n - 1 - std::max(0, m);
    double acc = 0.0;
    for (int j = j0; j <= j1; ++j) {
      const double t0 = grid.t(j);
      double f = density(t0, t0 + tau);
      if (j == j0 || j == j1) f *= 0.5;
      acc += f;
    }
    h.density[m + n - 1] = acc * grid.dt;
  }
  return h;
}

CoincidenceHistogram apply_jitter(const CoincidenceHistogram& h,
                                  const std::vector<JitterModel>& channels) {
  return apply_jitter(h, combined_jitter_fwhm(channels));
}

std::pair<cdouble, cdouble> pair_amplitudes(const Interferometer& t, int ia, int ib, int oa,
                                            int ob) {
  ModePattern({ia, ib}).validate(t.dim());
  ModePattern({oa, ob}).validate(t.dim());
  return {t.m(oa, ia) * t.m(ob, ib), t.m(oa, ib) * t.m(ob, ia)};
}

PairCorrelator::PairCorrelator(const PhotonEnsemble& a, const PhotonEnsemble& b) {
  a.validate();
  b.validate();
  const TimeGrid& grid = a.modes.front().grid;
  if (!b.modes.front().grid.same_as(grid)) {
    throw std::invalid_argument("both photons must live on the same time grid");
  }
  const int n = grid.n;
  dt_ = grid.dt;
  min_lag_ = -(n - 1);

  Eigen::VectorXcd ia = Eigen::VectorXcd::Zero(n);
  Eigen::VectorXcd ib = Eigen::VectorXcd::Zero(n);
  for (int k = 0; k < a.size(); ++k) ia += a.weights[k] * a.modes[k].amp.cwiseAbs2().cast<cdouble>();
  for (int k = 0; k < b.size(); ++k) ib += b.weights[k] * b.modes[k].amp.cwiseAbs2().cast<cdouble>();
  marg_ = (cross_correlate(ia, ib) * dt_).real();

  cross_ = Eigen::VectorXcd::Zero(2 * n - 1);
  for (int k = 0; k < a.size(); ++k) {
    for (int l = 0; l < b.size(); ++l) {
      const double w = a.weights[k] * b.weights[l];
      if (w <= 0.0) continue;
      Eigen::VectorXcd g = a.modes[k].amp.cwiseProduct(b.modes[l].amp.conjugate());
      cross_ += w * dt_ * cross_correlate(g, g).conjugate();
    }
  }
}

PairCorrelator PairCorrelator::jittered(double fwhm_ps) const {
  if (fwhm_ps <= 0.0) return *this;
  CoincidenceHistogram tmp;
  tmp.bin_width_ps = dt_;
  tmp.tau_start_ps = (min_lag_ - 0.5) * dt_;

  PairCorrelator out;
  out.dt_ = dt_;

  tmp.density.assign(marg_.data(), marg_.data() + marg_.size());
  CoincidenceHistogram cm = convolve_real(tmp, fwhm_ps);
  out.min_lag_ = min_lag_ - (cm.n_bins() - static_cast<int>(marg_.size())) / 2;
  out.marg_ = Eigen::Map<const Eigen::VectorXd>(cm.density.data(), cm.n_bins());

  tmp.density.resize(cross_.size());
  for (int i = 0; i < cross_.size(); ++i) tmp.density[i] = cross_[i].real();
  CoincidenceHistogram cre = convolve_real(tmp, fwhm_ps);
  for (int i = 0; i < cross_.size(); ++i) tmp.density[i] = cross_[i].imag();
  CoincidenceHistogram cim = convolve_real(tmp, fwhm_ps);
  out.cross_.resize(cre.n_bins());
  for (int i = 0; i < cre.n_bins(); ++i) out.cross_[i] = cdouble(cre.density[i], cim.density[i]);
  return out;
}

CoincidenceHistogram PairCorrelator::fringe(cdouble alpha, cdouble beta) const {
  const int nb = static_cast<int>(marg_.size());
  CoincidenceHistogram h;
  h.bin_width_ps = dt_;
  h.tau_start_ps = (min_lag_ - 0.5) * dt_;
  h.density.resize(nb);
  const double wa = std::norm(alpha);
  const double wb = std::norm(beta);
  const cdouble ab = alpha * std::conj(beta);
  for (int i = 0; i < nb; ++i) {
    double v = wa * marg_[i] + wb * marg_[nb - 1 - i] + 2.0 * (ab * cross_[i]).real();
    h.density[i] = std::max(v, 0.0);
  }
  return h;
}

CoincidenceHistogram PairCorrelator::distinguishable_fringe(cdouble alpha, cdouble beta) const {
  const int nb = static_cast<int>(marg_.size());
  CoincidenceHistogram h;
  h.bin_width_ps = dt_;
  h.tau_start_ps = (min_lag_ - 0.5) * dt_;
  h.density.resize(nb);
  const double wa = std::norm(alpha);
  const double wb = std::norm(beta);
  for (int i = 0; i < nb; ++i) h.density[i] = wa * marg_[i] + wb * marg_[nb - 1 - i];
  return h;
}

void FringeScan::validate() const {
  if (phases_rad.size() != histograms.size() || phases_rad.empty()) {
    throw std::invalid_argument("fringe scan phases and histograms must match and be non-empty");
  }
  for (size_t i = 1; i < phases_rad.size(); ++i) {
    if (!(phases_rad[i] > phases_rad[i - 1])) {
      throw std::invalid_argument("fringe scan phases must be strictly increasing");
    }
  }
}

double FringeFit::visibility_err() const {
  if (offset == 0.0 || amplitude == 0.0) return 0.0;
  const double v = visibility();
  const double ra = amplitude_err / amplitude;
  const double ro = offset_err / offset;
  return std::abs(v) * std::sqrt(ra * ra + ro * ro);
}

FringeFit fit_cosine_fringe(const std::vector<double>& phases_rad,
                            const std::vector<double>& counts) {
  const int n = static_cast<int>(phases_rad.size());
  if (n < 8 || counts.size() != phases_rad.size()) {
    throw std::invalid_argument("fringe fit needs >= 8 (phase, count) samples");
  }
  auto [mn, mx] = std::minmax_element(phases_rad.begin(), phases_rad.end());
  if (*mx - *mn < kTwoPi * (1.0 - 1.0 / n) - 1e-9) {
    throw std::invalid_argument("fringe fit needs phases spanning at least one period");
  }

  Eigen::MatrixXd x(n, 3);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    x(i, 0) = 1.0;
    x(i, 1) = std::cos(phases_rad[i]);
    x(i, 2) = std::sin(phases_rad[i]);
    y[i] = counts[i];
  }
  Eigen::Vector3d c = x.colPivHouseholderQr().solve(y);
  const double rss = (y - x * c).squaredNorm();
  const double sigma2 = n > 3 ? rss / (n - 3) : 0.0;
  Eigen::Matrix3d cov = sigma2 * (x.transpose() * x).inverse();

  FringeFit fit;
  fit.offset = c[0];
  fit.offset_err = std::sqrt(std::max(cov(0, 0), 0.0));
  const double p = c[1];
  const double q = c[2];
  fit.amplitude = std::hypot(p, q);
  fit.phase0 = std::atan2(q, p);
  if (fit.amplitude > 0.0) {
    const double var =
        (p * p * cov(1, 1) + q * q * cov(2, 2) + 2.0 * p * q * cov(1, 2)) /
        (fit.amplitude * fit.amplitude);
    fit.amplitude_err = std::sqrt(std::max(var, 0.0));
  } else {
    fit.amplitude_err = std::sqrt(std::max(cov(1, 1) + cov(2, 2), 0.0));
  }
  if (fit.amplitude_err > fit.amplitude) {
    throw std::runtime_error("degenerate fringe fit: amplitude uncertainty exceeds amplitude");
  }
  return fit;
}

FringeFit fringe_visibility(const FringeScan& scan, double window_ps) {
  scan.validate();
  std::vector<double> counts(scan.histograms.size());
  for (size_t i = 0; i < scan.histograms.size(); ++i) {
    counts[i] = scan.histograms[i].windowed_counts(window_ps);
  }
  return fit_cosine_fringe(scan.phases_rad, counts);
}

double fusion_fidelity(double v) {
  if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("visibility must lie in [0, 1]");
  const double gamma = 2.0 * v / (1.0 + v);
  return 0.5 * (1.0 + gamma);
}

double projection_visibility(double detuning_ghz, double linewidth_ghz,
                             const JitterModel& per_channel) {
  if (!(linewidth_ghz > 0.0)) throw std::invalid_argument("linewidth must be positive");
  if (detuning_ghz < 0.0) throw std::invalid_argument("detuning must be non-negative");

  TimeGrid grid;
  grid.t_start = -256.0;
  grid.dt = 0.125;
  grid.n = 16384;
  const double dw = ghz_to_rad_ps(detuning_ghz);
  const double lw = ghz_to_rad_ps(linewidth_ghz);
  TemporalProfile za = lorentzian_temporal(+0.5 * dw, lw, grid);
  TemporalProfile zb = lorentzian_temporal(-0.5 * dw, lw, grid);

  PairCorrelator corr(PhotonEnsemble::pure(std::move(za)), PhotonEnsemble::pure(std::move(zb)));
  const double fwhm = combined_jitter_fwhm({per_channel, per_channel});
  if (fwhm > 0.0) corr = corr.jittered(fwhm);

  // Balanced splitter amplitudes: |alpha| = |beta| = 1/2, alpha*conj(beta) = -1/4.
  const auto [alpha, beta] = pair_amplitudes(mzi(0.5 * kPi), 0, 1, 0, 1);
  const double h0 = corr.fringe(alpha, beta).value_at(0.0);
  const double d0 = corr.distinguishable_fringe(alpha, beta).value_at(0.0);
  if (d0 <= 0.0) throw std::runtime_error("distinguishable baseline vanished at tau = 0");
  return 1.0 - h0 / d0;
}

}  // namespace trisim
