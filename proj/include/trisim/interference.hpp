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

#ifndef TRISIM_INTERFERENCE_HPP
#define TRISIM_INTERFERENCE_HPP

#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "trisim/circuits.hpp"
#include "trisim/histogram.hpp"
#include "trisim/profiles.hpp"

namespace trisim {

// Statistical mixture of orthonormal temporal modes describing one photon.
// A pure photon is a single mode with weight 1.
struct PhotonEnsemble {
  std::vector<double> weights;
  std::vector<TemporalProfile> modes;

  int size() const { return static_cast<int>(weights.size()); }
  void validate() const;

  static PhotonEnsemble pure(TemporalProfile mode);
};

// Time-resolved N-photon coincidence density: |Perm(L)|^2 with
// L_ij = T_ij * zeta_j(t_i). `sub` is a scattering submatrix (rows = chosen
// outputs, columns = occupied inputs); photon j occupies input column j.
double coincidence_probability_pure(const CMatrix& sub,
                                    const std::vector<TemporalProfile>& profiles,
                                    const std::vector<double>& times_ps);

// Incoherent sum over per-photon mode combinations, each term weighted by the
// product of mode weights.
double coincidence_probability_mixed(const CMatrix& sub,
                                     const std::vector<PhotonEnsemble>& photons,
                                     const std::vector<double>& times_ps);

// Closed form for a photon pair entering a 4-mode Hadamard on inputs (0, 1)
// and detected on outputs (0, 1):
//   P(t0, t0+tau) = (1/16) |z1(t0+tau) z2(t0) + e^{i phi} z1(t0) z2(t0+tau)|^2.
double hadamard_pair_probability(double phi, const TemporalProfile& z1, const TemporalProfile& z2,
                                 double t0_ps, double tau_ps);

// Joint detection density at (t1, t2).
using JointDensityFn = std::function<double(double t1_ps, double t2_ps)>;

// Marginalizes a two-photon joint density over the absolute detection time by
// the trapezoidal rule, producing the relative-delay fringe on lags
// tau = m * grid.dt for m in [-(n-1), n-1].
CoincidenceHistogram relative_time_fringe(const JointDensityFn& density, const TimeGrid& grid);

// Convolves a histogram with the combined Gaussian response of the involved
// channels (variances add). See apply_jitter(h, fwhm) in histogram.hpp.
CoincidenceHistogram apply_jitter(const CoincidenceHistogram& h,
                                  const std::vector<JitterModel>& channels);

// Path amplitudes for a photon pair routed ia,ib -> oa,ob through t:
//   alpha = T(oa,ia) T(ob,ib)   (direct),
//   beta  = T(oa,ib) T(ob,ia)   (swapped).
std::pair<cdouble, cdouble> pair_amplitudes(const Interferometer& t, int ia, int ib, int oa,
                                            int ob);

// Two-photon relative-delay fringes for mixed photons, evaluated with FFT
// cross-correlations so a full phase scan reuses one set of correlations.
// For detection density
//   P(t1, t2) = sum_kl w_ak w_bl |alpha zak(t1) zbl(t2) + beta zbl(t1) zak(t2)|^2
// the tau-marginal is
//   h(tau) = |alpha|^2 A(tau) + |beta|^2 A(-tau) + 2 Re[alpha conj(beta) X(tau)].
class PairCorrelator {
 public:
  PairCorrelator(const PhotonEnsemble& a, const PhotonEnsemble& b);

  double dt() const { return dt_; }
  // Returns a copy whose A and X are convolved with the combined Gaussian
  // response; fringes built from it are jittered fringes.
  PairCorrelator jittered(double fwhm_ps) const;

  CoincidenceHistogram fringe(cdouble alpha, cdouble beta) const;
  // Same pipeline with the interference cross-term dropped.
  CoincidenceHistogram distinguishable_fringe(cdouble alpha, cdouble beta) const;

 private:
  PairCorrelator() = default;

  double dt_ = 0.0;
  int min_lag_ = 0;  // lag index of element 0; tau = lag * dt
  Eigen::VectorXd marg_;   // A(tau)
  Eigen::VectorXcd cross_; // X(tau)
};

// Phase scan with one histogram per phase value (strictly increasing phases).
struct FringeScan {
  std::vector<double> phases_rad;
  std::vector<CoincidenceHistogram> histograms;

  void validate() const;
};

// Least-squares fit of counts(theta) = a + b cos(theta - theta0).
struct FringeFit {
  double offset = 0.0;     // a
  double amplitude = 0.0;  // b >= 0
  double phase0 = 0.0;
  double offset_err = 0.0;
  double amplitude_err = 0.0;

  double visibility() const { return amplitude / offset; }
  double visibility_err() const;
};

// Requires >= 8 samples spanning at least one period of the fitted cosine
// (up to the missing duplicate endpoint). Throws on a degenerate fit
// (amplitude uncertainty exceeding the amplitude).
FringeFit fit_cosine_fringe(const std::vector<double>& phases_rad,
                            const std::vector<double>& counts);

// Integrates each histogram over |tau| <= window/2 and fits the fringe.
FringeFit fringe_visibility(const FringeScan& scan, double window_ps);

// F = (1 + gamma)/2 with gamma = 2 v / (1 + v); requires 0 <= v <= 1.
double fusion_fidelity(double v);

// Projected visibility for two Lorentzian photons at +-detuning/2 on a
// balanced splitter, read from the jitter-convolved fringe at tau = 0:
//   V = 1 - h(0) / h_distinguishable(0),
// with the distinguishable baseline computed by dropping the cross term.
// Both detection channels use `per_channel` timing response.
double projection_visibility(double detuning_ghz, double linewidth_ghz,
                             const JitterModel& per_channel);

}  // namespace trisim

#endif
