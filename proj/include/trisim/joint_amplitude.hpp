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

#ifndef TRISIM_JOINT_AMPLITUDE_HPP
#define TRISIM_JOINT_AMPLITUDE_HPP

#include <vector>

#include <Eigen/Dense>

#include "trisim/grids.hpp"
#include "trisim/interference.hpp"
#include "trisim/profiles.hpp"

namespace trisim {

enum class JointDomain { kSpectral, kTemporal };

// Two-photon joint amplitude, rows = signal, columns = idler. The spectral
// grids are kept in both domains; temporal axes are their duals. Normalized
// so that sum |amp|^2 * measure_s * measure_i = 1.
struct JointAmplitude {
  JointDomain domain = JointDomain::kSpectral;
  FrequencyGrid grid_s;
  FrequencyGrid grid_i;
  Eigen::MatrixXcd amp;

  double measure_s() const;  // domega (spectral) or dt (temporal)
  double measure_i() const;
  double frobenius() const;
  void normalize();
  void validate() const;
};

// 512-bin grid at the detection-grid frequency resolution, spanning the same
// 4096 ps record as TimeGrid{} so Schmidt modes resample onto it exactly.
FrequencyGrid default_jsa_grid();

// F(nu_s, nu_i) = G(nu_s + nu_i) l(nu_s) l(nu_i), where G is the FFT-evaluated
// autoconvolution of alpha(nu) l(nu) (pump envelope times the pump resonance)
// and l is the Lorentzian ring lineshape. All resonances and the pump sit at
// `ring_center_ghz` relative to the grid carrier, so a detuned source is the
// zero-centered one translated in frequency. `unit_pump_envelope` replaces G
// by 1, which makes the amplitude separable (rank 1) for testing.
JointAmplitude build_jsa(const PumpSpec& pump, double ring_linewidth_ghz, double ring_center_ghz,
                         const FrequencyGrid& grid, bool unit_pump_envelope = false);

// Forward 2-D Fourier transform, one spectral_to_temporal per axis. Spectral
// input becomes the joint temporal amplitude; applying the forward transform
// to a temporal input again lands back in the spectral domain with the
// coordinates reflected. Norm is preserved.
JointAmplitude jsa_to_jta(const JointAmplitude& j);

// Biorthogonal expansion amp = sum_k sqrt(lambda_k) zeta_sk(t1) zeta_ik(t2).
// Weights sum to 1; modes are orthonormal temporal profiles on the dual grid.
struct SchmidtDecomposition {
  std::vector<double> weights;  // descending
  std::vector<TemporalProfile> signal_modes;
  std::vector<TemporalProfile> idler_modes;

  int size() const { return static_cast<int>(weights.size()); }
};

// SVD of the joint amplitude in either domain (spectral singular vectors are
// transformed, so modes are always temporal). Modes with negligible weight
// are dropped: the retained cumulative weight is 1 - 1e-13, which keeps the
// reconstruction exact to well below 1e-6 Frobenius.
SchmidtDecomposition schmidt_decompose(const JointAmplitude& j);

// sum lambda_k^2, the heralded single-photon purity.
double purity(const SchmidtDecomposition& d);

// Band-limited interpolation onto a finer grid covering the same span and
// t_start: zero-pad the spectrum at the shared resolution. Exact at common
// sample points and norm-preserving.
TemporalProfile resample_to_grid(const TemporalProfile& z, const TimeGrid& target);

// Heralded single-photon ensembles: truncate at the cumulative weight,
// renormalize, and resample every mode onto the detection grid.
PhotonEnsemble signal_ensemble(const SchmidtDecomposition& d, double cumulative,
                               const TimeGrid& detection);
PhotonEnsemble idler_ensemble(const SchmidtDecomposition& d, double cumulative,
                              const TimeGrid& detection);

}  // namespace trisim

#endif
