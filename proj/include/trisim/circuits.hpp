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

#ifndef TRISIM_CIRCUITS_HPP
#define TRISIM_CIRCUITS_HPP

#include <string>
#include <utility>
#include <vector>

#include "trisim/permanent.hpp"

namespace trisim {

// Lossless linear circuit. Matrix convention: row = output mode, column =
// input mode, so amplitudes map as out_i = sum_j T_ij in_j.
struct Interferometer {
  CMatrix m;

  int dim() const { return static_cast<int>(m.rows()); }
};

// Validates unitarity (max |T T^dag - I| <= 1e-9) and wraps the matrix.
Interferometer make_interferometer(CMatrix m);

// Ordered list of occupied modes; distinct, in [0, dim).
struct ModePattern {
  std::vector<int> modes;

  ModePattern() = default;
  ModePattern(std::initializer_list<int> m) : modes(m) {}
  explicit ModePattern(std::vector<int> m) : modes(std::move(m)) {}

  int size() const { return static_cast<int>(modes.size()); }
  void validate(int dim) const;
};

// The one-parameter complex Hadamard family
//   F4(phi) = (1/2) [[1,  1,    1,  1   ],
//                    [1,  e,   -1, -e   ],
//                    [1, -1,    1, -1   ],
//                    [1, -e,   -1,  e   ]],  e = exp(i phi).
Interferometer f4(double phi);

// Mach-Zehnder: (1/2) [[a-1, i(a+1)], [i(a+1), 1-a]] with a = exp(i theta),
// then an external phase on input mode 0. |T00|^2 = sin^2(theta/2), so
// theta = 0 is a full cross and theta = pi/2 a balanced splitter.
Interferometer mzi(double theta, double phi_ext = 0.0);

// Scattering submatrix: rows follow `outputs`, columns follow `inputs`.
CMatrix submatrix(const Interferometer& t, const ModePattern& inputs, const ModePattern& outputs);

// Normalized Bell coefficients ((1+e^{i phi})/2, (1-e^{i phi})/2) of the
// fused state written in the (Phi-, Psi-) basis.
std::pair<std::complex<double>, std::complex<double>> bell_state_coefficients(double phi);

// Embed a 2-mode circuit on modes (a, b) of a dim-mode identity.
Interferometer embed_two_mode(int dim, int a, int b, const Interferometer& u2);

// Input MZIs (internal phase mzi_theta) on mode pairs (0,1) and (2,3)
// followed by F4(phi).
Interferometer three_photon_bs(double phi, double mzi_theta = 0.9);

// Raw-matrix import: each line holds dim complex entries "re,im" separated by
// commas (2*dim fields per row); unitarity-validated on load.
Interferometer load_interferometer_csv(const std::string& path);

}  // namespace trisim

#endif
