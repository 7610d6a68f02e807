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

#ifndef TRISIM_PERMANENT_HPP
#define TRISIM_PERMANENT_HPP

#include <complex>

#include <Eigen/Dense>

namespace trisim {

using CMatrix = Eigen::MatrixXcd;

enum class PermanentMethod {
  RyserGray,  // Ryser's formula with Gray-code subset updates, O(2^n n)
  Glynn,      // Glynn's +-1 formula, cross-validation toggle
};

// Exact permanent of a square complex matrix, n <= 30. Stateless; callers may
// evaluate permanents concurrently. Compensated accumulation kicks in for
// n > 16 where the subset sums start to lose precision.
std::complex<double> permanent(const CMatrix& m,
                               PermanentMethod method = PermanentMethod::RyserGray);

// Direct sum over the permutation group; the testing oracle. n <= 9.
std::complex<double> brute_force_permanent(const CMatrix& m);

// Permanent of the element-wise squared-magnitude matrix; nonnegative.
double permanent_abs_squared(const CMatrix& m);

// Real-matrix permanent (same Ryser kernel over doubles).
double real_permanent(const Eigen::MatrixXd& m);

}  // namespace trisim

#endif
