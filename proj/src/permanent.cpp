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

#include "trisim/permanent.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace trisim {

namespace {

void require_square(Eigen::Index rows, Eigen::Index cols, const char* what) {
  if (rows != cols) throw std::invalid_argument(std::string(what) + ": matrix must be square");
}

struct KahanSum {
  double s = 0.0, c = 0.0;
  void add(double x) {
    double y = x - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

// Ryser with Gray-code updates:
//   Perm(A) = (-1)^n sum_{S != 0} (-1)^|S| prod_i sum_{j in S} a_ij.
// One row-sum vector is updated by a single column per step.
template <typename Scalar, bool Compensated>
Scalar ryser_permanent(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& m) {
  const int n = static_cast<int>(m.rows());
  if (n == 0) return Scalar(1);
  if (n == 1) return m(0, 0);
  if (n == 2) return m(0, 0) * m(1, 1) + m(0, 1) * m(1, 0);

  std::vector<Scalar> row(n, Scalar(0));
  const uint64_t count = (uint64_t{1} << n) - 1;
  uint64_t gray = 0;

  KahanSum re, im;
  Scalar plain_total(0);

  for (uint64_t k = 1; k <= count; ++k) {
    uint64_t next = k ^ (k >> 1);
    uint64_t bit = gray ^ next;
    int j = std::countr_zero(bit);
    if (next & bit)
      for (int i = 0; i < n; ++i) row[i] += m(i, j);
    else
      for (int i = 0; i < n; ++i) row[i] -= m(i, j);
    gray = next;

    Scalar prod = row[0];
    for (int i = 1; i < n; ++i) prod *= row[i];

    bool negate = ((n - std::popcount(gray)) & 1) != 0;
    if constexpr (Compensated) {
      double pre, pim;
      if constexpr (std::is_same_v<Scalar, std::complex<double>>) {
        pre = prod.real();
        pim = prod.imag();
      } else {
        pre = prod;
        pim = 0.0;
      }
      re.add(negate ? -pre : pre);
      im.add(negate ? -pim : pim);
    } else {
      plain_total += negate ? -prod : prod;
    }
  }

  if constexpr (Compensated) {
    if constexpr (std::is_same_v<Scalar, std::complex<double>>)
      return Scalar(re.s, im.s);
    else
      return Scalar(re.s);
  } else {
    return plain_total;
  }
}

// Glynn: Perm(A) = 2^{1-n} sum_{d in {+-1}^n, d_0 = +1} (prod_i d_i) prod_j (sum_i d_i a_ij)
std::complex<double> glynn_permanent(const CMatrix& m) {
  const int n = static_cast<int>(m.rows());
  if (n == 0) return 1.0;
  if (n == 1) return m(0, 0);

  std::vector<std::complex<double>> col(n);
  for (int j = 0; j < n; ++j) col[j] = m.col(j).sum();
  std::vector<int> delta(n, 1);

  std::complex<double> total(0);
  double sign = 1.0;
  const uint64_t count = uint64_t{1} << (n - 1);
  uint64_t gray = 0;

  for (uint64_t k = 0; k < count; ++k) {
    std::complex<double> prod = col[0];
    for (int j = 1; j < n; ++j) prod *= col[j];
    total += sign * prod;

    if (k + 1 == count) break;
    uint64_t next = (k + 1) ^ ((k + 1) >> 1);
    uint64_t bit = gray ^ next;
    int i = std::countr_zero(bit) + 1;  // delta[0] stays +1
    gray = next;
    double step = -2.0 * delta[i];
    for (int j = 0; j < n; ++j) col[j] += step * m(i, j);
    delta[i] = -delta[i];
    sign = -sign;
  }
  return total / static_cast<double>(uint64_t{1} << (n - 1));
}

}  // namespace

std::complex<double> permanent(const CMatrix& m, PermanentMethod method) {
  require_square(m.rows(), m.cols(), "permanent");
  const int n = static_cast<int>(m.rows());
  if (n > 30) throw std::invalid_argument("permanent: n > 30 not supported");
  if (method == PermanentMethod::Glynn) return glynn_permanent(m);
  if (n > 16) return ryser_permanent<std::complex<double>, true>(m);
  return ryser_permanent<std::complex<double>, false>(m);
}

std::complex<double> brute_force_permanent(const CMatrix& m) {
  require_square(m.rows(), m.cols(), "brute_force_permanent");
  const int n = static_cast<int>(m.rows());
  if (n > 9) throw std::invalid_argument("brute_force_permanent: n > 9 not supported");
  if (n == 0) return 1.0;

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::complex<double> total(0);
  do {
    std::complex<double> prod(1);
    for (int i = 0; i < n; ++i) prod *= m(i, perm[i]);
    total += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

double permanent_abs_squared(const CMatrix& m) {
  require_square(m.rows(), m.cols(), "permanent_abs_squared");
  Eigen::MatrixXd sq = m.cwiseAbs2();
  return real_permanent(sq);
}

double real_permanent(const Eigen::MatrixXd& m) {
  require_square(m.rows(), m.cols(), "real_permanent");
  const int n = static_cast<int>(m.rows());
  if (n > 30) throw std::invalid_argument("real_permanent: n > 30 not supported");
  if (n > 16) return ryser_permanent<double, true>(m);
  return ryser_permanent<double, false>(m);
}

}  // namespace trisim
