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

#include "trisim/circuits.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace trisim {

namespace {

constexpr double kUnitarityTol = 1e-9;

void require_unitary(const CMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw std::invalid_argument("interferometer matrix must be square and non-empty");
  }
  CMatrix gram = m * m.adjoint();
  gram -= CMatrix::Identity(m.rows(), m.cols());
  double dev = gram.cwiseAbs().maxCoeff();
  if (dev > kUnitarityTol) {
    throw std::invalid_argument("interferometer matrix is not unitary (max deviation " +
                                std::to_string(dev) + ")");
  }
}

}  // namespace

Interferometer make_interferometer(CMatrix m) {
  require_unitary(m);
  return Interferometer{std::move(m)};
}

void ModePattern::validate(int dim) const {
  std::unordered_set<int> seen;
  for (int m : modes) {
    if (m < 0 || m >= dim) throw std::invalid_argument("mode index out of range");
    if (!seen.insert(m).second) throw std::invalid_argument("repeated mode in pattern");
  }
}

Interferometer f4(double phi) {
  const std::complex<double> e = std::polar(1.0, phi);
  CMatrix m(4, 4);
  m << 1, 1, 1, 1,  //
      1, e, -1, -e,  //
      1, -1, 1, -1,  //
      1, -e, -1, e;
  m *= 0.5;
  return make_interferometer(std::move(m));
}

Interferometer mzi(double theta, double phi_ext) {
  const std::complex<double> i(0.0, 1.0);
  const std::complex<double> a = std::polar(1.0, theta);
  CMatrix m(2, 2);
  m << (a - 1.0) * 0.5, i * (a + 1.0) * 0.5,  //
      i * (a + 1.0) * 0.5, (1.0 - a) * 0.5;
  if (phi_ext != 0.0) m.col(0) *= std::polar(1.0, phi_ext);
  return make_interferometer(std::move(m));
}

CMatrix submatrix(const Interferometer& t, const ModePattern& inputs, const ModePattern& outputs) {
  inputs.validate(t.dim());
  outputs.validate(t.dim());
  if (inputs.size() != outputs.size()) {
    throw std::invalid_argument("input and output patterns must have equal size");
  }
  CMatrix sub(outputs.size(), inputs.size());
  for (int r = 0; r < outputs.size(); ++r) {
    for (int c = 0; c < inputs.size(); ++c) {
      sub(r, c) = t.m(outputs.modes[r], inputs.modes[c]);
    }
  }
  return sub;
}

std::pair<std::complex<double>, std::complex<double>> bell_state_coefficients(double phi) {
  const std::complex<double> e = std::polar(1.0, phi);
  return {(1.0 + e) * 0.5, (1.0 - e) * 0.5};
}

Interferometer embed_two_mode(int dim, int a, int b, const Interferometer& u2) {
  if (u2.dim() != 2) throw std::invalid_argument("embed_two_mode expects a 2-mode circuit");
  if (a == b) throw std::invalid_argument("embed_two_mode modes must differ");
  ModePattern({a, b}).validate(dim);
  CMatrix m = CMatrix::Identity(dim, dim);
  m(a, a) = u2.m(0, 0);
  m(a, b) = u2.m(0, 1);
  m(b, a) = u2.m(1, 0);
  m(b, b) = u2.m(1, 1);
  return make_interferometer(std::move(m));
}

Interferometer three_photon_bs(double phi, double mzi_theta) {
  Interferometer pre01 = embed_two_mode(4, 0, 1, mzi(mzi_theta));
  Interferometer pre23 = embed_two_mode(4, 2, 3, mzi(mzi_theta));
  CMatrix m = f4(phi).m * pre01.m * pre23.m;
  return make_interferometer(std::move(m));
}

Interferometer load_interferometer_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open interferometer file: " + path);
  std::vector<std::vector<std::complex<double>>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> fields;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        size_t used = 0;
        double v = std::stod(tok, &used);
        while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used]))) ++used;
        if (used != tok.size()) throw std::invalid_argument(tok);
        fields.push_back(v);
      } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": malformed matrix entry '" + tok + "'");
      }
    }
    if (fields.empty() || fields.size() % 2 != 0) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected an even number of re,im fields");
    }
    std::vector<std::complex<double>> row;
    for (size_t k = 0; k + 1 < fields.size(); k += 2) row.emplace_back(fields[k], fields[k + 1]);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error(path + ": empty matrix file");
  const size_t dim = rows.size();
  CMatrix m(dim, dim);
  for (size_t r = 0; r < dim; ++r) {
    if (rows[r].size() != dim) {
      throw std::runtime_error(path + ": row " + std::to_string(r + 1) + " has " +
                               std::to_string(rows[r].size()) + " entries, expected " +
                               std::to_string(dim));
    }
    for (size_t c = 0; c < dim; ++c) m(r, c) = rows[r][c];
  }
  return make_interferometer(std::move(m));
}

}  // namespace trisim
