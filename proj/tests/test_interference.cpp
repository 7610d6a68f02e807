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

#include <cmath>
#include <random>

#include "doctest.h"
#include "trisim/interference.hpp"
#include "trisim/units.hpp"

using namespace trisim;

namespace {

TimeGrid test_grid(int n = 1024, double dt = 1.0, double t_start = -128.0) {
  TimeGrid g;
  g.t_start = t_start;
  g.dt = dt;
  g.n = n;
  return g;
}

const double kLinewidth = ghz_to_rad_ps(3.8);
const double kDetuning = ghz_to_rad_ps(6.8146);  // 54 pm at 1541.3 nm

// Orthonormal Hermite-Gauss-like temporal modes for mixed-state tests.
TemporalProfile hermite_mode(int order, double width, const TimeGrid& grid) {
  TemporalProfile z;
  z.grid = grid;
  z.amp.resize(grid.n);
  for (int j = 0; j < grid.n; ++j) {
    const double t = grid.t(j) / width;
    const double g = std::exp(-0.5 * t * t);
    z.amp[j] = order == 0 ? g : t * g;
  }
  z.normalize();
  return z;
}

PhotonEnsemble mixed_ensemble(double w0, double detuning, const TimeGrid& grid) {
  PhotonEnsemble e;
  e.weights = {w0, 1.0 - w0};
  e.modes.push_back(apply_detuning(hermite_mode(0, 12.0, grid), detuning));
  e.modes.push_back(apply_detuning(hermite_mode(1, 12.0, grid), detuning));
  return e;
}

}  // namespace

TEST_CASE("single photon: probability is the profile intensity") {
  TimeGrid grid = test_grid();
  TemporalProfile z = lorentzian_temporal(0.0, kLinewidth, grid);
  CMatrix t = CMatrix::Identity(1, 1);
  for (double tp : {5.0, 20.0, 60.0}) {
    CHECK(coincidence_probability_pure(t, {z}, {tp}) ==
          doctest::Approx(std::norm(z.value_at(tp))).epsilon(1e-12));
  }
}

TEST_CASE("balanced splitter fully suppresses equal-time coincidences") {
  TimeGrid grid = test_grid();
  TemporalProfile z = lorentzian_temporal(0.0, kLinewidth, grid);
  CMatrix sub = submatrix(mzi(kPi / 2.0), ModePattern({0, 1}), ModePattern({0, 1}));

  for (double tp : {3.0, 17.0, 44.0}) {
    CHECK(coincidence_probability_pure(sub, {z, z}, {tp, tp}) < 1e-12);
  }

  // Mixedness does not reopen the equal-time channel when both photons carry
  // the same mixture.
  std::vector<PhotonEnsemble> photons = {mixed_ensemble(0.8, 0.0, grid),
                                         mixed_ensemble(0.8, 0.0, grid)};
  for (double tp : {3.0, 17.0, 44.0}) {
    CHECK(coincidence_probability_mixed(sub, photons, {tp, tp}) < 1e-12);
  }
}

TEST_CASE("general pair probability equals the closed form") {
  TimeGrid grid = test_grid(2048, 0.5, -64.0);
  TemporalProfile z1 = lorentzian_temporal(+0.5 * kDetuning, kLinewidth, grid);
  TemporalProfile z2 = lorentzian_temporal(-0.5 * kDetuning, kLinewidth, grid);

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> uphi(0.0, kTwoPi);
  std::uniform_real_distribution<double> ut(0.0, 300.0);
  std::uniform_real_distribution<double> utau(-150.0, 150.0);
  for (int rep = 0; rep < 25; ++rep) {
    const double phi = uphi(rng);
    const double t0 = ut(rng);
    const double tau = utau(rng);
    CMatrix sub = submatrix(f4(phi), ModePattern({0, 1}), ModePattern({0, 1}));
    const double direct = coincidence_probability_pure(sub, {z1, z2}, {t0, t0 + tau});
    const double closed = hadamard_pair_probability(phi, z1, z2, t0, tau);
    CHECK(std::abs(direct - closed) <= 1e-10 * std::max(closed, 1e-30));
  }
}

TEST_CASE("permutation symmetry of the joint density") {
  TimeGrid grid = test_grid();
  TemporalProfile z1 = lorentzian_temporal(+0.5 * kDetuning, kLinewidth, grid);
  TemporalProfile z2 = lorentzian_temporal(-0.5 * kDetuning, kLinewidth, grid);
  CMatrix sub = submatrix(f4(1.2), ModePattern({0, 1}), ModePattern({0, 1}));

  // Swapping detection events (t_i, output row i) together is a relabeling.
  CMatrix swapped = sub;
  swapped.row(0).swap(swapped.row(1));
  const double a = coincidence_probability_pure(sub, {z1, z2}, {30.0, 75.0});
  const double b = coincidence_probability_pure(swapped, {z1, z2}, {75.0, 30.0});
  CHECK(a == doctest::Approx(b).epsilon(1e-12));
}

TEST_CASE("mixed probability reduces to pure and stays nonnegative") {
  TimeGrid grid = test_grid();
  TemporalProfile z = lorentzian_temporal(0.0, kLinewidth, grid);
  CMatrix sub = submatrix(f4(0.7), ModePattern({0, 1}), ModePattern({0, 1}));

  std::vector<PhotonEnsemble> pure_pair = {PhotonEnsemble::pure(z), PhotonEnsemble::pure(z)};
  CHECK(coincidence_probability_mixed(sub, pure_pair, {10.0, 35.0}) ==
        doctest::Approx(coincidence_probability_pure(sub, {z, z}, {10.0, 35.0}))
            .epsilon(1e-12));

  std::vector<PhotonEnsemble> photons = {mixed_ensemble(0.6, 0.0, grid),
                                         mixed_ensemble(0.6, kDetuning, grid)};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ut(-30.0, 30.0);
  for (int rep = 0; rep < 20; ++rep) {
    CHECK(coincidence_probability_mixed(sub, photons, {ut(rng), ut(rng)}) >= 0.0);
  }
}

TEST_CASE("hadamard pair closed-form examples") {
  TimeGrid grid = test_grid();
  TemporalProfile z = lorentzian_temporal(0.0, kLinewidth, grid);

  CHECK(hadamard_pair_probability(kPi, z, z, 25.0, 0.0) < 1e-15);
  CHECK(hadamard_pair_probability(0.0, z, z, 25.0, 0.0) ==
        doctest::Approx(0.25 * std::pow(std::norm(z.value_at(25.0)), 2)).epsilon(1e-12));

  // Detuned pair at phi = 0: fringe zero when detuning * tau = pi.
  TemporalProfile z1 = lorentzian_temporal(+0.5 * kDetuning, kLinewidth, grid);
  TemporalProfile z2 = lorentzian_temporal(-0.5 * kDetuning, kLinewidth, grid);
  const double tau_zero = kPi / kDetuning;
  const double scale = hadamard_pair_probability(0.0, z1, z2, 30.0, 0.0);
  CHECK(hadamard_pair_probability(0.0, z1, z2, 30.0, tau_zero) < 1e-6 * scale);
}

TEST_CASE("relative_time_fringe matches the pair correlator") {
  // t_end ~ 23 decay times so the trapezoid's half-weighted edge bin is
  // negligible against the correlator's plain Riemann sum.
  TimeGrid grid = test_grid(1024, 1.0, -32.0);
  TemporalProfile z1 = lorentzian_temporal(+0.5 * kDetuning, kLinewidth, grid);
  TemporalProfile z2 = lorentzian_temporal(-0.5 * kDetuning, kLinewidth, grid);
  const auto [alpha, beta] = pair_amplitudes(f4(1.2), 0, 1, 0, 1);

  auto density = [&](double t1, double t2) {
    const cdouble amp =
        alpha * z1.value_at(t1) * z2.value_at(t2) + beta * z2.value_at(t1) * z1.value_at(t2);
    return std::norm(amp);
  };
  CoincidenceHistogram direct = relative_time_fringe(density, grid);

  PairCorrelator corr(PhotonEnsemble::pure(z1), PhotonEnsemble::pure(z2));
  CoincidenceHistogram fast = corr.fringe(alpha, beta);

  REQUIRE(direct.n_bins() == fast.n_bins());
  double scale = 0.0;
  for (double d : fast.density) scale = std::max(scale, d);
  for (int i = 0; i < direct.n_bins(); ++i) {
    CHECK(std::abs(direct.density[i] - fast.density[i]) < 1e-9 * scale + 1e-15);
  }
}

TEST_CASE("pair correlator handles mixtures like the permanent engine") {
  TimeGrid grid = test_grid(256, 1.0, -128.0);
  PhotonEnsemble ea = mixed_ensemble(0.7, 0.0, grid);
  PhotonEnsemble eb = mixed_ensemble(0.7, kDetuning, grid);
  CMatrix sub = submatrix(f4(0.9), ModePattern({0, 1}), ModePattern({0, 1}));
  const auto [alpha, beta] = pair_amplitudes(f4(0.9), 0, 1, 0, 1);

  auto density = [&](double t1, double t2) {
    return coincidence_probability_mixed(sub, {ea, eb}, {t1, t2});
  };
  CoincidenceHistogram direct = relative_time_fringe(density, grid);
  CoincidenceHistogram fast = PairCorrelator(ea, eb).fringe(alpha, beta);

  REQUIRE(direct.n_bins() == fast.n_bins());
  double scale = 0.0;
  for (double d : fast.density) scale = std::max(scale, d);
  for (int i = 0; i < direct.n_bins(); ++i) {
    CHECK(std::abs(direct.density[i] - fast.density[i]) < 1e-9 * scale + 1e-15);
  }
}

TEST_CASE("identical photons: no coincidences at zero delay") {
  TimeGrid grid = test_grid();
  TemporalProfile z = lorentzian_temporal(0.0, kLinewidth, grid);
  PairCorrelator corr(PhotonEnsemble::pure(z), PhotonEnsemble::pure(z));
  const auto [alpha, beta] = pair_amplitudes(mzi(kPi / 2.0), 0, 1, 0, 1);
  CoincidenceHistogram h = corr.fringe(alpha, beta);
  CHECK(h.value_at(0.0) < 1e-12);

  // A partner delayed by D >> 1/linewidth suppresses the interference term
  // to the envelope overlap exp(-linewidth*D): total counts on a Hadamard
  // become phase-independent at that level, while co-located photons show a
  // full (1 + cos phi)/2 fringe.
  TemporalProfile late = delay_profile(z, 500.0);
  PairCorrelator far(PhotonEnsemble::pure(z), PhotonEnsemble::pure(late));
  auto scan_spread = [](const PairCorrelator& c) {
    double lo = 1e300, hi = 0.0;
    for (int i = 0; i < 12; ++i) {
      const auto [alpha, beta] = pair_amplitudes(f4(i * kTwoPi / 12.0), 0, 1, 0, 1);
      const double counts = c.fringe(alpha, beta).integral();
      lo = std::min(lo, counts);
      hi = std::max(hi, counts);
    }
    return (hi - lo) / (0.5 * (hi + lo));
  };
  CHECK(scan_spread(far) < 5e-5);
  CHECK(scan_spread(corr) > 0.5);
}

TEST_CASE("jitter: combined width, identity, delta response, integral") {
  CHECK(combined_jitter_fwhm({{75.4, 15.7}, {75.4, 15.7}}) ==
        doctest::Approx(108.919).epsilon(1e-4));
  CHECK(combined_jitter_fwhm({{15.0, 4.71}, {15.0, 4.71}}) ==
        doctest::Approx(22.2).epsilon(2e-3));
  CHECK(combined_jitter_fwhm({{3.0, 0.0}, {3.0, 0.0}}) ==
        doctest::Approx(4.2426).epsilon(1e-4));

  CoincidenceHistogram h;
  h.bin_width_ps = 1.0;
  h.tau_start_ps = -50.0;
  h.density.assign(100, 0.0);
  h.density[50] = 1.0;  // delta at tau = 0.5

  CoincidenceHistogram same = apply_jitter(h, 0.0);
  CHECK(same.n_bins() == h.n_bins());
  CHECK(same.density[50] == 1.0);

  CoincidenceHistogram blurred = apply_jitter(h, 10.0);
  CHECK(blurred.integral() == doctest::Approx(h.integral()).epsilon(1e-6));
  // Half maximum at +-FWHM/2 around the delta location.
  const double peak = blurred.value_at(0.5);
  CHECK(blurred.value_at(0.5 + 5.0) == doctest::Approx(0.5 * peak).epsilon(0.02));
  CHECK(blurred.value_at(0.5 - 5.0) == doctest::Approx(0.5 * peak).epsilon(0.02));

  CHECK_THROWS_AS(apply_jitter(h, 3.0), std::invalid_argument);  // bin > fwhm/4

  // Channel-list overload matches the plain-FWHM one.
  CoincidenceHistogram via_channels = apply_jitter(h, {{6.0, 0.0}, {8.0, 0.0}});
  CoincidenceHistogram via_fwhm = apply_jitter(h, 10.0);
  CHECK(via_channels.n_bins() == via_fwhm.n_bins());
  for (int i = 0; i < via_channels.n_bins(); ++i) {
    CHECK(via_channels.density[i] == doctest::Approx(via_fwhm.density[i]).epsilon(1e-12));
  }
}

TEST_CASE("windowed counts: central bin, monotonicity, full range") {
  CoincidenceHistogram h;
  h.bin_width_ps = 2.0;
  h.tau_start_ps = -11.0;  // centers at -10, -8, ..., 10
  h.density.assign(11, 1.0);
  CHECK(h.windowed_counts(2.0) == doctest::Approx(2.0));   // just the tau=0 bin
  CHECK(h.windowed_counts(1000.0) == doctest::Approx(h.integral()));
  double prev = 0.0;
  for (double w : {2.0, 6.0, 10.0, 14.0, 22.0}) {
    const double c = h.windowed_counts(w);
    CHECK(c >= prev);
    prev = c;
  }
  CHECK_THROWS_AS(h.windowed_counts(-1.0), std::invalid_argument);
}

TEST_CASE("cosine fringe fit recovers amplitude, offset, visibility") {
  std::vector<double> phases, counts;
  for (int i = 0; i < 16; ++i) {
    const double th = i * kTwoPi / 16.0;
    phases.push_back(th);
    counts.push_back(2.0 + 1.0 * std::cos(th - 0.4));
  }
  FringeFit fit = fit_cosine_fringe(phases, counts);
  CHECK(fit.offset == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(fit.amplitude == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(fit.phase0 == doctest::Approx(0.4).epsilon(1e-6));
  CHECK(fit.visibility() == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(fit.offset_err < 1e-9);
  CHECK(fit.amplitude_err < 1e-9);

  // Noisy fringe: errors scale with the residuals but the fit stays close.
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0.0, 0.02);
  std::vector<double> noisy = counts;
  for (double& c : noisy) c += noise(rng);
  FringeFit nfit = fit_cosine_fringe(phases, noisy);
  CHECK(std::abs(nfit.visibility() - 0.5) < 0.05);
  CHECK(nfit.amplitude_err > 0.0);
  CHECK(nfit.visibility_err() > 0.0);

  CHECK_THROWS_AS(fit_cosine_fringe({0.0, 1.0, 2.0}, {1.0, 2.0, 1.0}), std::invalid_argument);
  std::vector<double> short_span_p, short_span_c;
  for (int i = 0; i < 12; ++i) {
    short_span_p.push_back(i * 0.2);
    short_span_c.push_back(1.0 + std::cos(i * 0.2));
  }
  CHECK_THROWS_AS(fit_cosine_fringe(short_span_p, short_span_c), std::invalid_argument);

  // A pure second harmonic has no power at the fitted frequency: degenerate.
  std::vector<double> second(phases.size());
  for (size_t i = 0; i < phases.size(); ++i) second[i] = 1.0 + std::cos(2.0 * phases[i]);
  CHECK_THROWS_AS(fit_cosine_fringe(phases, second), std::runtime_error);
}

TEST_CASE("fringe scan plumbing and the 1/3 distinguishable floor") {
  TimeGrid grid = test_grid();
  TemporalProfile z = lorentzian_temporal(0.0, kLinewidth, grid);
  PairCorrelator corr(PhotonEnsemble::pure(z), PhotonEnsemble::pure(z));

  FringeScan scan;
  const int steps = 32;
  for (int i = 0; i < steps; ++i) {
    const double theta = i * kTwoPi / steps;
    const auto [alpha, beta] = pair_amplitudes(mzi(theta), 0, 1, 0, 1);
    scan.phases_rad.push_back(2.0 * theta);  // counts go as cos(2 theta)
    scan.histograms.push_back(corr.distinguishable_fringe(alpha, beta));
  }
  scan.validate();
  FringeFit fit = fringe_visibility(scan, 200.0);
  CHECK(fit.visibility() == doctest::Approx(1.0 / 3.0).epsilon(1e-6));

  FringeScan bad = scan;
  bad.phases_rad[3] = bad.phases_rad[2];
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("fusion fidelity closed form") {
  CHECK(fusion_fidelity(0.60) == doctest::Approx(0.875).epsilon(1e-12));
  CHECK(fusion_fidelity(1.0) == doctest::Approx(1.0));
  CHECK(fusion_fidelity(1.0 / 3.0) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(fusion_fidelity(0.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(fusion_fidelity(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(fusion_fidelity(1.1), std::invalid_argument);
}

TEST_CASE("projection visibility: limits and monotone trend") {
  JitterModel none{0.0, 0.0};
  CHECK(projection_visibility(0.0, 3.8, none) == doctest::Approx(1.0).epsilon(1e-9));

  JitterModel fast{3.0, 0.0};  // 4.24 ps combined
  const double v_small = projection_visibility(10.0, 3.8, fast);
  const double v_large = projection_visibility(120.0, 3.8, fast);
  CHECK(v_small > v_large);
  CHECK(v_small > 0.9);

  CHECK_THROWS_AS(projection_visibility(5.0, -1.0, none), std::invalid_argument);
  CHECK_THROWS_AS(projection_visibility(-5.0, 3.8, none), std::invalid_argument);
}
