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

#ifndef TRISIM_SAMPLING_HPP
#define TRISIM_SAMPLING_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "trisim/circuits.hpp"
#include "trisim/histogram.hpp"

namespace trisim {

// One detected event: which sources fired, where the photons came out, and
// when. arrival_times_ps[k] belongs to output_pattern.modes[k].
struct Sample {
  ModePattern input_pattern;
  ModePattern output_pattern;
  std::vector<double> arrival_times_ps;

  int size() const { return input_pattern.size(); }
  void validate() const;
};

enum class ModelKind {
  kTest,         // partial interference: r |Perm(L)|^2 + (1-r) Perm(|L|^2)
  kAdversarial,  // non-interfering scattering: Perm(|L|^2)
};

// Hypothesis under comparison. r is the interference weight of the test
// model; the default encodes a pairwise overlap of 0.8 (r = overlap^2). The
// adversarial kind ignores r.
struct ModelSpec {
  ModelKind kind = ModelKind::kTest;
  double r = 0.64;

  void validate() const;  // r in [0, 1]
};

// Running Eq.-4 style model comparison. Likelihoods accumulate in log space
// (2000-sample products underflow doubles); the posterior after each sample
// is kept for plotting convergence.
struct BayesTrace {
  double log_odds = 0.0;            // ln P(D|test) - ln P(D|adversarial)
  std::vector<double> posteriors;   // P(test | first i samples)

  double posterior() const;
  int size() const { return static_cast<int>(posteriors.size()); }
};

// Folds one sample's likelihood pair into the trace. Both likelihoods must
// be finite and >= 0; a sample impossible under both models is an error.
BayesTrace bayes_update(BayesTrace trace, double p_test, double p_adv);

// Time-integrated test-model probability for a scattering submatrix, valid
// when all photons share one spectral profile: r |Perm(T)|^2 + (1-r)
// Perm(|T|^2). Unnormalized; callers normalize over their pattern set.
double test_probability(const CMatrix& sub, double r);

// Time-resolved densities. lambda is the time-dressed submatrix
// L_ab = T(o_a, i_b) * zeta_b(t_a).
double test_probability_time_resolved(const CMatrix& lambda, double r);
double adversarial_probability(const CMatrix& lambda);

// True when every pairwise source detuning in the pattern vanishes (all
// occupied inputs emit at one frequency). detunings_ghz holds one entry per
// source (= input mode); an input without an entry is an unknown source.
bool pattern_spectrally_aligned(const ModePattern& input,
                                const std::vector<double>& detunings_ghz);

// Scattershot adversary, time-integrated: spectrally aligned input patterns
// keep the test model's partial-interference law (sharing the r hedge, so
// aligned inputs carry no evidence either way), spectrally distinguishable
// ones scatter without interference.
double scattershot_adversary_probability(const CMatrix& sub, const ModePattern& input,
                                         const std::vector<double>& detunings_ghz, double r);

// Detection-time discretization for the forward sampler. 10 ps bins are at
// most half the finest analysis window (20 ps). Times are bin centers.
struct SampleGrid {
  double t_start_ps = -160.0;
  double bin_ps = 10.0;
  int n_bins = 56;

  double center(int b) const { return t_start_ps + (b + 0.5) * bin_ps; }
  void validate() const;
};

// Per-source spectra: one Lorentzian emitter behind every input mode, all
// sharing a linewidth, individually detuned.
struct SpectralSources {
  std::vector<double> detuning_ghz;
  double linewidth_ghz = 3.8;

  void validate() const;
};

// Everything the forward sampler needs apart from the hypothesis: circuit,
// which input patterns fire (with optional generation weights, default
// uniform), source spectra and the detection grid.
struct SamplerSetup {
  Interferometer circuit;
  std::vector<ModePattern> input_patterns;
  std::vector<double> input_weights;
  SpectralSources sources;
  SampleGrid grid;

  void validate() const;
};

// Exhaustively enumerated outcome distribution of one model: every
// collision-free output pattern x time-bin combination, jitter-smeared and
// normalized. Desk scale only (N <= 3 photons, M <= 8 modes).
//
// Likelihoods are conditional on the input pattern (scattershot heralds
// identify the pair that fired, so the input is data, not inference).
class SampleDistribution {
 public:
  SampleDistribution(SamplerSetup setup, const ModelSpec& model,
                     const std::vector<JitterModel>& jitter);

  const SamplerSetup& setup() const { return setup_; }
  const std::vector<ModePattern>& output_patterns() const { return outputs_; }

  // ln P(output pattern, arrival bins | input pattern). Times are snapped to
  // the nearest bin center; times off the grid or an input pattern not in
  // the setup are errors.
  double log_probability(const Sample& s) const;

  // Post-selected probability that a detected event came from this input.
  double input_probability(int input_idx) const;

  // P(output pattern | input), integrated over arrival times.
  Eigen::VectorXd pattern_distribution(int input_idx) const;
  // Two-photon only: P(output pattern | input, |t1 - t2| <= window/2).
  Eigen::VectorXd windowed_pattern_distribution(int input_idx, double window_ps) const;
  // Fraction of the input's mass whose arrival spread fits the window.
  double window_retention(int input_idx, double window_ps) const;

  // Inverse-CDF sampling; identical seeds give identical sample lists.
  std::vector<Sample> draw(int n, std::uint64_t seed) const;

 private:
  int input_index(const ModePattern& input) const;

  SamplerSetup setup_;
  std::vector<ModePattern> outputs_;
  std::vector<int> strides_;        // bin multi-index strides, length N
  std::vector<double> input_mass_;  // per input, physical post-selection mass
  std::vector<double> input_prob_;  // per input, normalized with weights
  // mass_[i] is the flat physical tensor over (output pattern, b_1..b_N);
  // cdf_[i] its prefix sums, kept separately so point likelihoods do not
  // lose precision to cumulative differencing.
  std::vector<std::vector<double>> mass_;
  std::vector<std::vector<double>> cdf_;
};

// Convenience wrapper: build the distribution and draw n samples.
std::vector<Sample> draw_samples(const ModelSpec& model, const SamplerSetup& setup,
                                 const std::vector<JitterModel>& jitter, int n,
                                 std::uint64_t seed);

// CSV serialization: one sample per line, "i1,i2;o1,o2;t1,t2" (modes
// comma-joined inside each field). '#' lines are comments.
void write_samples_csv(std::ostream& out, const std::vector<Sample>& samples);
std::vector<Sample> parse_samples_csv(std::istream& in);

// Bayes trace as "n,posterior" lines, n starting at 1.
void write_bayes_csv(std::ostream& out, const BayesTrace& trace);

}  // namespace trisim

#endif
