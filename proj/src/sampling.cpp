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

#include "trisim/sampling.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <istream>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "trisim/permanent.hpp"

namespace trisim {

namespace {

constexpr double kAlignedTolGhz = 1e-6;
// Caps one sample's log-likelihood swing so a zero probability under a single
// model saturates the odds instead of poisoning later updates with inf - inf.
constexpr double kLogOddsCap = 746.0;

// Permanents of the time-dressed submatrix for n <= 3, entries row-major.
// Small enough that the expanded forms beat the general kernel.
std::complex<double> small_permanent(const std::complex<double>* a, int n) {
  switch (n) {
    case 1:
      return a[0];
    case 2:
      return a[0] * a[3] + a[1] * a[2];
    case 3:
      return a[0] * (a[4] * a[8] + a[5] * a[7]) + a[1] * (a[3] * a[8] + a[5] * a[6]) +
             a[2] * (a[3] * a[7] + a[4] * a[6]);
    default:
      throw std::invalid_argument("small_permanent: n must be 1..3");
  }
}

double small_permanent_abs2(const std::complex<double>* a, int n) {
  std::array<std::complex<double>, 9> sq;
  for (int k = 0; k < n * n; ++k) sq[k] = std::norm(a[k]);
  return small_permanent(sq.data(), n).real();
}

double model_density(const std::complex<double>* lam, int n, const ModelSpec& model) {
  if (model.kind == ModelKind::kAdversarial) return small_permanent_abs2(lam, n);
  const double interfering = std::norm(small_permanent(lam, n));
  if (model.r == 1.0) return interfering;
  return model.r * interfering + (1.0 - model.r) * small_permanent_abs2(lam, n);
}

std::vector<ModePattern> collision_free_patterns(int dim, int n) {
  std::vector<ModePattern> out;
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    out.emplace_back(idx);
    int k = n - 1;
    while (k >= 0 && idx[k] == dim - n + k) --k;
    if (k < 0) break;
    ++idx[k];
    for (int j = k + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

// Unit-norm discrete amplitude of a source: decaying Lorentzian emission
// rotated to its detuning, evaluated at bin centers. Bin width is folded in
// so the squared magnitudes are per-bin detection probabilities.
Eigen::VectorXcd source_amplitude(const SampleGrid& grid, double linewidth_ghz,
                                  double detuning_ghz) {
  const double decay = 2.0 * std::numbers::pi * linewidth_ghz * 1e-3;  // 1/ps
  const double omega = 2.0 * std::numbers::pi * detuning_ghz * 1e-3;   // rad/ps
  Eigen::VectorXcd z = Eigen::VectorXcd::Zero(grid.n_bins);
  for (int b = 0; b < grid.n_bins; ++b) {
    const double t = grid.center(b);
    if (t < 0.0) continue;
    z[b] = std::exp(std::complex<double>(-0.5 * decay * t, -omega * t));
  }
  const double norm = z.norm();
  if (norm <= 0.0) throw std::invalid_argument("sample grid misses the emission window");
  return z / norm;
}

std::vector<double> gaussian_kernel(double fwhm_ps, double bin_ps) {
  const double sigma = fwhm_ps / (2.0 * std::sqrt(2.0 * std::log(2.0)));
  const int half = static_cast<int>(std::ceil(4.0 * sigma / bin_ps));
  std::vector<double> k(2 * half + 1);
  double sum = 0.0;
  for (int j = -half; j <= half; ++j) {
    const double x = j * bin_ps;
    k[j + half] = std::exp(-x * x / (2.0 * sigma * sigma));
    sum += k[j + half];
  }
  for (double& v : k) v /= sum;
  return k;
}

// In-place convolution along one axis of the flat tensor. Mass pushed past
// the grid edge is lost (the event leaves the detection gate).
void smear_axis(std::vector<double>& tensor, int n_bins, int stride,
                const std::vector<double>& kernel) {
  const int half = static_cast<int>(kernel.size()) / 2;
  const int size = static_cast<int>(tensor.size());
  const int line_span = n_bins * stride;
  std::vector<double> line(n_bins);
  for (int start = 0; start < size; start += line_span) {
    for (int lo = 0; lo < stride; ++lo) {
      const int base = start + lo;
      for (int b = 0; b < n_bins; ++b) line[b] = tensor[base + b * stride];
      for (int b = 0; b < n_bins; ++b) {
        double acc = 0.0;
        const int jmin = std::max(-half, b - (n_bins - 1));
        const int jmax = std::min(half, b);
        for (int j = jmin; j <= jmax; ++j) acc += kernel[j + half] * line[b - j];
        tensor[base + b * stride] = acc;
      }
    }
  }
}

double uniform01(std::mt19937_64& rng) {
  // 53-bit mantissa draw; bit-identical across platforms, unlike
  // std::uniform_real_distribution.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<int> parse_mode_field(const std::string& field, int lineno) {
  std::vector<int> modes;
  std::stringstream ss(field);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      size_t used = 0;
      modes.push_back(std::stoi(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw std::runtime_error("samples csv line " + std::to_string(lineno) +
                               ": bad mode field '" + tok + "'");
    }
  }
  if (modes.empty())
    throw std::runtime_error("samples csv line " + std::to_string(lineno) + ": empty pattern");
  return modes;
}

}  // namespace

void Sample::validate() const {
  if (input_pattern.size() == 0 || input_pattern.size() != output_pattern.size() ||
      static_cast<size_t>(input_pattern.size()) != arrival_times_ps.size()) {
    throw std::invalid_argument("sample patterns and arrival times must have equal size");
  }
  for (double t : arrival_times_ps)
    if (!std::isfinite(t)) throw std::invalid_argument("sample arrival time must be finite");
}

void ModelSpec::validate() const {
  if (!(r >= 0.0 && r <= 1.0))
    throw std::invalid_argument("interference weight r must lie in [0, 1]");
}

double BayesTrace::posterior() const {
  if (log_odds >= kLogOddsCap) return 1.0;
  if (log_odds <= -kLogOddsCap) return 0.0;
  return 1.0 / (1.0 + std::exp(-log_odds));
}

BayesTrace bayes_update(BayesTrace trace, double p_test, double p_adv) {
  if (!(p_test >= 0.0) || !(p_adv >= 0.0) || !std::isfinite(p_test) || !std::isfinite(p_adv))
    throw std::invalid_argument("likelihoods must be finite and non-negative");
  if (p_test == 0.0 && p_adv == 0.0)
    throw std::invalid_argument("sample impossible under both models");
  const double delta = std::clamp(std::log(p_test) - std::log(p_adv), -kLogOddsCap, kLogOddsCap);
  trace.log_odds = std::clamp(trace.log_odds + delta, -kLogOddsCap, kLogOddsCap);
  trace.posteriors.push_back(trace.posterior());
  return trace;
}

double test_probability(const CMatrix& sub, double r) {
  if (!(r >= 0.0 && r <= 1.0))
    throw std::invalid_argument("interference weight r must lie in [0, 1]");
  return r * std::norm(permanent(sub)) + (1.0 - r) * permanent_abs_squared(sub);
}

double test_probability_time_resolved(const CMatrix& lambda, double r) {
  return test_probability(lambda, r);
}

double adversarial_probability(const CMatrix& lambda) { return permanent_abs_squared(lambda); }

bool pattern_spectrally_aligned(const ModePattern& input,
                                const std::vector<double>& detunings_ghz) {
  if (input.size() == 0) throw std::invalid_argument("empty input pattern");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int m : input.modes) {
    if (m < 0 || static_cast<size_t>(m) >= detunings_ghz.size())
      throw std::invalid_argument("unknown source id " + std::to_string(m));
    lo = std::min(lo, detunings_ghz[m]);
    hi = std::max(hi, detunings_ghz[m]);
  }
  return hi - lo <= kAlignedTolGhz;
}

double scattershot_adversary_probability(const CMatrix& sub, const ModePattern& input,
                                         const std::vector<double>& detunings_ghz, double r) {
  if (pattern_spectrally_aligned(input, detunings_ghz)) return test_probability(sub, r);
  return permanent_abs_squared(sub);
}

void SampleGrid::validate() const {
  if (!(bin_ps > 0.0) || n_bins < 1)
    throw std::invalid_argument("sample grid needs positive bin width and at least one bin");
  if (!std::isfinite(t_start_ps)) throw std::invalid_argument("sample grid start must be finite");
}

void SpectralSources::validate() const {
  if (!(linewidth_ghz > 0.0)) throw std::invalid_argument("source linewidth must be positive");
  for (double d : detuning_ghz)
    if (!std::isfinite(d)) throw std::invalid_argument("source detuning must be finite");
}

void SamplerSetup::validate() const {
  grid.validate();
  sources.validate();
  const int dim = circuit.dim();
  if (dim < 1 || dim > 8) throw std::invalid_argument("sampler supports 1..8 circuit modes");
  if (input_patterns.empty()) throw std::invalid_argument("at least one input pattern required");
  const int n = input_patterns.front().size();
  if (n < 1 || n > 3) throw std::invalid_argument("sampler supports 1..3 photons");
  for (const auto& p : input_patterns) {
    p.validate(dim);
    if (p.size() != n)
      throw std::invalid_argument("all input patterns must have the same photon number");
    for (int m : p.modes)
      if (static_cast<size_t>(m) >= sources.detuning_ghz.size())
        throw std::invalid_argument("unknown source id " + std::to_string(m));
  }
  if (!input_weights.empty()) {
    if (input_weights.size() != input_patterns.size())
      throw std::invalid_argument("input weights must match input patterns");
    double sum = 0.0;
    for (double w : input_weights) {
      if (!(w >= 0.0)) throw std::invalid_argument("input weights must be non-negative");
      sum += w;
    }
    if (!(sum > 0.0)) throw std::invalid_argument("input weights must not all vanish");
  }
}

SampleDistribution::SampleDistribution(SamplerSetup setup, const ModelSpec& model,
                                       const std::vector<JitterModel>& jitter)
    : setup_(std::move(setup)) {
  setup_.validate();
  model.validate();
  const int dim = setup_.circuit.dim();
  const int n = setup_.input_patterns.front().size();
  const int bins = setup_.grid.n_bins;
  outputs_ = collision_free_patterns(dim, n);

  strides_.assign(n, 1);
  for (int a = n - 2; a >= 0; --a) strides_[a] = strides_[a + 1] * bins;
  const int cells = strides_[0] * bins;

  // One discrete amplitude per circuit mode; photons inherit the amplitude
  // of the source they enter through.
  std::vector<Eigen::VectorXcd> amp(dim);
  for (int m = 0; m < dim; ++m) {
    if (static_cast<size_t>(m) < setup_.sources.detuning_ghz.size())
      amp[m] = source_amplitude(setup_.grid, setup_.sources.linewidth_ghz,
                                setup_.sources.detuning_ghz[m]);
  }

  std::vector<std::vector<double>> kernels(dim);
  if (!jitter.empty()) {
    for (int m = 0; m < dim; ++m) {
      const JitterModel& jm = jitter.size() == 1 ? jitter[0] : jitter.at(m);
      const double fwhm = std::sqrt(jm.channel_fwhm_sq());
      if (fwhm > 0.0) kernels[m] = gaussian_kernel(fwhm, setup_.grid.bin_ps);
    }
  }

  const int n_inputs = static_cast<int>(setup_.input_patterns.size());
  mass_.assign(n_inputs, {});
  cdf_.assign(n_inputs, {});
  input_mass_.assign(n_inputs, 0.0);

  std::array<std::complex<double>, 9> lam;
  std::vector<int> b(n);
  for (int i = 0; i < n_inputs; ++i) {
    const ModePattern& input = setup_.input_patterns[i];
    std::vector<double>& tensor = mass_[i];
    tensor.assign(outputs_.size() * static_cast<size_t>(cells), 0.0);
    for (size_t q = 0; q < outputs_.size(); ++q) {
      const CMatrix sub = submatrix(setup_.circuit, input, outputs_[q]);
      double* cell = tensor.data() + q * cells;
      std::fill(b.begin(), b.end(), 0);
      for (int flat = 0; flat < cells; ++flat) {
        for (int row = 0; row < n; ++row)
          for (int col = 0; col < n; ++col)
            lam[row * n + col] = sub(row, col) * amp[input.modes[col]][b[row]];
        cell[flat] = model_density(lam.data(), n, model);
        for (int a = n - 1; a >= 0; --a) {
          if (++b[a] < bins) break;
          b[a] = 0;
        }
      }
      // Detection-time smearing, one pass per photon axis with the kernel of
      // the channel that detects it.
      for (int a = 0; a < n; ++a) {
        const std::vector<double>& k = kernels[outputs_[q].modes[a]];
        if (!k.empty()) {
          std::vector<double> view(cell, cell + cells);
          smear_axis(view, bins, strides_[a], k);
          std::copy(view.begin(), view.end(), cell);
        }
      }
    }
    input_mass_[i] = std::accumulate(tensor.begin(), tensor.end(), 0.0);
    cdf_[i].resize(tensor.size());
    std::partial_sum(tensor.begin(), tensor.end(), cdf_[i].begin());
  }

  double total = 0.0;
  for (int i = 0; i < n_inputs; ++i) {
    const double w =
        setup_.input_weights.empty() ? 1.0 : setup_.input_weights[i];
    input_prob_.push_back(w * input_mass_[i]);
    total += input_prob_.back();
  }
  if (!(total > 0.0)) throw std::invalid_argument("model distribution has zero total mass");
  for (double& p : input_prob_) p /= total;
}

int SampleDistribution::input_index(const ModePattern& input) const {
  for (size_t i = 0; i < setup_.input_patterns.size(); ++i)
    if (setup_.input_patterns[i].modes == input.modes) return static_cast<int>(i);
  throw std::invalid_argument("sample input pattern is not part of the sampler setup");
}

double SampleDistribution::input_probability(int input_idx) const {
  return input_prob_.at(input_idx);
}

double SampleDistribution::log_probability(const Sample& s) const {
  s.validate();
  const int i = input_index(s.input_pattern);
  const int n = s.size();
  if (n != setup_.input_patterns.front().size())
    throw std::invalid_argument("sample photon number does not match the setup");

  // Locate the output pattern among the sorted enumeration, carrying the
  // arrival times along with their modes.
  std::vector<std::pair<int, double>> det(n);
  for (int a = 0; a < n; ++a) det[a] = {s.output_pattern.modes[a], s.arrival_times_ps[a]};
  std::sort(det.begin(), det.end());
  int q = -1;
  for (size_t c = 0; c < outputs_.size(); ++c) {
    bool match = true;
    for (int a = 0; a < n; ++a) match &= outputs_[c].modes[a] == det[a].first;
    if (match) {
      q = static_cast<int>(c);
      break;
    }
  }
  if (q < 0) throw std::invalid_argument("sample output pattern is not collision-free in range");

  const int bins = setup_.grid.n_bins;
  int flat = 0;
  for (int a = 0; a < n; ++a) {
    const double pos = (det[a].second - setup_.grid.t_start_ps) / setup_.grid.bin_ps - 0.5;
    const int b = static_cast<int>(std::lround(pos));
    if (b < 0 || b >= bins)
      throw std::invalid_argument("sample arrival time falls outside the detection grid");
    flat += b * strides_[a];
  }
  const int cells = strides_[0] * bins;
  const double m = mass_[i][q * static_cast<size_t>(cells) + flat];
  if (m <= 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(m / input_mass_[i]);
}

Eigen::VectorXd SampleDistribution::pattern_distribution(int input_idx) const {
  const std::vector<double>& tensor = mass_.at(input_idx);
  const int cells = strides_[0] * setup_.grid.n_bins;
  Eigen::VectorXd p = Eigen::VectorXd::Zero(static_cast<int>(outputs_.size()));
  for (size_t q = 0; q < outputs_.size(); ++q)
    p[static_cast<int>(q)] = std::accumulate(tensor.begin() + q * cells,
                                             tensor.begin() + (q + 1) * cells, 0.0);
  return p / input_mass_.at(input_idx);
}

Eigen::VectorXd SampleDistribution::windowed_pattern_distribution(int input_idx,
                                                                  double window_ps) const {
  if (setup_.input_patterns.front().size() != 2)
    throw std::invalid_argument("windowed pattern distribution is defined for photon pairs");
  if (!(window_ps > 0.0)) throw std::invalid_argument("window must be positive");
  const std::vector<double>& tensor = mass_.at(input_idx);
  const int bins = setup_.grid.n_bins;
  const int cells = bins * bins;
  const double half = 0.5 * window_ps + 1e-9;
  Eigen::VectorXd p = Eigen::VectorXd::Zero(static_cast<int>(outputs_.size()));
  for (size_t q = 0; q < outputs_.size(); ++q) {
    double acc = 0.0;
    const double* cell = tensor.data() + q * cells;
    for (int b1 = 0; b1 < bins; ++b1)
      for (int b2 = 0; b2 < bins; ++b2)
        if (std::abs(b1 - b2) * setup_.grid.bin_ps <= half) acc += cell[b1 * bins + b2];
    p[static_cast<int>(q)] = acc;
  }
  const double total = p.sum();
  if (!(total > 0.0)) throw std::invalid_argument("no mass inside the window");
  return p / total;
}

double SampleDistribution::window_retention(int input_idx, double window_ps) const {
  if (setup_.input_patterns.front().size() != 2)
    throw std::invalid_argument("window retention is defined for photon pairs");
  if (!(window_ps > 0.0)) throw std::invalid_argument("window must be positive");
  const std::vector<double>& tensor = mass_.at(input_idx);
  const int bins = setup_.grid.n_bins;
  const int cells = bins * bins;
  const double half = 0.5 * window_ps + 1e-9;
  double kept = 0.0;
  for (size_t q = 0; q < outputs_.size(); ++q) {
    const double* cell = tensor.data() + q * cells;
    for (int b1 = 0; b1 < bins; ++b1)
      for (int b2 = 0; b2 < bins; ++b2)
        if (std::abs(b1 - b2) * setup_.grid.bin_ps <= half) kept += cell[b1 * bins + b2];
  }
  return kept / input_mass_.at(input_idx);
}

std::vector<Sample> SampleDistribution::draw(int n, std::uint64_t seed) const {
  if (n < 0) throw std::invalid_argument("sample count must be non-negative");
  std::vector<Sample> out;
  out.reserve(n);
  std::mt19937_64 rng(seed);
  const int n_ph = setup_.input_patterns.front().size();
  const int bins = setup_.grid.n_bins;
  const int cells = strides_[0] * bins;
  for (int k = 0; k < n; ++k) {
    double u = uniform01(rng);
    size_t i = 0;
    double acc = 0.0;
    for (; i + 1 < input_prob_.size(); ++i) {
      acc += input_prob_[i];
      if (u < acc) break;
    }
    const std::vector<double>& cdf = cdf_[i];
    const double target = uniform01(rng) * cdf.back();
    size_t flat = std::upper_bound(cdf.begin(), cdf.end(), target) - cdf.begin();
    if (flat >= cdf.size()) flat = cdf.size() - 1;
    const size_t q = flat / cells;
    int rem = static_cast<int>(flat % cells);
    Sample s;
    s.input_pattern = setup_.input_patterns[i];
    s.output_pattern = outputs_[q];
    s.arrival_times_ps.resize(n_ph);
    for (int a = 0; a < n_ph; ++a) {
      const int b = rem / strides_[a];
      rem %= strides_[a];
      s.arrival_times_ps[a] = setup_.grid.center(b);
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Sample> draw_samples(const ModelSpec& model, const SamplerSetup& setup,
                                 const std::vector<JitterModel>& jitter, int n,
                                 std::uint64_t seed) {
  if (n < 0) throw std::invalid_argument("sample count must be non-negative");
  if (n == 0) return {};
  return SampleDistribution(setup, model, jitter).draw(n, seed);
}

void write_samples_csv(std::ostream& out, const std::vector<Sample>& samples) {
  out << "# input_pattern;output_pattern;t1_ps,t2_ps,...\n";
  char buf[64];
  for (const Sample& s : samples) {
    s.validate();
    for (int a = 0; a < s.input_pattern.size(); ++a)
      out << (a ? "," : "") << s.input_pattern.modes[a];
    out << ';';
    for (int a = 0; a < s.output_pattern.size(); ++a)
      out << (a ? "," : "") << s.output_pattern.modes[a];
    out << ';';
    for (size_t a = 0; a < s.arrival_times_ps.size(); ++a) {
      std::snprintf(buf, sizeof buf, "%.10g", s.arrival_times_ps[a]);
      out << (a ? "," : "") << buf;
    }
    out << '\n';
  }
}

std::vector<Sample> parse_samples_csv(std::istream& in) {
  std::vector<Sample> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string fin, fout, ft;
    if (!std::getline(ss, fin, ';') || !std::getline(ss, fout, ';') || !std::getline(ss, ft))
      throw std::runtime_error("samples csv line " + std::to_string(lineno) +
                               ": expected three ';'-separated fields");
    Sample s;
    s.input_pattern = ModePattern(parse_mode_field(fin, lineno));
    s.output_pattern = ModePattern(parse_mode_field(fout, lineno));
    std::stringstream ts(ft);
    std::string tok;
    while (std::getline(ts, tok, ',')) {
      try {
        size_t used = 0;
        s.arrival_times_ps.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw std::runtime_error("samples csv line " + std::to_string(lineno) +
                                 ": bad arrival time '" + tok + "'");
      }
    }
    try {
      s.validate();
    } catch (const std::exception& e) {
      throw std::runtime_error("samples csv line " + std::to_string(lineno) + ": " + e.what());
    }
    out.push_back(std::move(s));
  }
  return out;
}

void write_bayes_csv(std::ostream& out, const BayesTrace& trace) {
  out << "n,posterior\n";
  char buf[64];
  for (size_t k = 0; k < trace.posteriors.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.10g", trace.posteriors[k]);
    out << (k + 1) << ',' << buf << '\n';
  }
}

}  // namespace trisim
