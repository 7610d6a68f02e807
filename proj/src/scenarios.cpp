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

#include "trisim/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "trisim/joint_amplitude.hpp"
#include "trisim/units.hpp"

namespace trisim {

namespace {

std::ofstream open_artifact(const ScenarioConfig& c, const std::string& name) {
  namespace fs = std::filesystem;
  if (!c.out_dir.empty()) fs::create_directories(c.out_dir);
  const fs::path p = fs::path(c.out_dir) / name;
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write artifact: " + p.string());
  out << provenance_header(c);
  return out;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

TimeGrid detection_grid() {
  TimeGrid g;
  g.t_start = -256.0;
  g.dt = 0.125;
  g.n = 16384;
  return g;
}

// Two pure Lorentzian wavepackets at the configured carriers, recentred so
// the mean detuning sits on the grid carrier (only the difference matters).
std::pair<TemporalProfile, TemporalProfile> pair_profiles(const ScenarioConfig& c,
                                                          const TimeGrid& grid) {
  if (c.sources.size() != 2)
    throw std::invalid_argument(c.scenario + " scenario needs exactly 2 sources");
  const double mid = 0.5 * (c.sources[0].detuning_ghz + c.sources[1].detuning_ghz);
  TemporalProfile za =
      lorentzian_temporal(ghz_to_rad_ps(c.sources[0].detuning_ghz - mid),
                          ghz_to_rad_ps(c.sources[0].linewidth_ghz), grid);
  TemporalProfile zb =
      lorentzian_temporal(ghz_to_rad_ps(c.sources[1].detuning_ghz - mid),
                          ghz_to_rad_ps(c.sources[1].linewidth_ghz), grid);
  return {std::move(za), std::move(zb)};
}

struct SweepScans {
  std::vector<double> circuit_phases;  // the swept circuit parameter
  FringeScan interference;             // phases_rad holds the fit variable
  FringeScan delayed;
};

// Phase sweep of the jittered pair through the preset circuit. For the MZI
// the coincidence fringe has period pi in theta, so the fit runs in 2*theta.
SweepScans sweep_pair(const ScenarioConfig& c) {
  const TimeGrid grid = detection_grid();
  auto [za, zb] = pair_profiles(c, grid);
  PairCorrelator corr(PhotonEnsemble::pure(std::move(za)), PhotonEnsemble::pure(std::move(zb)));
  const double fwhm = combined_jitter_fwhm({c.jitter, c.jitter});
  if (fwhm > 0.0) corr = corr.jittered(fwhm);

  const bool is_mzi = c.circuit == "mzi";
  SweepScans s;
  for (int k = 0; k < c.phase_steps; ++k) {
    const double phase = kTwoPi * k / c.phase_steps;
    const Interferometer t = is_mzi ? mzi(phase) : f4(phase);
    const auto [alpha, beta] = pair_amplitudes(t, 0, 1, 0, 1);
    s.circuit_phases.push_back(phase);
    s.interference.phases_rad.push_back(is_mzi ? 2.0 * phase : phase);
    s.delayed.phases_rad.push_back(is_mzi ? 2.0 * phase : phase);
    s.interference.histograms.push_back(corr.fringe(alpha, beta));
    s.delayed.histograms.push_back(corr.distinguishable_fringe(alpha, beta));
  }
  return s;
}

void write_fringe_csv(std::ofstream& out, const std::string& xname,
                      const std::vector<double>& xs, const FringeScan& scan,
                      const std::vector<double>& windows) {
  out << xname;
  for (double w : windows) out << ",counts_w" << num(w);
  out << "\n";
  for (size_t i = 0; i < xs.size(); ++i) {
    out << num(xs[i]);
    for (double w : windows) out << ',' << num(scan.histograms[i].windowed_counts(w));
    out << "\n";
  }
}

// Density rebinned for plotting; each row averages value_at over the bin.
void write_density_csv(std::ofstream& out, const CoincidenceHistogram& h, double bin_ps,
                       double span_ps) {
  out << "tau_ps,density\n";
  const int half = static_cast<int>(span_ps / bin_ps);
  for (int b = -half; b <= half; ++b) {
    const double t0 = b * bin_ps;
    double acc = 0.0;
    const int sub = 8;
    for (int j = 0; j < sub; ++j) acc += h.value_at(t0 + (j + 0.5) * bin_ps / sub - bin_ps / 2);
    out << num(t0) << ',' << num(acc / sub) << "\n";
  }
}

std::vector<ModePattern> mode_pairs(int m) {
  std::vector<ModePattern> out;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) out.push_back(ModePattern{i, j});
  return out;
}

double posterior_of(double log_odds) {
  if (log_odds > 0.0) return 1.0 / (1.0 + std::exp(-log_odds));
  const double e = std::exp(log_odds);
  return e / (1.0 + e);
}

}  // namespace

HomReport run_hom(const ScenarioConfig& c) {
  c.validate();
  if (c.circuit != "mzi") throw std::invalid_argument("hom scenario runs on the mzi preset");
  const SweepScans s = sweep_pair(c);

  HomReport rep;
  for (double w : c.windows_ps)
    rep.windows.push_back({w, fringe_visibility(s.interference, w), fringe_visibility(s.delayed, w)});

  {
    const double lw = c.sources[0].linewidth_ghz;
    const SchmidtDecomposition d =
        schmidt_decompose(build_jsa(c.pump, lw, 0.0, default_jsa_grid()));
    rep.purity = purity(d);
  }

  // fringe extrema at the narrowest window carry the example tau histograms
  const double wn = c.windows_ps.back();
  size_t imin = 0, imax = 0;
  for (size_t i = 1; i < s.interference.histograms.size(); ++i) {
    const double v = s.interference.histograms[i].windowed_counts(wn);
    if (v < s.interference.histograms[imin].windowed_counts(wn)) imin = i;
    if (v > s.interference.histograms[imax].windowed_counts(wn)) imax = i;
  }
  rep.extremum_low_rad = s.circuit_phases[imin];
  rep.extremum_high_rad = s.circuit_phases[imax];

  {
    auto out = open_artifact(c, "hom_fringe.csv");
    write_fringe_csv(out, "theta_rad", s.circuit_phases, s.interference, c.windows_ps);
  }
  {
    auto out = open_artifact(c, "hom_delayed_fringe.csv");
    write_fringe_csv(out, "theta_rad", s.circuit_phases, s.delayed, c.windows_ps);
  }
  {
    auto out = open_artifact(c, "hom_visibilities.csv");
    out << "window_ps,visibility,visibility_err,delayed_visibility,delayed_visibility_err\n";
    for (const WindowFit& w : rep.windows)
      out << num(w.window_ps) << ',' << num(w.interference.visibility()) << ','
          << num(w.interference.visibility_err()) << ',' << num(w.delayed.visibility()) << ','
          << num(w.delayed.visibility_err()) << "\n";
  }
  {
    auto out = open_artifact(c, "hom_tau_dip.csv");
    write_density_csv(out, s.interference.histograms[imin], 2.0, 400.0);
  }
  {
    auto out = open_artifact(c, "hom_tau_peak.csv");
    write_density_csv(out, s.interference.histograms[imax], 2.0, 400.0);
  }
  return rep;
}

FusionReport run_fusion(const ScenarioConfig& c) {
  c.validate();
  if (c.circuit != "f4") throw std::invalid_argument("fusion scenario runs on the f4 preset");
  const SweepScans s = sweep_pair(c);

  FusionReport rep;
  for (double w : c.windows_ps) {
    FusionWindow fw;
    fw.window_ps = w;
    fw.fit = fringe_visibility(s.interference, w);
    const double v = std::clamp(fw.fit.visibility(), 0.0, 1.0);
    fw.fidelity = fusion_fidelity(v);
    fw.fidelity_err = fw.fit.visibility_err() / ((1.0 + v) * (1.0 + v));
    rep.windows.push_back(fw);
  }

  {
    auto out = open_artifact(c, "fusion_fringe.csv");
    write_fringe_csv(out, "phi_rad", s.circuit_phases, s.interference, c.windows_ps);
  }
  {
    auto out = open_artifact(c, "fusion_delayed_fringe.csv");
    write_fringe_csv(out, "phi_rad", s.circuit_phases, s.delayed, c.windows_ps);
  }
  {
    auto out = open_artifact(c, "fusion_visibilities.csv");
    out << "window_ps,visibility,visibility_err,fidelity,fidelity_err\n";
    for (const FusionWindow& fw : rep.windows)
      out << num(fw.window_ps) << ',' << num(fw.fit.visibility()) << ','
          << num(fw.fit.visibility_err()) << ',' << num(fw.fidelity) << ','
          << num(fw.fidelity_err) << "\n";
  }
  {
    auto out = open_artifact(c, "fusion_bell.csv");
    out << "phi_rad,re_phi_minus,im_phi_minus,re_psi_minus,im_psi_minus,p_phi_minus,p_psi_minus\n";
    for (double phi : s.circuit_phases) {
      const auto [cp, cm] = bell_state_coefficients(phi);
      out << num(phi) << ',' << num(cp.real()) << ',' << num(cp.imag()) << ',' << num(cm.real())
          << ',' << num(cm.imag()) << ',' << num(std::norm(cp)) << ',' << num(std::norm(cm))
          << "\n";
    }
  }
  return rep;
}

ScattershotReport run_scattershot(const ScenarioConfig& c) {
  c.validate();
  if (c.circuit != "f4")
    throw std::invalid_argument("scattershot scenario runs on the f4 preset");
  if (c.sources.size() != 4) throw std::invalid_argument("scattershot needs 4 sources");

  std::vector<double> detunings;
  const double lw = c.sources[0].linewidth_ghz;
  for (const SourceSpec& s : c.sources) {
    if (s.linewidth_ghz != lw)
      throw std::invalid_argument("the sampler assumes one common ring linewidth");
    detunings.push_back(s.detuning_ghz);
  }

  SamplerSetup setup;
  setup.circuit = f4(c.phase_rad);
  setup.input_patterns = mode_pairs(4);
  setup.sources = {detunings, lw};

  const ModelSpec data_spec{
      c.data_model == "test" ? ModelKind::kTest : ModelKind::kAdversarial, c.data_r};
  const SampleDistribution data_dist(setup, data_spec, {c.jitter});
  const std::vector<Sample> samples = data_dist.draw(c.n_samples, c.seed);

  // Pattern-level (time-integrated) log likelihoods per input for the window
  // sweep: the models see only which modes fired, the data decides which
  // samples survive the window.
  const std::vector<ModePattern>& outs = data_dist.output_patterns();
  const int ni = static_cast<int>(setup.input_patterns.size());
  const int nq = static_cast<int>(outs.size());
  std::vector<std::vector<double>> dlog(ni, std::vector<double>(nq, 0.0));
  for (int i = 0; i < ni; ++i) {
    std::vector<double> mt(nq), ma(nq);
    double st = 0.0, sa = 0.0;
    for (int q = 0; q < nq; ++q) {
      const CMatrix sub = submatrix(setup.circuit, setup.input_patterns[i], outs[q]);
      mt[q] = test_probability(sub, c.model_r);
      ma[q] = scattershot_adversary_probability(sub, setup.input_patterns[i], detunings,
                                                c.model_r);
      st += mt[q];
      sa += ma[q];
    }
    for (int q = 0; q < nq; ++q) dlog[i][q] = std::log(mt[q] / st) - std::log(ma[q] / sa);
  }

  std::map<std::pair<int, int>, int> input_index, output_index;
  for (int i = 0; i < ni; ++i)
    input_index[{setup.input_patterns[i].modes[0], setup.input_patterns[i].modes[1]}] = i;
  for (int q = 0; q < nq; ++q) output_index[{outs[q].modes[0], outs[q].modes[1]}] = q;

  struct Tagged {
    int input, output;
    double spread;
  };
  std::vector<Tagged> tagged;
  tagged.reserve(samples.size());
  for (const Sample& s : samples)
    tagged.push_back({input_index.at({s.input_pattern.modes[0], s.input_pattern.modes[1]}),
                      output_index.at({s.output_pattern.modes[0], s.output_pattern.modes[1]}),
                      std::abs(s.arrival_times_ps[0] - s.arrival_times_ps[1])});

  const auto expected_log_odds = [&](double w) {
    double e = 0.0;
    for (int i = 0; i < ni; ++i) {
      const double keep = data_dist.input_probability(i) * data_dist.window_retention(i, w);
      if (keep <= 0.0) continue;
      const Eigen::VectorXd wd = data_dist.windowed_pattern_distribution(i, w);
      for (int q = 0; q < nq; ++q) e += keep * wd[q] * dlog[i][q];
    }
    return e * c.n_samples;
  };

  ScattershotReport rep;
  for (double w : c.windows_ps) {
    WindowPosterior wp;
    wp.window_ps = w;
    for (const Tagged& t : tagged) {
      if (t.spread <= 0.5 * w) {
        ++wp.kept;
        wp.sampled_log_odds += dlog[t.input][t.output];
      }
    }
    wp.sampled_posterior = posterior_of(wp.sampled_log_odds);
    wp.expected_log_odds = expected_log_odds(w);
    wp.expected_posterior = posterior_of(wp.expected_log_odds);
    rep.sweep.push_back(wp);
  }

  // dense expected sweep locates the decision boundary
  std::vector<std::pair<double, double>> dense;
  for (double w = 10.0; w <= 200.0 + 1e-9; w += 2.5) dense.push_back({w, expected_log_odds(w)});
  rep.crossing_ps = std::numeric_limits<double>::quiet_NaN();
  for (size_t i = 1; i < dense.size(); ++i) {
    const auto [w0, e0] = dense[i - 1];
    const auto [w1, e1] = dense[i];
    if (e0 > 0.0 && e1 <= 0.0) {
      rep.crossing_ps = w0 + (w1 - w0) * e0 / (e0 - e1);
      break;
    }
  }

  // time-resolved comparison uses the full arrival-time likelihoods
  const SampleDistribution dist_test(setup, {ModelKind::kTest, c.model_r}, {c.jitter});
  const SampleDistribution dist_adv(setup, {ModelKind::kAdversarial, c.model_r}, {c.jitter});
  for (const Sample& s : samples)
    rep.time_resolved = bayes_update(std::move(rep.time_resolved),
                                     std::exp(dist_test.log_probability(s)),
                                     std::exp(dist_adv.log_probability(s)));

  {
    auto out = open_artifact(c, "scattershot_samples.csv");
    write_samples_csv(out, samples);
  }
  {
    auto out = open_artifact(c, "scattershot_sweep.csv");
    out << "window_ps,kept,sampled_log_odds,sampled_posterior,expected_log_odds,"
           "expected_posterior\n";
    for (const WindowPosterior& wp : rep.sweep)
      out << num(wp.window_ps) << ',' << wp.kept << ',' << num(wp.sampled_log_odds) << ','
          << num(wp.sampled_posterior) << ',' << num(wp.expected_log_odds) << ','
          << num(wp.expected_posterior) << "\n";
  }
  {
    auto out = open_artifact(c, "scattershot_expected.csv");
    out << "window_ps,expected_log_odds,expected_posterior\n";
    for (const auto& [w, e] : dense)
      out << num(w) << ',' << num(e) << ',' << num(posterior_of(e)) << "\n";
  }
  {
    auto out = open_artifact(c, "scattershot_bayes.csv");
    write_bayes_csv(out, rep.time_resolved);
  }
  {
    std::vector<Outcome> outcomes;
    std::vector<double> probs;
    for (int i = 0; i < ni; ++i) {
      const Eigen::VectorXd pd = data_dist.pattern_distribution(i);
      for (int q = 0; q < nq; ++q) {
        outcomes.push_back({setup.input_patterns[i], outs[q]});
        probs.push_back(data_dist.input_probability(i) * pd[q]);
      }
    }
    auto out = open_artifact(c, "scattershot_dist.csv");
    write_distribution_csv(out, outcomes, probs);
  }
  for (double w : c.windows_ps) {
    std::vector<Outcome> outcomes;
    std::vector<double> probs;
    double total = 0.0;
    for (int i = 0; i < ni; ++i) {
      const double keep = data_dist.input_probability(i) * data_dist.window_retention(i, w);
      const Eigen::VectorXd wd = data_dist.windowed_pattern_distribution(i, w);
      for (int q = 0; q < nq; ++q) {
        outcomes.push_back({setup.input_patterns[i], outs[q]});
        probs.push_back(keep * wd[q]);
        total += keep * wd[q];
      }
    }
    if (total > 0.0)
      for (double& p : probs) p /= total;
    auto out = open_artifact(c, "scattershot_dist_w" + num(w) + ".csv");
    write_distribution_csv(out, outcomes, probs);
  }
  return rep;
}

ProjectionsReport run_projections(const ScenarioConfig& c) {
  c.validate();
  const double lw = c.sources[0].linewidth_ghz;

  ProjectionsReport rep;
  rep.jitters_ps = c.projection_jitters_ps;
  rep.detunings_ghz.push_back(0.0);
  const double lmin = std::log(c.detuning_min_ghz);
  const double lmax = std::log(c.detuning_max_ghz);
  for (int k = 0; k < c.n_detunings; ++k)
    rep.detunings_ghz.push_back(std::exp(lmin + (lmax - lmin) * k / (c.n_detunings - 1)));

  for (double total : rep.jitters_ps) {
    // split the relative-time FWHM evenly across the two channels
    const JitterModel per_channel{total / std::sqrt(2.0), 0.0};
    std::vector<double> vs;
    for (double d : rep.detunings_ghz) vs.push_back(projection_visibility(d, lw, per_channel));
    rep.visibility.push_back(std::move(vs));
  }

  auto out = open_artifact(c, "projections.csv");
  out << "detuning_ghz";
  for (double j : rep.jitters_ps) out << ",v_jitter_" << num(j) << "ps";
  out << "\n";
  for (size_t k = 0; k < rep.detunings_ghz.size(); ++k) {
    out << num(rep.detunings_ghz[k]);
    for (size_t r = 0; r < rep.visibility.size(); ++r) out << ',' << num(rep.visibility[r][k]);
    out << "\n";
  }
  return rep;
}

std::vector<TimeTagRecord> samples_to_timetags(const std::vector<Sample>& samples,
                                               long long rep_period_ps, int herald_base) {
  if (rep_period_ps <= 0) throw std::invalid_argument("repetition period must be positive");
  std::vector<TimeTagRecord> out;
  out.reserve(samples.size() * 4);
  for (size_t k = 0; k < samples.size(); ++k) {
    const long long base = static_cast<long long>(k) * rep_period_ps;
    const Sample& s = samples[k];
    for (int m : s.input_pattern.modes) out.push_back({herald_base + m, base});
    for (size_t j = 0; j < s.output_pattern.modes.size(); ++j)
      out.push_back(
          {s.output_pattern.modes[j], base + std::llround(s.arrival_times_ps[j])});
  }
  std::sort(out.begin(), out.end());
  return out;
}

AnalyzeReport run_analyze(const std::string& timetag_path, const ScenarioConfig& c) {
  c.validate();
  const std::vector<TimeTagRecord> tags = parse_timetags(timetag_path);

  const int n_src = static_cast<int>(c.sources.size());
  const std::vector<ModePattern> ins = mode_pairs(n_src);
  const std::vector<ModePattern> outs = mode_pairs(c.n_output_modes);

  AnalyzeReport rep;
  for (const ModePattern& ip : ins)
    for (const ModePattern& op : outs) rep.outcomes.push_back({ip, op});
  const int nq = static_cast<int>(rep.outcomes.size());
  rep.raw_counts.assign(nq, 0.0);
  rep.corrected_counts.assign(nq, 0.0);
  rep.probability.assign(nq, 0.0);
  rep.windowed_probability.assign(c.windows_ps.size(), std::vector<double>(nq, 0.0));

  const auto write_all = [&]() {
    {
      auto out = open_artifact(c, "analyze_counts.csv");
      out << "input;output;count;corrected\n";
      for (int q = 0; q < nq; ++q) {
        if (rep.total_events == 0) break;
        const Outcome& o = rep.outcomes[q];
        for (size_t j = 0; j < o.input.modes.size(); ++j)
          out << (j ? "," : "") << o.input.modes[j];
        out << ';';
        for (size_t j = 0; j < o.output.modes.size(); ++j)
          out << (j ? "," : "") << o.output.modes[j];
        out << ';' << num(rep.raw_counts[q]) << ';' << num(rep.corrected_counts[q]) << "\n";
      }
    }
    {
      auto out = open_artifact(c, "analyze_distribution.csv");
      if (rep.total_events == 0)
        out << "input;output;probability\n";
      else
        write_distribution_csv(out, rep.outcomes, rep.probability);
    }
    {
      auto out = open_artifact(c, "analyze_tau.csv");
      if (rep.total_events == 0)
        out << "tau_ps,count\n";
      else
        write_tau_histogram_csv(out, rep.tau_histogram);
    }
    for (size_t wi = 0; wi < c.windows_ps.size(); ++wi) {
      auto out = open_artifact(c, "analyze_dist_w" + num(c.windows_ps[wi]) + ".csv");
      if (rep.total_events == 0)
        out << "input;output;probability\n";
      else
        write_distribution_csv(out, rep.outcomes, rep.windowed_probability[wi]);
    }
    if (c.pattern_bayes) {
      auto out = open_artifact(c, "analyze_bayes.csv");
      write_bayes_csv(out, rep.bayes);
    }
  };

  if (tags.empty()) {
    write_all();
    return rep;
  }

  // delayed-herald estimates need shifted copies of herald and output channels
  std::vector<TimeTagRecord> merged;
  const int span = c.herald_base + n_src;
  const auto vid = [&](int shift, int ch) { return span + (shift - 1) * span + ch; };
  if (c.background_subtraction) {
    merged = tags;
    for (int k = 1; k < n_src; ++k) {
      for (int m = 0; m < c.n_output_modes; ++m)
        merged = virtual_channel(std::move(merged), {m, vid(k, m), k * c.rep_period_ps},
                                 c.rep_period_ps, true);
      for (int s = 0; s < n_src; ++s)
        merged = virtual_channel(
            std::move(merged), {c.herald_base + s, vid(k, c.herald_base + s), k * c.rep_period_ps},
            c.rep_period_ps, true);
    }
  }

  std::vector<std::vector<double>> shifted(
      std::max(0, n_src - 1), std::vector<double>(nq, 0.0));
  std::vector<long long> all_taus;
  std::vector<std::pair<long long, int>> ordered;  // (anchor time, outcome)
  std::vector<std::vector<long long>> taus(nq);

  for (int q = 0; q < nq; ++q) {
    const Outcome& o = rep.outcomes[q];
    const int ha = c.herald_base + o.input.modes[0];
    const int hb = c.herald_base + o.input.modes[1];
    const int oa = o.output.modes[0];
    const int ob = o.output.modes[1];
    const CoincidenceEvents ev = count_coincidences(tags, {{ha, hb, oa, ob}, c.gate_ps});
    rep.raw_counts[q] = static_cast<double>(ev.count);
    rep.total_events += ev.count;
    for (long long e = 0; e < ev.count; ++e) {
      const long long tau = ev.relative_times_ps[e][2] - ev.relative_times_ps[e][1];
      taus[q].push_back(tau);
      all_taus.push_back(tau);
      ordered.push_back({ev.anchor_times_ps[e], q});
    }
    if (c.background_subtraction) {
      for (int k = 1; k < n_src; ++k) {
        // both herald-to-output assignments of the pulse-shifted pair
        const long long c1 =
            count_coincidences(merged, {{ha, vid(k, hb), oa, vid(k, ob)}, c.gate_ps}).count;
        const long long c2 =
            count_coincidences(merged, {{ha, vid(k, hb), ob, vid(k, oa)}, c.gate_ps}).count;
        shifted[k - 1][q] = static_cast<double>(c1 + c2);
      }
    }
  }

  rep.corrected_counts = c.background_subtraction
                             ? subtract_background(rep.raw_counts, shifted, n_src)
                             : rep.raw_counts;

  const double total_corrected =
      std::accumulate(rep.corrected_counts.begin(), rep.corrected_counts.end(), 0.0);
  if (total_corrected > 0.0) {
    std::vector<double> eff = c.output_efficiency;
    if (eff.empty()) eff.assign(c.n_output_modes, 1.0);
    std::vector<double> wgt = c.source_weight;
    if (wgt.empty()) wgt.assign(n_src, 1.0);
    rep.probability = klyshko_normalize(rep.corrected_counts, rep.outcomes, eff, wgt);
  }

  for (size_t wi = 0; wi < c.windows_ps.size(); ++wi) {
    const double w = c.windows_ps[wi];
    double total = 0.0;
    for (int q = 0; q < nq; ++q) {
      double n = 0.0;
      for (long long tau : taus[q])
        if (std::abs(static_cast<double>(tau)) <= 0.5 * w) n += 1.0;
      rep.windowed_probability[wi][q] = n;
      total += n;
    }
    if (total > 0.0)
      for (double& p : rep.windowed_probability[wi]) p /= total;
  }

  rep.tau_histogram = bin_relative_times(all_taus, c.tau_bin_ps, c.gate_ps);

  if (c.pattern_bayes) {
    if (c.circuit != "f4" || c.n_output_modes != 4 || n_src != 4)
      throw std::invalid_argument("pattern bayes requires the 4-source f4 layout");
    std::vector<double> detunings;
    for (const SourceSpec& s : c.sources) detunings.push_back(s.detuning_ghz);
    const Interferometer circuit = f4(c.phase_rad);
    std::vector<double> dlog(nq);
    std::map<int, std::pair<double, double>> input_norm;  // input -> (sum t, sum a)
    std::vector<double> mt(nq), ma(nq);
    for (int q = 0; q < nq; ++q) {
      const Outcome& o = rep.outcomes[q];
      const CMatrix sub = submatrix(circuit, o.input, o.output);
      mt[q] = test_probability(sub, c.model_r);
      ma[q] = scattershot_adversary_probability(sub, o.input, detunings, c.model_r);
      const int key = o.input.modes[0] * 8 + o.input.modes[1];
      input_norm[key].first += mt[q];
      input_norm[key].second += ma[q];
    }
    for (int q = 0; q < nq; ++q) {
      const Outcome& o = rep.outcomes[q];
      const auto& [st, sa] = input_norm.at(o.input.modes[0] * 8 + o.input.modes[1]);
      dlog[q] = std::log(mt[q] / st) - std::log(ma[q] / sa);
    }
    std::sort(ordered.begin(), ordered.end());
    for (const auto& [anchor, q] : ordered)
      rep.bayes = bayes_update(std::move(rep.bayes), std::exp(dlog[q]), 1.0);
  }

  write_all();
  return rep;
}

}  // namespace trisim
