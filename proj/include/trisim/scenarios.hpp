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

#ifndef TRISIM_SCENARIOS_HPP
#define TRISIM_SCENARIOS_HPP

#include <string>
#include <vector>

#include "trisim/config.hpp"
#include "trisim/interference.hpp"
#include "trisim/sampling.hpp"
#include "trisim/timetags.hpp"

namespace trisim {

// Each run_* writes its CSV artifacts under config.out_dir (created if
// missing) and returns the headline numbers so tests can assert on them
// without reparsing files. Every artifact starts with the provenance line.

struct WindowFit {
  double window_ps = 0.0;
  FringeFit interference;  // swept-phase fringe restricted to the window
  FringeFit delayed;       // consecutive-pulse (non-interfering) baseline
};

struct HomReport {
  std::vector<WindowFit> windows;
  double purity = 0.0;  // heralded purity implied by the pump spec
  double extremum_low_rad = 0.0;
  double extremum_high_rad = 0.0;
};

HomReport run_hom(const ScenarioConfig& c);

struct FusionWindow {
  double window_ps = 0.0;
  FringeFit fit;
  double fidelity = 0.0;
  double fidelity_err = 0.0;
};

struct FusionReport {
  std::vector<FusionWindow> windows;
};

FusionReport run_fusion(const ScenarioConfig& c);

struct WindowPosterior {
  double window_ps = 0.0;
  long long kept = 0;
  double sampled_log_odds = 0.0;
  double sampled_posterior = 0.5;
  double expected_log_odds = 0.0;
  double expected_posterior = 0.5;
};

struct ScattershotReport {
  std::vector<WindowPosterior> sweep;
  // Window where the expected evidence changes sign, interpolated on a dense
  // grid; NaN when the sweep never crosses.
  double crossing_ps = 0.0;
  BayesTrace time_resolved;
};

ScattershotReport run_scattershot(const ScenarioConfig& c);

struct ProjectionsReport {
  std::vector<double> detunings_ghz;
  std::vector<double> jitters_ps;                 // relative-time FWHM per regime
  std::vector<std::vector<double>> visibility;    // [regime][detuning]
};

ProjectionsReport run_projections(const ScenarioConfig& c);

struct AnalyzeReport {
  std::vector<Outcome> outcomes;
  std::vector<double> raw_counts;
  std::vector<double> corrected_counts;
  std::vector<double> probability;
  std::vector<std::vector<double>> windowed_probability;  // [window][outcome]
  std::vector<std::pair<long long, long long>> tau_histogram;
  BayesTrace bayes;
  long long total_events = 0;
};

AnalyzeReport run_analyze(const std::string& timetag_path, const ScenarioConfig& c);

// Exports sampler output as a laser-clocked tag stream: sample k becomes one
// pulse at k * rep_period_ps, herald tags on channels herald_base + input
// mode, photon tags on the output-mode channels at pulse + arrival time.
std::vector<TimeTagRecord> samples_to_timetags(const std::vector<Sample>& samples,
                                               long long rep_period_ps, int herald_base);

}  // namespace trisim

#endif
