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

#ifndef TRISIM_CONFIG_HPP
#define TRISIM_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "trisim/histogram.hpp"
#include "trisim/profiles.hpp"
#include "trisim/timetags.hpp"

namespace trisim {

struct SourceSpec {
  double detuning_ghz = 0.0;  // carrier offset of this ring's heralded photon
  double linewidth_ghz = 3.8;
};

// One scenario run, fully specified. The file format is a flat key-value
// text with [section] headers, '#' comments, and repeated-index keys for
// tables (source.0, source.1, ...); every key has a fixed home section so a
// config serializes back to a canonical byte-identical form.
struct ScenarioConfig {
  std::string scenario = "hom";
  std::uint64_t seed = 1;
  int n_samples = 20000;
  std::string out_dir = ".";

  std::vector<SourceSpec> sources;
  PumpSpec pump;

  std::string circuit = "mzi";  // mzi | f4 | three_photon
  double phase_rad = 1.5707963267948966;

  JitterModel jitter;  // per detection channel

  std::vector<double> windows_ps = {200.0, 100.0, 50.0, 20.0};

  // model comparison
  double model_r = 0.64;
  std::string data_model = "test";  // synthetic data source: test | adversarial
  double data_r = 1.0;

  int phase_steps = 48;

  // projections grid
  std::vector<double> projection_jitters_ps = {108.919, 22.2, 4.2};  // relative FWHM
  double detuning_min_ghz = 0.5;
  double detuning_max_ghz = 500.0;
  int n_detunings = 41;

  // analyze chain
  long long rep_period_ps = 2000;
  long long gate_ps = kDefaultGatePs;
  long long tau_bin_ps = 10;
  int n_output_modes = 4;
  int herald_base = 4;
  bool background_subtraction = false;
  bool pattern_bayes = false;
  std::vector<double> output_efficiency;  // empty = all 1
  std::vector<double> source_weight;      // empty = all 1

  void validate() const;
};

// Per-scenario defaults matching the reference experiment layouts.
ScenarioConfig default_config(const std::string& scenario);

// Throws std::invalid_argument with "config line N: ..." context.
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig parse_config_file(const std::string& path);

// Canonical text form; parse(serialize(c)) reproduces c exactly.
std::string serialize_config(const ScenarioConfig& c);

// FNV-1a over the canonical serialization, as 16 hex digits. Seed and output
// directory are normalized away: the hash names the physics, not the run.
std::string config_hash(const ScenarioConfig& c);

// Provenance line prepended to every emitted artifact:
// "# trisim <version> seed=<seed> config=<hash>".
std::string provenance_header(const ScenarioConfig& c);

}  // namespace trisim

#endif
