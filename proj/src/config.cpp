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

#include "trisim/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "trisim/version.hpp"

namespace trisim {

namespace {

const std::set<std::string> kScenarios = {"hom", "fusion", "scattershot", "projections",
                                          "analyze"};
const std::set<std::string> kCircuits = {"mzi", "f4", "three_photon"};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
  return s;
}

[[noreturn]] void fail(int lineno, const std::string& what) {
  throw std::invalid_argument("config line " + std::to_string(lineno) + ": " + what);
}

std::string trim(const std::string& s) {
  const size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& s, int lineno) {
  try {
    size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) fail(lineno, "trailing characters in number '" + s + "'");
    return v;
  } catch (const std::invalid_argument&) {
    fail(lineno, "expected a number, got '" + s + "'");
  } catch (const std::out_of_range&) {
    fail(lineno, "number out of range: '" + s + "'");
  }
}

long long to_ll(const std::string& s, int lineno) {
  try {
    size_t used = 0;
    long long v = std::stoll(s, &used);
    if (used != s.size()) fail(lineno, "trailing characters in integer '" + s + "'");
    return v;
  } catch (const std::invalid_argument&) {
    fail(lineno, "expected an integer, got '" + s + "'");
  } catch (const std::out_of_range&) {
    fail(lineno, "integer out of range: '" + s + "'");
  }
}

bool to_bool(const std::string& s, int lineno) {
  if (s == "on" || s == "true" || s == "1") return true;
  if (s == "off" || s == "false" || s == "0") return false;
  fail(lineno, "expected on/off, got '" + s + "'");
}

std::vector<double> to_list(const std::string& s, int lineno) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(to_double(trim(tok), lineno));
  if (out.empty()) fail(lineno, "expected a comma-separated list");
  return out;
}

}  // namespace

void ScenarioConfig::validate() const {
  if (!kScenarios.count(scenario))
    throw std::invalid_argument("unknown scenario '" + scenario + "'");
  if (!kCircuits.count(circuit)) throw std::invalid_argument("unknown circuit preset '" + circuit + "'");
  if (n_samples <= 0) throw std::invalid_argument("sample count must be positive");
  if (sources.empty()) throw std::invalid_argument("at least one source required");
  for (const SourceSpec& s : sources)
    if (!(s.linewidth_ghz > 0.0)) throw std::invalid_argument("source linewidth must be positive");
  pump.validate();
  if (jitter.detector_fwhm_ps < 0.0 || jitter.tagger_fwhm_ps < 0.0)
    throw std::invalid_argument("jitter widths must be nonnegative");
  if (windows_ps.empty()) throw std::invalid_argument("windows list must not be empty");
  for (size_t i = 0; i < windows_ps.size(); ++i) {
    if (!(windows_ps[i] > 0.0)) throw std::invalid_argument("windows must be positive");
    if (i > 0 && windows_ps[i] >= windows_ps[i - 1])
      throw std::invalid_argument("windows must be sorted strictly descending");
  }
  if (!(model_r >= 0.0 && model_r <= 1.0))
    throw std::invalid_argument("model r must lie in [0, 1]");
  if (data_model != "test" && data_model != "adversarial")
    throw std::invalid_argument("data model must be test or adversarial");
  if (!(data_r >= 0.0 && data_r <= 1.0)) throw std::invalid_argument("data r must lie in [0, 1]");
  if (phase_steps < 32) throw std::invalid_argument("phase sweeps need at least 32 steps");
  if (projection_jitters_ps.empty())
    throw std::invalid_argument("projections need at least one jitter regime");
  for (double j : projection_jitters_ps)
    if (!(j > 0.0)) throw std::invalid_argument("projection jitters must be positive");
  if (!(detuning_min_ghz > 0.0) || !(detuning_max_ghz > detuning_min_ghz))
    throw std::invalid_argument("projection detuning range must satisfy 0 < min < max");
  if (n_detunings < 2) throw std::invalid_argument("projection grid needs at least 2 detunings");
  if (rep_period_ps <= 0 || gate_ps <= 0 || tau_bin_ps <= 0)
    throw std::invalid_argument("analyze periods must be positive");
  if (n_output_modes < 2) throw std::invalid_argument("analyze needs at least 2 output modes");
  if (herald_base < n_output_modes)
    throw std::invalid_argument("herald channels must not collide with output channels");
}

ScenarioConfig default_config(const std::string& scenario) {
  ScenarioConfig c;
  c.scenario = scenario;
  if (scenario == "hom") {
    c.sources = {{0.0, 3.8}, {6.8146, 3.8}};
    c.circuit = "mzi";
    c.jitter = {75.4, 15.7};
  } else if (scenario == "fusion") {
    c.sources = {{0.0, 3.8}, {6.8146, 3.8}};
    c.circuit = "f4";
    c.jitter = {75.4, 15.7};
  } else if (scenario == "scattershot") {
    c.sources = {{0.0, 3.8}, {6.8146, 3.8}, {6.8146, 3.8}, {0.0, 3.8}};
    c.circuit = "f4";
    c.jitter = {75.4, 15.7};
    c.model_r = 0.75;
  } else if (scenario == "projections") {
    c.sources = {{0.0, 3.8}};
    c.circuit = "mzi";
    c.jitter = {0.0, 0.0};
  } else if (scenario == "analyze") {
    c.sources = {{0.0, 3.8}, {6.8146, 3.8}, {6.8146, 3.8}, {0.0, 3.8}};
    c.circuit = "f4";
    c.jitter = {75.4, 15.7};
    c.model_r = 0.75;
  } else {
    throw std::invalid_argument("unknown scenario '" + scenario + "'");
  }
  return c;
}

ScenarioConfig parse_config(std::istream& in) {
  // First pass finds the scenario so unspecified keys fall back to that
  // scenario's defaults; the file then only has to list deltas.
  std::vector<std::string> lines;
  {
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
  }
  std::string scenario = "hom";
  {
    std::string section;
    for (const std::string& raw : lines) {
      std::string t = trim(raw);
      if (t.empty() || t[0] == '#') continue;
      if (t.front() == '[' && t.back() == ']') {
        section = trim(t.substr(1, t.size() - 2));
        continue;
      }
      const size_t eq = t.find('=');
      if (eq == std::string::npos) continue;
      if (section == "scenario" && trim(t.substr(0, eq)) == "name") {
        const std::string v = trim(t.substr(eq + 1));
        if (!v.empty()) scenario = v;  // empty values fail later with a line number
      }
    }
  }
  if (!kScenarios.count(scenario)) throw std::invalid_argument("unknown scenario '" + scenario + "'");

  ScenarioConfig c = default_config(scenario);
  bool have_sources = false;
  std::string section;
  int lineno = 0;
  for (const std::string& line : lines) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[') {
      if (t.back() != ']') fail(lineno, "unterminated section header");
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const size_t eq = t.find('=');
    if (eq == std::string::npos) fail(lineno, "expected 'key = value'");
    const std::string key = trim(t.substr(0, eq));
    const std::string val = trim(t.substr(eq + 1));
    if (key.empty() || val.empty()) fail(lineno, "empty key or value");
    const std::string sk = section + "." + key;

    if (sk == "scenario.name") {
      c.scenario = val;
    } else if (sk == "scenario.seed") {
      c.seed = static_cast<std::uint64_t>(to_ll(val, lineno));
    } else if (sk == "scenario.samples") {
      c.n_samples = static_cast<int>(to_ll(val, lineno));
    } else if (sk == "scenario.out") {
      c.out_dir = val;
    } else if (section == "sources" && key.rfind("source.", 0) == 0) {
      if (!have_sources) {
        c.sources.clear();
        have_sources = true;
      }
      const size_t idx = static_cast<size_t>(to_ll(key.substr(7), lineno));
      std::vector<double> f = to_list(val, lineno);
      if (f.size() != 2) fail(lineno, "source entries are 'detuning_ghz, linewidth_ghz'");
      if (idx != c.sources.size()) fail(lineno, "source indices must be consecutive from 0");
      c.sources.push_back({f[0], f[1]});
    } else if (sk == "pump.center_nm") {
      c.pump.center_nm = to_double(val, lineno);
    } else if (sk == "pump.fwhm_pm") {
      c.pump.fwhm_pm = to_double(val, lineno);
    } else if (sk == "pump.rep_period_ns") {
      c.pump.rep_period_ns = to_double(val, lineno);
    } else if (sk == "circuit.preset") {
      c.circuit = val;
    } else if (sk == "circuit.phase_rad") {
      c.phase_rad = to_double(val, lineno);
    } else if (sk == "jitter.detector_fwhm_ps") {
      c.jitter.detector_fwhm_ps = to_double(val, lineno);
    } else if (sk == "jitter.tagger_fwhm_ps") {
      c.jitter.tagger_fwhm_ps = to_double(val, lineno);
    } else if (sk == "windows.windows_ps") {
      c.windows_ps = to_list(val, lineno);
    } else if (sk == "model.r") {
      c.model_r = to_double(val, lineno);
    } else if (sk == "model.data") {
      c.data_model = val;
    } else if (sk == "model.data_r") {
      c.data_r = to_double(val, lineno);
    } else if (sk == "sweep.phase_steps") {
      c.phase_steps = static_cast<int>(to_ll(val, lineno));
    } else if (sk == "projections.jitters_ps") {
      c.projection_jitters_ps = to_list(val, lineno);
    } else if (sk == "projections.detuning_min_ghz") {
      c.detuning_min_ghz = to_double(val, lineno);
    } else if (sk == "projections.detuning_max_ghz") {
      c.detuning_max_ghz = to_double(val, lineno);
    } else if (sk == "projections.n_detunings") {
      c.n_detunings = static_cast<int>(to_ll(val, lineno));
    } else if (sk == "analyze.rep_period_ps") {
      c.rep_period_ps = to_ll(val, lineno);
    } else if (sk == "analyze.gate_ps") {
      c.gate_ps = to_ll(val, lineno);
    } else if (sk == "analyze.tau_bin_ps") {
      c.tau_bin_ps = to_ll(val, lineno);
    } else if (sk == "analyze.n_output_modes") {
      c.n_output_modes = static_cast<int>(to_ll(val, lineno));
    } else if (sk == "analyze.herald_base") {
      c.herald_base = static_cast<int>(to_ll(val, lineno));
    } else if (sk == "analyze.background") {
      c.background_subtraction = to_bool(val, lineno);
    } else if (sk == "analyze.bayes") {
      c.pattern_bayes = to_bool(val, lineno);
    } else if (sk == "efficiency.outputs") {
      c.output_efficiency = to_list(val, lineno);
    } else if (sk == "efficiency.weights") {
      c.source_weight = to_list(val, lineno);
    } else {
      fail(lineno, "unknown key '" + sk + "'");
    }
  }
  c.validate();
  return c;
}

ScenarioConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  return parse_config(in);
}

std::string serialize_config(const ScenarioConfig& c) {
  std::string s;
  s += "[scenario]\n";
  s += "name = " + c.scenario + "\n";
  s += "seed = " + std::to_string(c.seed) + "\n";
  s += "samples = " + std::to_string(c.n_samples) + "\n";
  s += "out = " + c.out_dir + "\n";
  s += "[sources]\n";
  for (size_t i = 0; i < c.sources.size(); ++i)
    s += "source." + std::to_string(i) + " = " + fmt(c.sources[i].detuning_ghz) + "," +
         fmt(c.sources[i].linewidth_ghz) + "\n";
  s += "[pump]\n";
  s += "center_nm = " + fmt(c.pump.center_nm) + "\n";
  s += "fwhm_pm = " + fmt(c.pump.fwhm_pm) + "\n";
  s += "rep_period_ns = " + fmt(c.pump.rep_period_ns) + "\n";
  s += "[circuit]\n";
  s += "preset = " + c.circuit + "\n";
  s += "phase_rad = " + fmt(c.phase_rad) + "\n";
  s += "[jitter]\n";
  s += "detector_fwhm_ps = " + fmt(c.jitter.detector_fwhm_ps) + "\n";
  s += "tagger_fwhm_ps = " + fmt(c.jitter.tagger_fwhm_ps) + "\n";
  s += "[windows]\n";
  s += "windows_ps = " + join(c.windows_ps) + "\n";
  s += "[model]\n";
  s += "r = " + fmt(c.model_r) + "\n";
  s += "data = " + c.data_model + "\n";
  s += "data_r = " + fmt(c.data_r) + "\n";
  s += "[sweep]\n";
  s += "phase_steps = " + std::to_string(c.phase_steps) + "\n";
  s += "[projections]\n";
  s += "jitters_ps = " + join(c.projection_jitters_ps) + "\n";
  s += "detuning_min_ghz = " + fmt(c.detuning_min_ghz) + "\n";
  s += "detuning_max_ghz = " + fmt(c.detuning_max_ghz) + "\n";
  s += "n_detunings = " + std::to_string(c.n_detunings) + "\n";
  s += "[analyze]\n";
  s += "rep_period_ps = " + std::to_string(c.rep_period_ps) + "\n";
  s += "gate_ps = " + std::to_string(c.gate_ps) + "\n";
  s += "tau_bin_ps = " + std::to_string(c.tau_bin_ps) + "\n";
  s += "n_output_modes = " + std::to_string(c.n_output_modes) + "\n";
  s += "herald_base = " + std::to_string(c.herald_base) + "\n";
  s += std::string("background = ") + (c.background_subtraction ? "on" : "off") + "\n";
  s += std::string("bayes = ") + (c.pattern_bayes ? "on" : "off") + "\n";
  if (!c.output_efficiency.empty() || !c.source_weight.empty()) {
    s += "[efficiency]\n";
    if (!c.output_efficiency.empty()) s += "outputs = " + join(c.output_efficiency) + "\n";
    if (!c.source_weight.empty()) s += "weights = " + join(c.source_weight) + "\n";
  }
  return s;
}

std::string config_hash(const ScenarioConfig& c) {
  // the hash identifies the physics; seed and destination are provenance of
  // the individual run and are printed alongside it
  ScenarioConfig n = c;
  n.seed = 0;
  n.out_dir = "";
  const std::string s = serialize_config(n);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string provenance_header(const ScenarioConfig& c) {
  return std::string("# trisim ") + TRISIM_VERSION + " seed=" + std::to_string(c.seed) +
         " config=" + config_hash(c) + "\n";
}

}  // namespace trisim
