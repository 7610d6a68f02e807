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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <utility>
#include <vector>

#include "trisim/config.hpp"
#include "trisim/interference.hpp"
#include "trisim/permanent.hpp"
#include "trisim/scenarios.hpp"
#include "trisim/timetags.hpp"
#include "trisim/version.hpp"

namespace py = pybind11;
using namespace trisim;

namespace {

using TagTuple = std::pair<int, long long>;

std::vector<TagTuple> to_tuples(const std::vector<TimeTagRecord>& records) {
  std::vector<TagTuple> out;
  out.reserve(records.size());
  for (const TimeTagRecord& r : records) out.emplace_back(r.channel, r.timestamp_ps);
  return out;
}

std::vector<TimeTagRecord> from_tuples(const std::vector<TagTuple>& tuples) {
  std::vector<TimeTagRecord> out;
  out.reserve(tuples.size());
  for (const TagTuple& t : tuples) out.push_back({t.first, t.second});
  return out;
}

py::list pattern_list(const ModePattern& p) {
  py::list out;
  for (int m : p.modes) out.append(m);
  return out;
}

py::dict fit_dict(const FringeFit& f) {
  py::dict d;
  d["offset"] = f.offset;
  d["amplitude"] = f.amplitude;
  d["phase0"] = f.phase0;
  d["visibility"] = f.visibility();
  d["visibility_err"] = f.visibility_err();
  return d;
}

py::dict trace_dict(const BayesTrace& t) {
  py::dict d;
  d["log_odds"] = t.log_odds;
  d["posterior"] = t.posterior();
  d["n"] = t.size();
  d["posteriors"] = t.posteriors;
  return d;
}

py::dict hom_dict(const HomReport& r) {
  py::list windows;
  for (const WindowFit& w : r.windows) {
    py::dict d;
    d["window_ps"] = w.window_ps;
    d["interference"] = fit_dict(w.interference);
    d["delayed"] = fit_dict(w.delayed);
    windows.append(d);
  }
  py::dict d;
  d["windows"] = windows;
  d["purity"] = r.purity;
  d["extremum_low_rad"] = r.extremum_low_rad;
  d["extremum_high_rad"] = r.extremum_high_rad;
  return d;
}

py::dict fusion_dict(const FusionReport& r) {
  py::list windows;
  for (const FusionWindow& w : r.windows) {
    py::dict d;
    d["window_ps"] = w.window_ps;
    d["fit"] = fit_dict(w.fit);
    d["fidelity"] = w.fidelity;
    d["fidelity_err"] = w.fidelity_err;
    windows.append(d);
  }
  py::dict d;
  d["windows"] = windows;
  return d;
}

py::dict scattershot_dict(const ScattershotReport& r) {
  py::list sweep;
  for (const WindowPosterior& w : r.sweep) {
    py::dict d;
    d["window_ps"] = w.window_ps;
    d["kept"] = w.kept;
    d["sampled_log_odds"] = w.sampled_log_odds;
    d["sampled_posterior"] = w.sampled_posterior;
    d["expected_log_odds"] = w.expected_log_odds;
    d["expected_posterior"] = w.expected_posterior;
    sweep.append(d);
  }
  py::dict d;
  d["sweep"] = sweep;
  d["crossing_ps"] = r.crossing_ps;
  d["time_resolved"] = trace_dict(r.time_resolved);
  return d;
}

py::dict projections_dict(const ProjectionsReport& r) {
  py::dict d;
  d["detunings_ghz"] = r.detunings_ghz;
  d["jitters_ps"] = r.jitters_ps;
  d["visibility"] = r.visibility;
  return d;
}

py::dict analyze_dict(const AnalyzeReport& r) {
  py::list outcomes;
  for (size_t q = 0; q < r.outcomes.size(); ++q) {
    py::dict d;
    d["input"] = pattern_list(r.outcomes[q].input);
    d["output"] = pattern_list(r.outcomes[q].output);
    d["raw"] = r.raw_counts[q];
    d["corrected"] = r.corrected_counts[q];
    d["probability"] = r.probability[q];
    outcomes.append(d);
  }
  py::dict d;
  d["total_events"] = r.total_events;
  d["outcomes"] = outcomes;
  d["windowed_probability"] = r.windowed_probability;
  d["tau_histogram"] = r.tau_histogram;
  d["bayes"] = trace_dict(r.bayes);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Time-resolved photon interference simulator";
  m.attr("__version__") = TRISIM_VERSION;

  py::class_<SourceSpec>(m, "SourceSpec")
      .def(py::init<>())
      .def(py::init([](double det, double lw) {
             SourceSpec s;
             s.detuning_ghz = det;
             s.linewidth_ghz = lw;
             return s;
           }),
           py::arg("detuning_ghz"), py::arg("linewidth_ghz") = 3.8)
      .def_readwrite("detuning_ghz", &SourceSpec::detuning_ghz)
      .def_readwrite("linewidth_ghz", &SourceSpec::linewidth_ghz)
      .def("__repr__", [](const SourceSpec& s) {
        return "SourceSpec(detuning_ghz=" + std::to_string(s.detuning_ghz) +
               ", linewidth_ghz=" + std::to_string(s.linewidth_ghz) + ")";
      });

  py::class_<JitterModel>(m, "JitterModel")
      .def(py::init<>())
      .def(py::init([](double det, double tag) {
             JitterModel j;
             j.detector_fwhm_ps = det;
             j.tagger_fwhm_ps = tag;
             return j;
           }),
           py::arg("detector_fwhm_ps"), py::arg("tagger_fwhm_ps") = 0.0)
      .def_readwrite("detector_fwhm_ps", &JitterModel::detector_fwhm_ps)
      .def_readwrite("tagger_fwhm_ps", &JitterModel::tagger_fwhm_ps);

  py::class_<PumpSpec>(m, "PumpSpec")
      .def(py::init<>())
      .def_readwrite("center_nm", &PumpSpec::center_nm)
      .def_readwrite("fwhm_pm", &PumpSpec::fwhm_pm)
      .def_readwrite("rep_period_ns", &PumpSpec::rep_period_ns);

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def(py::init<>())
      .def_readwrite("scenario", &ScenarioConfig::scenario)
      .def_readwrite("seed", &ScenarioConfig::seed)
      .def_readwrite("n_samples", &ScenarioConfig::n_samples)
      .def_readwrite("out_dir", &ScenarioConfig::out_dir)
      .def_readwrite("sources", &ScenarioConfig::sources)
      .def_readwrite("pump", &ScenarioConfig::pump)
      .def_readwrite("circuit", &ScenarioConfig::circuit)
      .def_readwrite("phase_rad", &ScenarioConfig::phase_rad)
      .def_readwrite("jitter", &ScenarioConfig::jitter)
      .def_readwrite("windows_ps", &ScenarioConfig::windows_ps)
      .def_readwrite("model_r", &ScenarioConfig::model_r)
      .def_readwrite("data_model", &ScenarioConfig::data_model)
      .def_readwrite("data_r", &ScenarioConfig::data_r)
      .def_readwrite("phase_steps", &ScenarioConfig::phase_steps)
      .def_readwrite("projection_jitters_ps", &ScenarioConfig::projection_jitters_ps)
      .def_readwrite("detuning_min_ghz", &ScenarioConfig::detuning_min_ghz)
      .def_readwrite("detuning_max_ghz", &ScenarioConfig::detuning_max_ghz)
      .def_readwrite("n_detunings", &ScenarioConfig::n_detunings)
      .def_readwrite("rep_period_ps", &ScenarioConfig::rep_period_ps)
      .def_readwrite("gate_ps", &ScenarioConfig::gate_ps)
      .def_readwrite("tau_bin_ps", &ScenarioConfig::tau_bin_ps)
      .def_readwrite("n_output_modes", &ScenarioConfig::n_output_modes)
      .def_readwrite("herald_base", &ScenarioConfig::herald_base)
      .def_readwrite("background_subtraction", &ScenarioConfig::background_subtraction)
      .def_readwrite("pattern_bayes", &ScenarioConfig::pattern_bayes)
      .def_readwrite("output_efficiency", &ScenarioConfig::output_efficiency)
      .def_readwrite("source_weight", &ScenarioConfig::source_weight)
      .def("validate", &ScenarioConfig::validate)
      .def("__repr__", [](const ScenarioConfig& c) {
        return "<ScenarioConfig " + c.scenario + " " + config_hash(c) + ">";
      });

  m.def("default_config", &default_config, py::arg("scenario"),
        "Per-scenario defaults (hom, fusion, scattershot, projections, analyze).");
  m.def("parse_config_file", &parse_config_file, py::arg("path"));
  m.def("serialize_config", &serialize_config, py::arg("config"),
        "Canonical text form; parsing it back reproduces the config exactly.");
  m.def("config_hash", &config_hash, py::arg("config"),
        "16 hex digits naming the physics; seed and out_dir do not contribute.");

  m.def(
      "permanent", [](const CMatrix& m) { return permanent(m); }, py::arg("matrix"),
      "Permanent of a complex square matrix (Ryser, Gray-code order).");
  m.def("fusion_fidelity", &fusion_fidelity, py::arg("visibility"),
        "Bell-state fidelity bound (1 + gamma)/2 with gamma = 2v/(1+v).");
  m.def(
      "projection_visibility",
      [](double detuning_ghz, double linewidth_ghz, double detector_fwhm_ps,
         double tagger_fwhm_ps) {
        return projection_visibility(detuning_ghz, linewidth_ghz,
                                     {detector_fwhm_ps, tagger_fwhm_ps});
      },
      py::arg("detuning_ghz"), py::arg("linewidth_ghz"), py::arg("detector_fwhm_ps"),
      py::arg("tagger_fwhm_ps") = 0.0,
      "Two-photon visibility after time projection under per-channel jitter.");
  m.def(
      "combined_jitter_fwhm",
      [](double detector_fwhm_ps, double tagger_fwhm_ps) {
        return combined_jitter_fwhm(
            {{detector_fwhm_ps, tagger_fwhm_ps}, {detector_fwhm_ps, tagger_fwhm_ps}});
      },
      py::arg("detector_fwhm_ps"), py::arg("tagger_fwhm_ps"),
      "Relative-time FWHM of two identical detection channels (quadrature sum).");

  m.def(
      "run_hom", [](const ScenarioConfig& c) { return hom_dict(run_hom(c)); },
      py::arg("config"));
  m.def(
      "run_fusion", [](const ScenarioConfig& c) { return fusion_dict(run_fusion(c)); },
      py::arg("config"));
  m.def(
      "run_scattershot",
      [](const ScenarioConfig& c) { return scattershot_dict(run_scattershot(c)); },
      py::arg("config"));
  m.def(
      "run_projections",
      [](const ScenarioConfig& c) { return projections_dict(run_projections(c)); },
      py::arg("config"));
  m.def(
      "run_analyze",
      [](const std::string& path, const ScenarioConfig& c) {
        return analyze_dict(run_analyze(path, c));
      },
      py::arg("timetag_path"), py::arg("config"));

  m.def(
      "synthesize_delayed_pair_stream",
      [](double theta, int n_pulses, double emit_probability, std::uint64_t seed,
         long long rep_period_ps) {
        DelayedPairConfig cfg;
        cfg.theta = theta;
        cfg.n_pulses = n_pulses;
        cfg.emit_probability = emit_probability;
        cfg.seed = seed;
        cfg.rep_period_ps = rep_period_ps;
        return to_tuples(synthesize_delayed_pair_stream(cfg));
      },
      py::arg("theta"), py::arg("n_pulses") = 100000, py::arg("emit_probability") = 0.05,
      py::arg("seed") = 1, py::arg("rep_period_ps") = 2000,
      "Delayed-pair tag stream as (channel, timestamp_ps) tuples.");
  m.def(
      "delayed_pair_events",
      [](const std::vector<TagTuple>& tags, long long rep_period_ps, long long gate_ps) {
        return delayed_pair_events(from_tuples(tags), rep_period_ps, gate_ps);
      },
      py::arg("tags"), py::arg("rep_period_ps") = 2000, py::arg("gate_ps") = kDefaultGatePs);

  m.def(
      "save_timetags",
      [](const std::string& path, const std::vector<TagTuple>& tags) {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write '" + path + "'");
        write_timetags(out, from_tuples(tags));
      },
      py::arg("path"), py::arg("tags"));
  m.def(
      "load_timetags",
      [](const std::string& path) { return to_tuples(parse_timetags(path)); },
      py::arg("path"));
}
