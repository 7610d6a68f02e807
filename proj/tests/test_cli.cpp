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

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

#ifdef TRISIM_CLI_PATH

namespace {

namespace fs = std::filesystem;

int run_cli(const std::string& args) {
  const std::string cmd = std::string(TRISIM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return rc < 0 ? rc : WEXITSTATUS(rc);
}

std::string scratch_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("trisim_cli_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream(path) << text;
}

}  // namespace

TEST_CASE("cli: help and version succeed, missing subcommand is a config error") {
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("--version") == 0);
  CHECK(run_cli("hom --help") == 0);
  CHECK(run_cli("") == 1);
  CHECK(run_cli("warp") == 1);
  CHECK(run_cli("hom --no-such-flag") == 1);
  CHECK(run_cli("analyze") == 1);  // tag stream path is required
}

TEST_CASE("cli: fusion run writes provenance-headed artifacts, flags override the file") {
  const std::string dir = scratch_dir("fusion");
  const std::string cfg = dir + "/run.cfg";
  write_file(cfg, "[scenario]\nname = fusion\nseed = 4\n");

  CHECK(run_cli("fusion --config " + cfg + " --seed 9 --windows 60,20 --out " + dir) == 0);
  const std::string vis = slurp(dir + "/fusion_visibilities.csv");
  CHECK(vis.rfind("# trisim ", 0) == 0);
  CHECK(vis.find(" seed=9 ") != std::string::npos);  // flag beats the file
  // header plus one row per requested window
  CHECK(std::count(vis.begin(), vis.end(), '\n') == 4);

  // subcommand and config scenario must agree
  CHECK(run_cli("hom --config " + cfg) == 1);
  // windows must descend
  CHECK(run_cli("fusion --windows 20,60 --out " + dir) == 1);
  CHECK(run_cli("fusion --windows nope --out " + dir) == 1);
}

TEST_CASE("cli: fixed seeds reproduce scattershot samples bit for bit") {
  const std::string a = scratch_dir("scatter_a");
  const std::string b = scratch_dir("scatter_b");
  const std::string c = scratch_dir("scatter_c");
  const std::string cfg = a + "/run.cfg";
  write_file(cfg, "[scenario]\nname = scattershot\nsamples = 500\n");

  CHECK(run_cli("scattershot --config " + cfg + " --seed 12 --out " + a) == 0);
  CHECK(run_cli("scattershot --config " + cfg + " --seed 12 --out " + b) == 0);
  CHECK(run_cli("scattershot --config " + cfg + " --seed 13 --out " + c) == 0);
  CHECK(slurp(a + "/scattershot_samples.csv") == slurp(b + "/scattershot_samples.csv"));
  CHECK(slurp(a + "/scattershot_samples.csv") != slurp(c + "/scattershot_samples.csv"));
  CHECK(slurp(a + "/scattershot_sweep.csv") == slurp(b + "/scattershot_sweep.csv"));
}

TEST_CASE("cli: analyze exit codes separate config from data problems") {
  const std::string dir = scratch_dir("analyze");
  const std::string empty = dir + "/empty.tags";
  write_file(empty, "");
  CHECK(run_cli("analyze " + empty + " --out " + dir) == 0);
  CHECK(slurp(dir + "/analyze_distribution.csv").rfind("# trisim ", 0) == 0);

  const std::string bad = dir + "/bad.tags";
  write_file(bad, "0,100\nbroken line\n");
  CHECK(run_cli("analyze " + bad + " --out " + dir) == 2);
  CHECK(run_cli("analyze " + dir + "/missing.tags --out " + dir) == 2);
  CHECK(run_cli("analyze " + empty + " --config " + dir + "/missing.cfg") == 1);
}

TEST_CASE("cli: detuning, linewidth and jitter knobs reach the engine") {
  const std::string dir = scratch_dir("knobs");
  // zero detuning and zero jitter force a perfect fringe; the dip of the
  // narrowest window then sits numerically at zero counts
  CHECK(run_cli("hom --detuning-ghz 0 --jitter-det-ps 0 --jitter-tag-ps 0 --windows 20 --out " +
                dir) == 0);
  const std::string vis = slurp(dir + "/hom_visibilities.csv");
  std::istringstream in(vis);
  std::string provenance, header, row;
  std::getline(in, provenance);
  std::getline(in, header);
  std::getline(in, row);
  CHECK(row.rfind("20,", 0) == 0);
  const double v = std::stod(row.substr(3));
  CHECK(v == doctest::Approx(1.0).epsilon(1e-6));

  CHECK(run_cli("projections --linewidth-ghz 0 --out " + dir) == 1);  // invalid linewidth
}

#endif  // TRISIM_CLI_PATH
