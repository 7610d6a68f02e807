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

#include "trisim/timetags.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace trisim {

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

long long parse_ll(const std::string& tok, int lineno, const char* what) {
  try {
    size_t used = 0;
    const long long v = std::stoll(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("timetags line " + std::to_string(lineno) + ": bad " + what +
                             " '" + tok + "'");
  }
}

}  // namespace

void VirtualChannelSpec::validate() const {
  if (delay_ps < 0) throw std::invalid_argument("virtual channel delay must be >= 0");
  if (virtual_channel == source_channel)
    throw std::invalid_argument("virtual channel id must differ from its source");
}

void CoincidencePattern::validate() const {
  if (window_ps <= 0) throw std::invalid_argument("coincidence window must be positive");
  if (channels.empty()) throw std::invalid_argument("coincidence pattern needs channels");
  std::unordered_set<int> seen;
  for (int c : channels)
    if (!seen.insert(c).second)
      throw std::invalid_argument("coincidence pattern channels must be distinct");
}

std::vector<TimeTagRecord> parse_timetags(std::istream& in) {
  std::vector<TimeTagRecord> records;
  std::unordered_map<int, long long> last;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::stringstream ss(line);
    std::string fch, fts;
    if (!std::getline(ss, fch, ',') || !std::getline(ss, fts) || fts.find(',') != std::string::npos)
      throw std::runtime_error("timetags line " + std::to_string(lineno) +
                               ": expected 'channel,timestamp_ps'");
    TimeTagRecord r;
    r.channel = static_cast<int>(parse_ll(fch, lineno, "channel"));
    r.timestamp_ps = parse_ll(fts, lineno, "timestamp");
    auto it = last.find(r.channel);
    if (it != last.end() && r.timestamp_ps <= it->second)
      throw std::runtime_error("timetags line " + std::to_string(lineno) +
                               ": non-monotone timestamps on channel " +
                               std::to_string(r.channel));
    last[r.channel] = r.timestamp_ps;
    records.push_back(r);
  }
  std::sort(records.begin(), records.end());
  return records;
}

std::vector<TimeTagRecord> parse_timetags(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open time-tag file: " + path);
  return parse_timetags(in);
}

void write_timetags(std::ostream& out, const std::vector<TimeTagRecord>& records) {
  out << "# channel,timestamp_ps\n";
  for (const TimeTagRecord& r : records) out << r.channel << ',' << r.timestamp_ps << '\n';
}

std::vector<TimeTagRecord> virtual_channel(std::vector<TimeTagRecord> records,
                                           const VirtualChannelSpec& spec,
                                           long long rep_period_ps, bool strict) {
  spec.validate();
  if (rep_period_ps > 0 && spec.delay_ps % rep_period_ps != 0) {
    if (strict)
      throw std::invalid_argument("virtual channel delay is not a multiple of the period");
    std::cerr << "warning: virtual channel delay " << spec.delay_ps
              << " ps is not a multiple of the repetition period " << rep_period_ps << " ps\n";
  }
  const size_t original = records.size();
  for (size_t k = 0; k < original; ++k) {
    if (records[k].channel == spec.source_channel)
      records.push_back({spec.virtual_channel, records[k].timestamp_ps + spec.delay_ps});
  }
  std::inplace_merge(records.begin(), records.begin() + original, records.end());
  return records;
}

CoincidenceEvents count_coincidences(const std::vector<TimeTagRecord>& records,
                                     const CoincidencePattern& pattern) {
  pattern.validate();
  const int k = static_cast<int>(pattern.channels.size());
  std::unordered_map<int, int> slot;
  for (int j = 0; j < k; ++j) slot[pattern.channels[j]] = j;

  std::vector<std::vector<long long>> fifo(k);
  for (const TimeTagRecord& r : records) {
    auto it = slot.find(r.channel);
    if (it == slot.end()) continue;
    std::vector<long long>& f = fifo[it->second];
    if (!f.empty() && r.timestamp_ps <= f.back())
      throw std::invalid_argument("records are not sorted in time per channel");
    f.push_back(r.timestamp_ps);
  }

  CoincidenceEvents events;
  std::vector<size_t> head(k, 0);
  while (true) {
    long long lo = std::numeric_limits<long long>::max();
    long long hi = std::numeric_limits<long long>::min();
    int lo_slot = -1;
    bool complete = true;
    for (int j = 0; j < k; ++j) {
      if (head[j] >= fifo[j].size()) {
        complete = false;
        break;
      }
      const long long t = fifo[j][head[j]];
      if (t < lo) {
        lo = t;
        lo_slot = j;
      }
      hi = std::max(hi, t);
    }
    if (!complete) break;
    if (hi - lo <= pattern.window_ps) {
      std::vector<long long> rel(k - 1);
      for (int j = 1; j < k; ++j) rel[j - 1] = fifo[j][head[j]] - fifo[0][head[0]];
      events.relative_times_ps.push_back(std::move(rel));
      events.anchor_times_ps.push_back(fifo[0][head[0]]);
      for (int j = 0; j < k; ++j) ++head[j];
    } else {
      // the oldest pending tag can never close this gap with later tags
      ++head[lo_slot];
    }
  }
  events.count = static_cast<long long>(events.relative_times_ps.size());
  return events;
}

std::vector<double> subtract_background(const std::vector<double>& signal_counts,
                                        const std::vector<std::vector<double>>& shifted_counts,
                                        int n_sources) {
  if (n_sources < 2)
    throw std::invalid_argument("background subtraction needs at least two sources");
  for (const auto& s : shifted_counts)
    if (s.size() != signal_counts.size())
      throw std::invalid_argument("shifted counts must match the signal outcome set");
  std::vector<double> corrected(signal_counts.size());
  for (size_t q = 0; q < signal_counts.size(); ++q) {
    double background = 0.0;
    for (const auto& s : shifted_counts) background += s[q];
    corrected[q] = std::max(0.0, signal_counts[q] - background / (n_sources - 1));
  }
  return corrected;
}

std::vector<double> klyshko_normalize(const std::vector<double>& counts,
                                      const std::vector<Outcome>& outcomes,
                                      const std::vector<double>& output_efficiency,
                                      const std::vector<double>& source_weight) {
  if (counts.size() != outcomes.size())
    throw std::invalid_argument("counts and outcomes must align");
  for (double e : output_efficiency)
    if (!(e > 0.0) || e > 1.0)
      throw std::invalid_argument("output efficiencies must lie in (0, 1]");
  for (double w : source_weight)
    if (!(w > 0.0)) throw std::invalid_argument("source weights must be positive");

  std::vector<double> corrected(counts.size());
  double total = 0.0;
  for (size_t q = 0; q < counts.size(); ++q) {
    if (!(counts[q] >= 0.0)) throw std::invalid_argument("counts must be non-negative");
    double divisor = 1.0;
    for (int m : outcomes[q].output.modes) divisor *= output_efficiency.at(m);
    for (int m : outcomes[q].input.modes) divisor *= source_weight.at(m);
    corrected[q] = counts[q] / divisor;
    total += corrected[q];
  }
  if (!(total > 0.0)) throw std::invalid_argument("all corrected counts vanish");
  for (double& c : corrected) c /= total;
  return corrected;
}

std::vector<std::pair<long long, long long>> bin_relative_times(
    const std::vector<long long>& taus_ps, long long bin_ps, long long gate_ps) {
  if (bin_ps <= 0 || gate_ps <= 0)
    throw std::invalid_argument("histogram bin and gate must be positive");
  const long long edge = gate_ps / bin_ps * bin_ps;
  std::map<long long, long long> acc;
  for (long long c = -edge; c <= edge; c += bin_ps) acc[c] = 0;
  for (long long tau : taus_ps) {
    const long long idx =
        static_cast<long long>(std::floor((static_cast<double>(tau) + 0.5 * bin_ps) / bin_ps));
    const long long center = idx * bin_ps;
    auto it = acc.find(center);
    if (it != acc.end()) ++it->second;
  }
  return {acc.begin(), acc.end()};
}

void write_tau_histogram_csv(std::ostream& out,
                             const std::vector<std::pair<long long, long long>>& rows) {
  out << "tau_ps,count\n";
  for (const auto& [tau, count] : rows) out << tau << ',' << count << '\n';
}

void write_distribution_csv(std::ostream& out, const std::vector<Outcome>& outcomes,
                            const std::vector<double>& probability) {
  if (outcomes.size() != probability.size())
    throw std::invalid_argument("outcomes and probabilities must align");
  out << "input;output;probability\n";
  char buf[64];
  for (size_t q = 0; q < outcomes.size(); ++q) {
    for (int a = 0; a < outcomes[q].input.size(); ++a)
      out << (a ? "," : "") << outcomes[q].input.modes[a];
    out << ';';
    for (int a = 0; a < outcomes[q].output.size(); ++a)
      out << (a ? "," : "") << outcomes[q].output.modes[a];
    std::snprintf(buf, sizeof buf, "%.10g", probability[q]);
    out << ';' << buf << '\n';
  }
}

std::vector<TimeTagRecord> synthesize_delayed_pair_stream(const DelayedPairConfig& config) {
  if (config.n_pulses < 1 || config.rep_period_ps <= 0)
    throw std::invalid_argument("delayed-pair synthesis needs pulses and a positive period");
  if (!(config.emit_probability > 0.0) || config.emit_probability > 1.0)
    throw std::invalid_argument("emission probability must lie in (0, 1]");
  const Interferometer u = mzi(config.theta);
  const double pa0 = std::norm(u.m(0, 0));  // source A enters input 0
  const double pb0 = std::norm(u.m(0, 1));  // source B enters input 1

  std::mt19937_64 rng(config.seed);
  std::vector<TimeTagRecord> tags;
  for (int k = 0; k < config.n_pulses; ++k) {
    const long long t = k * config.rep_period_ps;
    const bool a = uniform01(rng) < config.emit_probability;
    const bool b = uniform01(rng) < config.emit_probability;
    bool hit0 = false, hit1 = false;
    if (a) {
      tags.push_back({2, t});
      (uniform01(rng) < pa0 ? hit0 : hit1) = true;
    }
    if (b) {
      tags.push_back({3, t});
      (uniform01(rng) < pb0 ? hit0 : hit1) = true;
    }
    if (hit0) tags.push_back({0, t});
    if (hit1) tags.push_back({1, t});
  }
  std::sort(tags.begin(), tags.end());
  return tags;
}

long long delayed_pair_events(const std::vector<TimeTagRecord>& records,
                              long long rep_period_ps, long long gate_ps) {
  std::vector<TimeTagRecord> merged =
      virtual_channel(records, {0, 4, rep_period_ps}, rep_period_ps, true);
  merged = virtual_channel(std::move(merged), {1, 5, rep_period_ps}, rep_period_ps, true);
  merged = virtual_channel(std::move(merged), {3, 6, rep_period_ps}, rep_period_ps, true);
  // herald A now, herald B one pulse earlier; the two photons exit opposite
  // ports in either time order
  const CoincidencePattern first{{2, 6, 0, 5}, gate_ps};
  const CoincidencePattern second{{2, 6, 4, 1}, gate_ps};
  return count_coincidences(merged, first).count + count_coincidences(merged, second).count;
}

}  // namespace trisim
