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

#ifndef TRISIM_TIMETAGS_HPP
#define TRISIM_TIMETAGS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "trisim/circuits.hpp"

namespace trisim {

// Timestamps are integer picoseconds: all jitter and sampling noise is
// injected upstream by the simulator, so analysis of a saved file is exactly
// reproducible.
struct TimeTagRecord {
  int channel = 0;
  long long timestamp_ps = 0;

  friend bool operator<(const TimeTagRecord& a, const TimeTagRecord& b) {
    return a.timestamp_ps != b.timestamp_ps ? a.timestamp_ps < b.timestamp_ps
                                            : a.channel < b.channel;
  }
  friend bool operator==(const TimeTagRecord& a, const TimeTagRecord& b) {
    return a.channel == b.channel && a.timestamp_ps == b.timestamp_ps;
  }
};

// A software copy of one channel, shifted later by a whole number of laser
// periods so photons born in different pulses line up for analysis.
struct VirtualChannelSpec {
  int source_channel = 0;
  int virtual_channel = 0;  // channel id given to the copies
  long long delay_ps = 0;

  void validate() const;  // delay >= 0, distinct ids
};

// A coincidence: one tag on every listed channel inside the window.
struct CoincidencePattern {
  std::vector<int> channels;
  long long window_ps = 1000;

  void validate() const;  // window > 0, channels distinct and non-empty
};

// Default gate around a pulse for coarse coincidence finding before the fine
// relative-time analysis; half the 2 ns repetition period.
inline constexpr long long kDefaultGatePs = 1000;

// Lines "channel,timestamp_ps"; '#' starts a comment. Each channel's tags
// must appear in strictly increasing time order (hardware streams are);
// violations and malformed lines are reported with their line number. The
// returned list is globally sorted, ties broken by channel id.
std::vector<TimeTagRecord> parse_timetags(std::istream& in);
std::vector<TimeTagRecord> parse_timetags(const std::string& path);

void write_timetags(std::ostream& out, const std::vector<TimeTagRecord>& records);

// Appends a delayed copy of the source channel and returns the merged sorted
// stream. When rep_period_ps > 0 the delay must be a multiple of it: a
// violation throws if strict, otherwise warns on stderr and proceeds.
std::vector<TimeTagRecord> virtual_channel(std::vector<TimeTagRecord> records,
                                           const VirtualChannelSpec& spec,
                                           long long rep_period_ps = 0, bool strict = false);

struct CoincidenceEvents {
  long long count = 0;
  // Per event, arrival time of channels[j] minus channels[0], j >= 1.
  std::vector<std::vector<long long>> relative_times_ps;
  // Per event, absolute arrival time of the channels[0] tag.
  std::vector<long long> anchor_times_ps;
};

// Single-pass greedy scan, earliest tag first: whenever every required
// channel holds a pending tag, the oldest tags either form an event (span
// within the window, all consumed) or the oldest of them is dropped as
// unmatchable. Deterministic and equivalent to streaming hardware counters;
// no globally optimal assignment is attempted.
CoincidenceEvents count_coincidences(const std::vector<TimeTagRecord>& records,
                                     const CoincidencePattern& pattern);

// Double-emission correction: the delayed-herald patterns each measure the
// accidental rate, and their total counts it n_sources - 1 times over.
// corrected = signal - sum(shifted) / (n_sources - 1), clamped at zero.
std::vector<double> subtract_background(const std::vector<double>& signal_counts,
                                        const std::vector<std::vector<double>>& shifted_counts,
                                        int n_sources);

// One observed outcome: which sources fired and where the photons landed.
struct Outcome {
  ModePattern input;
  ModePattern output;
};

// Divides each count by the product of its involved output efficiencies and
// source weights, then renormalizes to a distribution. Efficiencies must lie
// in (0, 1], weights must be positive.
std::vector<double> klyshko_normalize(const std::vector<double>& counts,
                                      const std::vector<Outcome>& outcomes,
                                      const std::vector<double>& output_efficiency,
                                      const std::vector<double>& source_weight);

// Relative-time histogram rows for "tau_ps,count" output: taus binned to
// bin_ps-wide bins centered on multiples of bin_ps, |tau| <= gate.
std::vector<std::pair<long long, long long>> bin_relative_times(
    const std::vector<long long>& taus_ps, long long bin_ps, long long gate_ps);

void write_tau_histogram_csv(std::ostream& out,
                             const std::vector<std::pair<long long, long long>>& rows);
void write_distribution_csv(std::ostream& out, const std::vector<Outcome>& outcomes,
                            const std::vector<double>& probability);

// Synthetic tag stream for the delayed-pair analysis: two heralded sources
// feed an MZI, every photon routed classically by the single-photon
// marginals (photons from different pulses never interfere). Channels:
// 0, 1 MZI outputs; 2, 3 heralds of source A (input 0) and B (input 1).
struct DelayedPairConfig {
  double theta = 0.0;  // MZI internal phase
  long long rep_period_ps = 2000;
  int n_pulses = 100000;
  double emit_probability = 0.05;  // per source per pulse
  std::uint64_t seed = 1;
};

std::vector<TimeTagRecord> synthesize_delayed_pair_stream(const DelayedPairConfig& config);

// Counts the two cross-pulse herald-tagged coincidence variants of the
// delayed-pair scheme at one phase; their sum traces the distinguishable
// fringe (3 + cos 2*theta)/4 up to normalization.
long long delayed_pair_events(const std::vector<TimeTagRecord>& records,
                              long long rep_period_ps, long long gate_ps = kDefaultGatePs);

}  // namespace trisim

#endif
