// SPDX-License-Identifier: Apache-2.0
//
// relaysim: relay attack simulator for multi-carrier phase-based ranging
// Copyright (C) 2026 The relaysim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "relay.hpp"

#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace relaysim {

enum class Source { A, B, Interferer };

std::string_view to_string(Source s);

/// One transmission as seen at the relay's primary antenna.
struct TxEvent {
    Source source = Source::A;
    double start_us = 0.0;
    double duration_us = 0.0;
    double freq_hz = 0.0;
    double power_dbm = -200.0;

    double end_us() const { return start_us + duration_us; }
};

enum class Disposition { Forwarded, Clipped, Ignored, Lost };

std::string_view to_string(Disposition d);

struct EventOutcome {
    Disposition disposition = Disposition::Ignored;
    double lost_fraction = 0.0; // leading part cut off while the switch caught up
};

struct TraceSample {
    double time_us = 0.0;
    bool detector = false;
    Direction direction = Direction::BtoA;
};

/// Piecewise-constant record of comparator output and switch position.
/// Each sample holds the state from its time until the next sample.
struct DetectorTrace {
    std::vector<TraceSample> samples;
    double reaction_us = 0.0;

    bool empty() const { return samples.empty(); }
    Direction direction_at(double t_us) const;
    bool detector_at(double t_us) const;
    std::vector<double> rising_edges() const;
};

struct Timeline {
    DetectorTrace trace;
    std::vector<EventOutcome> outcomes; // parallel to the input events
};

Timeline simulate_timeline(std::span<const TxEvent> events, const RelayConfig& cfg);

/// Detector pulse widths and the gaps between them that precede a sweep.
struct PulsePattern {
    std::vector<double> pulses_us{80.0, 80.0, 80.0};
    std::vector<double> gaps_us{1170.0, 1170.0}; // pulses_us.size() - 1 entries
    double tolerance = 0.1;      // relative, per pulse and gap

    void validate() const;
    double length_us() const;
};

struct SweepLock {
    double start_us = 0.0;       // rising edge of the first pattern pulse
    double pattern_end_us = 0.0; // falling edge of the last one
};

SweepLock detect_sweep_start(const DetectorTrace& trace, const PulsePattern& pattern);

/// Rising edges after the pattern; the tone counter advances on each.
std::vector<double> tone_edges(const DetectorTrace& trace, const SweepLock& lock);

/// time_us,detector,direction
void write_trace_csv(const DetectorTrace& trace, std::ostream& out);

} // namespace relaysim
