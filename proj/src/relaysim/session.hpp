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

#include "channel.hpp"
#include "mcpr.hpp"
#include "relay.hpp"
#include "rng.hpp"
#include "tdd.hpp"

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace relaysim {

/// How the two nodes are connected during one ranging procedure.
enum class LinkMode {
    Direct,         // no attacker
    Bidirectional,  // both directions through the relay
    Unidirectional, // A->B through the relay, B->A over the direct path
};

std::string_view to_string(LinkMode m);

/// Per-node frequency-dependent gain ripple of the transmit and receive
/// chains (dB per grid index). Empty vectors mean ideal hardware.
struct NodeHardware {
    std::vector<double> a_tx_db;
    std::vector<double> a_rx_db;
    std::vector<double> b_tx_db;
    std::vector<double> b_rx_db;

    static NodeHardware draw(std::size_t tones, double sigma_db, Rng& rng);
};

/// Fills the relay's per-path magnitude response: forward hotter by
/// `offset_db`, both paths with independent ripple of `sigma_db`.
void draw_relay_paths(RelayConfig& relay, std::size_t tones, double offset_db, double sigma_db, Rng& rng);

/// Transmissions surrounding one sweep, as seen at the primary relay antenna.
struct TimelinePlan {
    PulsePattern pattern;
    double sweep_start_us = 12'000.0;
    double pattern_lead_us = 400.0;
    std::vector<double> background_us{1'000.0, 4'500.0}; // unrelated A packets
    double background_len_us = 376.0;
    std::size_t fake_pulses = 0;
    std::size_t fake_after_tone = 20;
    double fake_pulse_us = 100.0;
    bool miss_pattern = false;
    std::optional<double> interferer_dbm; // burst over [0, 2000) µs
};

struct SessionSetup {
    ToneSweep sweep;
    ChannelModelSpec channel;
    Geometry geometry;
    LinkMode mode = LinkMode::Direct;
    bool a_wired = false; // node A cabled to the primary relay port
    RelayConfig relay;
    ManipulationProgram program;
    bool equalize = false; // apply program.beta_db on the attenuator path
    SweepNoise noise;
    NodeHardware nodes;
    double a_tx_power_dbm = 0.0;
    double a_wired_power_dbm = -30.0;
    TimelinePlan plan;
};

/// One-way electrical path length from A to B (or back), including the
/// relay's delay expressed as c0 T.
double effective_path_length(const SessionSetup& setup, Direction direction);

/// Believed distance that cancels the relay bias: half the round-trip length.
double self_compensated_distance(const SessionSetup& setup);

/// A's power at the primary antenna.
double a_power_at_primary(const SessionSetup& setup);

struct ToneSlot {
    std::size_t a_event = 0;
    std::size_t b_event = 0;
};

struct SessionEvents {
    std::vector<TxEvent> events;
    std::vector<ToneSlot> tones; // by transmit position
    double pattern_start_us = 0.0;
};

SessionEvents build_events(const SessionSetup& setup);

struct SessionResult {
    SweepObservation observation;
    DistanceEstimate estimate;
    bool failed = false; // a tone was dropped by the relay switch
    bool locked = false;
    std::size_t lost_tones = 0;
    std::size_t tone_edges = 0;
    std::optional<Timeline> timeline;
};

SessionResult run_session(const SessionSetup& setup, Rng& rng);

} // namespace relaysim
