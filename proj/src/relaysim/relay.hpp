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

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace relaysim {

enum class Direction { AtoB, BtoA };

std::string_view to_string(Direction d);

enum class FrequencyInference { CountBased, Oracle };

std::string_view to_string(FrequencyInference f);
FrequencyInference inference_from_string(std::string_view s);

struct AttenuatorSpec {
    double step_db = 0.5;
    double range_db = 31.5;
};

/// Hardware model of the amplify-and-forward relay.
struct RelayConfig {
    double gain_ab_db = 75.0;
    double gain_ba_db = 75.0;
    double delay_ns = 30.0;       // per pass
    double span_m = 0.0;          // extra propagation length between the stations
    double link_loss_db = 0.0;    // cable/feed loss of the inter-station link
    double threshold_dbm = -40.0; // power detector
    double hysteresis_db = 3.0;   // release threshold = threshold - hysteresis
    double reaction_us = 0.35;
    int phase_bits = 6;
    AttenuatorSpec attenuator;
    Direction phase_path = Direction::BtoA;
    Direction attenuator_path = Direction::AtoB;
    // Per-grid-index magnitude response of each relay path (dB); empty = flat.
    std::vector<double> path_response_ab_db;
    std::vector<double> path_response_ba_db;

    void validate() const;
};

/// Distance manipulation program run by the attacker's microcontroller.
struct ManipulationProgram {
    bool enabled = false;
    double d_set_m = 0.0;
    double believed_d_m = 0.0;
    double f_step_hz = 1e6;
    FrequencyInference inference = FrequencyInference::CountBased;
    std::vector<double> beta_db; // per grid index; empty = no equalization
    double phase_state = 0.0;    // unquantized φ_t in [0, 2π)

    double slope() const;
};

struct RelayState {
    Direction direction = Direction::BtoA;
    double last_change_us = 0.0;
    std::size_t tone_counter = 0;
    std::size_t lost_tones = 0;
};

/// 4π f_step (d_set - d) / c0, wrapped to [0, 2π).
double required_phase_slope(double d_set_m, double d_m, double f_step_hz);

/// φ_t = φ_{t-1} + Δφ mod 2π. Returns the new (unquantized) state.
double advance_phase(ManipulationProgram& program);

/// Nearest code of a `bits`-bit shifter spanning 360°, as a phase in [0, 2π).
double quantize_phase(double phase_rad, int bits);

/// Which carrier the relay is forwarding right now.
struct TonePass {
    double f_hz = 0.0;                         // true carrier
    std::size_t grid_index = 0;                // true grid index
    std::optional<std::size_t> inferred_index; // attacker's belief, if any
};

/// Gain seen by a tone crossing the relay in `direction`. Returns nothing
/// (and counts a lost tone) when the switch points the other way.
std::optional<Gain> forward_tone(Direction direction, const Gain& input, const RelayConfig& cfg,
                                 const ManipulationProgram& program, RelayState& state,
                                 const TonePass& tone);

/// Count-based: f_start + counter f_step (throws "sweep overrun" past N).
/// Oracle: the true carrier.
double infer_tone_frequency(const ManipulationProgram& program, const ToneSweep& sweep,
                            std::size_t counter, double true_f_hz);

struct EqualizationProfile {
    std::vector<double> beta_db;
    std::vector<bool> out_of_range;
};

/// Quantized attenuation that levels the forward relay path to the reverse one.
EqualizationProfile equalization_profile(const std::vector<double>& fwd_magnitude,
                                         const std::vector<double>& rev_magnitude,
                                         const AttenuatorSpec& attenuator);

} // namespace relaysim
