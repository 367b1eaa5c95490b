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

#include "relay.hpp"

#include "error.hpp"
#include "units.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace relaysim {

std::string_view to_string(Direction d)
{
    return d == Direction::AtoB ? "AB" : "BA";
}

std::string_view to_string(FrequencyInference f)
{
    return f == FrequencyInference::CountBased ? "count" : "oracle";
}

FrequencyInference inference_from_string(std::string_view s)
{
    if (s == "count")
        return FrequencyInference::CountBased;
    if (s == "oracle")
        return FrequencyInference::Oracle;
    fail(ErrorKind::Config, "unknown frequency inference mode '" + std::string(s) + "'");
}

void RelayConfig::validate() const
{
    if (gain_ab_db > 90.0 || gain_ba_db > 90.0)
        fail(ErrorKind::Config, "relay gain must not exceed 90 dB");
    if (phase_bits < 1 || phase_bits > 12)
        fail(ErrorKind::Config, "phase shifter resolution must be 1..12 bits");
    if (reaction_us < 0.0 || delay_ns < 0.0 || span_m < 0.0)
        fail(ErrorKind::Config, "relay delays must be non-negative");
    if (hysteresis_db < 0.0)
        fail(ErrorKind::Config, "detector hysteresis must be non-negative");
    if (!(attenuator.step_db > 0.0) || attenuator.range_db < 0.0)
        fail(ErrorKind::Config, "attenuator needs a positive step and non-negative range");
}

double ManipulationProgram::slope() const
{
    return required_phase_slope(d_set_m, believed_d_m, f_step_hz);
}

double required_phase_slope(double d_set_m, double d_m, double f_step_hz)
{
    if (!(f_step_hz > 0.0))
        fail(ErrorKind::InvalidArgument, "frequency step must be positive");
    return wrap_two_pi(4.0 * std::numbers::pi * f_step_hz * (d_set_m - d_m) / kSpeedOfLight);
}

double advance_phase(ManipulationProgram& program)
{
    program.phase_state = wrap_two_pi(program.phase_state + program.slope());
    return program.phase_state;
}

double quantize_phase(double phase_rad, int bits)
{
    const double levels = std::ldexp(1.0, bits);
    const double lsb = kTwoPi / levels;
    const double code = std::fmod(std::round(wrap_two_pi(phase_rad) / lsb), levels);
    return code * lsb;
}

std::optional<Gain> forward_tone(Direction direction, const Gain& input, const RelayConfig& cfg,
                                 const ManipulationProgram& program, RelayState& state,
                                 const TonePass& tone)
{
    if (direction != state.direction) {
        ++state.lost_tones;
        return std::nullopt;
    }

    const bool ab = direction == Direction::AtoB;
    double gain_db = (ab ? cfg.gain_ab_db : cfg.gain_ba_db) - cfg.link_loss_db;
    const auto& response = ab ? cfg.path_response_ab_db : cfg.path_response_ba_db;
    if (!response.empty())
        gain_db += response.at(tone.grid_index);

    // hardware delay plus the inter-station span
    const double cycles = tone.f_hz * (cfg.delay_ns * 1e-9 + cfg.span_m / kSpeedOfLight);
    double phase = kTwoPi * (cycles - std::floor(cycles));

    if (program.enabled && direction == cfg.phase_path)
        phase += quantize_phase(program.phase_state, cfg.phase_bits);
    if (!program.beta_db.empty() && direction == cfg.attenuator_path && tone.inferred_index
        && *tone.inferred_index < program.beta_db.size())
        gain_db -= program.beta_db[*tone.inferred_index];

    return input * Gain{db_to_amplitude(gain_db), wrap_two_pi(phase)};
}

double infer_tone_frequency(const ManipulationProgram& program, const ToneSweep& sweep,
                            std::size_t counter, double true_f_hz)
{
    if (program.inference == FrequencyInference::Oracle)
        return true_f_hz;
    if (counter >= sweep.count)
        fail(ErrorKind::Simulation, "sweep overrun");
    return sweep.frequency(counter);
}

EqualizationProfile equalization_profile(const std::vector<double>& fwd_magnitude,
                                         const std::vector<double>& rev_magnitude,
                                         const AttenuatorSpec& attenuator)
{
    if (fwd_magnitude.size() != rev_magnitude.size())
        fail(ErrorKind::InvalidArgument, "relay path responses differ in length");
    if (!(attenuator.step_db > 0.0))
        fail(ErrorKind::InvalidArgument, "attenuator step must be positive");

    EqualizationProfile p;
    p.beta_db.resize(fwd_magnitude.size());
    p.out_of_range.resize(fwd_magnitude.size());
    for (std::size_t i = 0; i < fwd_magnitude.size(); ++i) {
        const double needed = amplitude_to_db(fwd_magnitude[i] / rev_magnitude[i]);
        const double quantized = std::round(needed / attenuator.step_db) * attenuator.step_db;
        p.out_of_range[i] = quantized < 0.0 || quantized > attenuator.range_db;
        p.beta_db[i] = std::clamp(quantized, 0.0, attenuator.range_db);
    }
    return p;
}

} // namespace relaysim
