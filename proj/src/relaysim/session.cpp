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

#include "session.hpp"

#include "error.hpp"
#include "units.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace relaysim {

std::string_view to_string(LinkMode m)
{
    switch (m) {
    case LinkMode::Direct: return "direct";
    case LinkMode::Bidirectional: return "bidirectional";
    case LinkMode::Unidirectional: return "unidirectional";
    }
    return "?";
}

NodeHardware NodeHardware::draw(std::size_t tones, double sigma_db, Rng& rng)
{
    NodeHardware hw;
    std::normal_distribution<double> unit(0.0, 1.0);
    for (auto* v : {&hw.a_tx_db, &hw.a_rx_db, &hw.b_tx_db, &hw.b_rx_db}) {
        v->resize(tones);
        for (double& x : *v)
            x = sigma_db * unit(rng);
    }
    return hw;
}

void draw_relay_paths(RelayConfig& relay, std::size_t tones, double offset_db, double sigma_db, Rng& rng)
{
    std::normal_distribution<double> unit(0.0, 1.0);
    relay.path_response_ab_db.resize(tones);
    relay.path_response_ba_db.resize(tones);
    for (std::size_t i = 0; i < tones; ++i) {
        relay.path_response_ab_db[i] = offset_db + sigma_db * unit(rng);
        relay.path_response_ba_db[i] = sigma_db * unit(rng);
    }
}

namespace {

double relayed_length(const SessionSetup& s)
{
    const Geometry& g = s.geometry;
    const double leg_a = s.a_wired ? 0.0 : g.distance(Antenna::NodeA, Antenna::RelayPrimary);
    const double leg_b = g.distance(Antenna::RelaySecondary, Antenna::NodeB);
    return leg_a + s.relay.span_m + kSpeedOfLight * s.relay.delay_ns * 1e-9 + leg_b;
}

double db_at(const std::vector<double>& v, std::size_t i)
{
    return v.empty() ? 0.0 : v.at(i);
}

} // namespace

double effective_path_length(const SessionSetup& setup, Direction direction)
{
    switch (setup.mode) {
    case LinkMode::Direct:
        return setup.geometry.distance(Antenna::NodeA, Antenna::NodeB);
    case LinkMode::Bidirectional:
        return relayed_length(setup);
    case LinkMode::Unidirectional:
        return direction == Direction::AtoB ? relayed_length(setup)
                                            : setup.geometry.distance(Antenna::NodeA, Antenna::NodeB);
    }
    return 0.0;
}

double self_compensated_distance(const SessionSetup& setup)
{
    return 0.5 * (effective_path_length(setup, Direction::AtoB)
                  + effective_path_length(setup, Direction::BtoA));
}

double a_power_at_primary(const SessionSetup& setup)
{
    if (setup.a_wired)
        return setup.a_wired_power_dbm;
    const double d = setup.geometry.distance(Antenna::NodeA, Antenna::RelayPrimary);
    return setup.a_tx_power_dbm
           + amplitude_to_db(path_gain(setup.channel, d, setup.sweep.f_start_hz).magnitude);
}

SessionEvents build_events(const SessionSetup& setup)
{
    const ToneSweep& sw = setup.sweep;
    const TimelinePlan& plan = setup.plan;
    plan.pattern.validate();
    const double a_dbm = a_power_at_primary(setup);
    constexpr double kNotSensed = -200.0; // B is never seen by the primary detector

    struct Tagged {
        TxEvent event;
        int kind;             // 0 other, 1 tone A, 2 tone B
        std::size_t position; // transmit position for tone events
    };
    std::vector<Tagged> tagged;

    for (double t : plan.background_us)
        tagged.push_back({{Source::A, t, plan.background_len_us, sw.f_start_hz, a_dbm}, 0, 0});
    if (plan.interferer_dbm)
        tagged.push_back({{Source::Interferer, 0.0, 2'000.0, sw.f_start_hz, *plan.interferer_dbm}, 0, 0});

    SessionEvents out;
    out.pattern_start_us = plan.sweep_start_us - plan.pattern_lead_us - plan.pattern.length_us();
    double t = out.pattern_start_us;
    for (std::size_t i = 0; i < plan.pattern.pulses_us.size(); ++i) {
        const double len = plan.pattern.pulses_us[i];
        const double power = (plan.miss_pattern && i == 0) ? setup.relay.threshold_dbm - 20.0 : a_dbm;
        tagged.push_back({{Source::A, t, len, sw.f_start_hz, power}, 0, 0});
        // the peer's reply, ahead of the next pattern pulse
        tagged.push_back({{Source::B, t + len + sw.gap_us, len, sw.f_start_hz, kNotSensed}, 0, 0});
        if (i + 1 < plan.pattern.pulses_us.size())
            t += len + plan.pattern.gaps_us[i];
    }

    const double slot = 2.0 * (sw.tone_us + sw.gap_us);
    const double fake_slot = plan.fake_pulse_us + sw.gap_us;
    for (std::size_t p = 0; p < sw.count; ++p) {
        const double f = sw.frequency(sw.grid_index_at(p));
        double shift = 0.0;
        if (plan.fake_pulses > 0 && p > plan.fake_after_tone)
            shift = static_cast<double>(plan.fake_pulses) * fake_slot;
        const double a_start = plan.sweep_start_us + static_cast<double>(p) * slot + shift;
        const double b_start = a_start + sw.tone_us + sw.gap_us;
        tagged.push_back({{Source::A, a_start, sw.tone_us, f, a_dbm}, 1, p});
        tagged.push_back({{Source::B, b_start, sw.tone_us, f, kNotSensed}, 2, p});
        if (plan.fake_pulses > 0 && p == plan.fake_after_tone) {
            double tf = b_start + sw.tone_us + sw.gap_us;
            for (std::size_t k = 0; k < plan.fake_pulses; ++k, tf += fake_slot)
                tagged.push_back({{Source::A, tf, plan.fake_pulse_us, sw.f_start_hz, a_dbm}, 0, 0});
        }
    }

    std::stable_sort(tagged.begin(), tagged.end(),
                     [](const Tagged& a, const Tagged& b) { return a.event.start_us < b.event.start_us; });
    out.tones.resize(sw.count);
    out.events.reserve(tagged.size());
    for (std::size_t i = 0; i < tagged.size(); ++i) {
        out.events.push_back(tagged[i].event);
        if (tagged[i].kind == 1)
            out.tones[tagged[i].position].a_event = i;
        else if (tagged[i].kind == 2)
            out.tones[tagged[i].position].b_event = i;
    }
    return out;
}

namespace {

ChannelResponse empty_response(const ToneSweep& sw, Antenna from, Antenna to)
{
    ChannelResponse r;
    r.from = from;
    r.to = to;
    r.freqs_hz = sw.frequencies();
    r.magnitude.assign(sw.count, 0.0);
    r.phase_rad.assign(sw.count, 0.0);
    return r;
}

void store(ChannelResponse& r, std::size_t i, const Gain& g, double ripple_db)
{
    r.magnitude[i] = g.magnitude * db_to_amplitude(ripple_db);
    r.phase_rad[i] = g.phase;
}

double midpoint(const TxEvent& e)
{
    return e.start_us + 0.5 * e.duration_us;
}

} // namespace

SessionResult run_session(const SessionSetup& setup, Rng& rng)
{
    const ToneSweep& sw = setup.sweep;
    sw.validate();
    setup.channel.validate();

    const Geometry& g = setup.geometry;
    ChannelResponse fwd = empty_response(sw, Antenna::NodeA, Antenna::NodeB);
    ChannelResponse rev = empty_response(sw, Antenna::NodeB, Antenna::NodeA);
    const NodeHardware& hw = setup.nodes;

    SessionResult result;
    if (setup.mode == LinkMode::Direct) {
        const double d = g.distance(Antenna::NodeA, Antenna::NodeB);
        for (std::size_t i = 0; i < sw.count; ++i) {
            const Gain h = path_gain(setup.channel, d, sw.frequency(i));
            store(fwd, i, h, db_at(hw.a_tx_db, i) + db_at(hw.b_rx_db, i));
            store(rev, i, h, db_at(hw.b_tx_db, i) + db_at(hw.a_rx_db, i));
        }
    } else {
        setup.relay.validate();
        const SessionEvents ev = build_events(setup);
        Timeline tl = simulate_timeline(ev.events, setup.relay);

        std::vector<double> edges;
        try {
            edges = tone_edges(tl.trace, detect_sweep_start(tl.trace, setup.plan.pattern));
            result.locked = true;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Simulation)
                throw;
        }
        result.tone_edges = edges.size();

        // φ_t = φ_{t-1} + Δφ on every detector edge; entry k is the state after k edges.
        ManipulationProgram counting = setup.program;
        counting.phase_state = 0.0;
        std::vector<double> phase_after{0.0};
        for (std::size_t k = 1; k < edges.size(); ++k)
            phase_after.push_back(advance_phase(counting));

        const double slope = setup.program.enabled ? setup.program.slope() : 0.0;
        const double d_ab = setup.mode == LinkMode::Unidirectional
                                ? g.distance(Antenna::NodeA, Antenna::NodeB)
                                : 0.0;
        const double leg_a = setup.a_wired ? 0.0 : g.distance(Antenna::NodeA, Antenna::RelayPrimary);
        const double leg_b = g.distance(Antenna::RelaySecondary, Antenna::NodeB);

        for (std::size_t p = 0; p < sw.count; ++p) {
            const std::size_t j = sw.grid_index_at(p);
            const double f = sw.frequency(j);
            const TxEvent& a_ev = ev.events[ev.tones[p].a_event];
            const TxEvent& b_ev = ev.events[ev.tones[p].b_event];

            // Tone counter as seen when B answers: edges since the lock, zero-based.
            const auto seen = static_cast<std::size_t>(
                std::upper_bound(edges.begin(), edges.end(), b_ev.start_us) - edges.begin());

            ManipulationProgram prog = setup.program;
            prog.phase_state = 0.0;
            TonePass pass{f, j, std::nullopt};
            const bool active = setup.program.enabled && result.locked && seen > 0;
            if (active) {
                const std::size_t counter = seen - 1;
                try {
                    const double f_inf = infer_tone_frequency(setup.program, sw, counter, f);
                    pass.inferred_index = static_cast<std::size_t>(
                        std::llround((f_inf - sw.f_start_hz) / sw.f_step_hz));
                } catch (const Error& e) {
                    if (e.kind() != ErrorKind::Simulation)
                        throw;
                }
                prog.phase_state = setup.program.inference == FrequencyInference::Oracle
                                       ? wrap_two_pi(static_cast<double>(j) * slope)
                                       : phase_after[counter];
            } else {
                prog.enabled = false;
            }
            if (!setup.equalize || !active)
                prog.beta_db.clear();

            const Gain a_leg = setup.a_wired ? Gain{} : path_gain(setup.channel, leg_a, f);
            const Gain b_leg = path_gain(setup.channel, leg_b, f);

            RelayState state;
            state.direction = tl.trace.direction_at(midpoint(a_ev));
            const std::optional<Gain> out_ab = forward_tone(Direction::AtoB, a_leg, setup.relay, prog, state, pass);

            std::optional<Gain> out_ba;
            if (setup.mode == LinkMode::Unidirectional) {
                out_ba = path_gain(setup.channel, d_ab, f);
            } else {
                state.direction = tl.trace.direction_at(midpoint(b_ev));
                const std::optional<Gain> relayed = forward_tone(Direction::BtoA, b_leg, setup.relay, prog, state, pass);
                if (relayed)
                    out_ba = *relayed * a_leg;
            }
            result.lost_tones += state.lost_tones;

            if (out_ab)
                store(fwd, j, *out_ab * b_leg, db_at(hw.a_tx_db, j) + db_at(hw.b_rx_db, j));
            if (out_ba)
                store(rev, j, *out_ba, db_at(hw.b_tx_db, j) + db_at(hw.a_rx_db, j));
        }
        result.timeline = std::move(tl);
    }

    if (result.lost_tones > 0) {
        // Victims abort a sweep with missing tones; keep the draw count stable.
        for (auto* r : {&fwd, &rev})
            for (double& m : r->magnitude)
                if (m == 0.0)
                    m = std::numeric_limits<double>::min();
        result.failed = true;
    }

    result.observation = run_sweep(sw, fwd, rev, setup.noise, rng);
    if (result.failed) {
        result.estimate.mean_m = std::numeric_limits<double>::quiet_NaN();
        result.estimate.per_pair_m.assign(sw.count - 1, std::numeric_limits<double>::quiet_NaN());
    } else {
        result.estimate = estimate_distance(result.observation, sw);
    }
    return result;
}

} // namespace relaysim
