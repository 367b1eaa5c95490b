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

#include "tdd.hpp"

#include "csv.hpp"
#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace relaysim {

std::string_view to_string(Source s)
{
    switch (s) {
    case Source::A: return "A";
    case Source::B: return "B";
    case Source::Interferer: return "interferer";
    }
    return "?";
}

std::string_view to_string(Disposition d)
{
    switch (d) {
    case Disposition::Forwarded: return "forwarded";
    case Disposition::Clipped: return "clipped";
    case Disposition::Ignored: return "ignored";
    case Disposition::Lost: return "lost";
    }
    return "?";
}

namespace {

const TraceSample* sample_at(const DetectorTrace& trace, double t_us)
{
    auto it = std::upper_bound(trace.samples.begin(), trace.samples.end(), t_us,
                               [](double t, const TraceSample& s) { return t < s.time_us; });
    if (it == trace.samples.begin())
        return nullptr;
    return &*std::prev(it);
}

struct Interval {
    double begin;
    double end;
};

} // namespace

Direction DetectorTrace::direction_at(double t_us) const
{
    const TraceSample* s = sample_at(*this, t_us);
    return s ? s->direction : Direction::BtoA;
}

bool DetectorTrace::detector_at(double t_us) const
{
    const TraceSample* s = sample_at(*this, t_us);
    return s && s->detector;
}

std::vector<double> DetectorTrace::rising_edges() const
{
    std::vector<double> edges;
    bool prev = false;
    for (const TraceSample& s : samples) {
        if (s.detector && !prev)
            edges.push_back(s.time_us);
        prev = s.detector;
    }
    return edges;
}

Timeline simulate_timeline(std::span<const TxEvent> events, const RelayConfig& cfg)
{
    cfg.validate();
    for (std::size_t i = 0; i < events.size(); ++i) {
        if (!(events[i].duration_us > 0.0))
            fail(ErrorKind::InvalidArgument, "transmission duration must be positive");
        if (i > 0 && events[i].start_us < events[i - 1].start_us)
            fail(ErrorKind::InvalidArgument, "events must be sorted by start time");
    }
    for (std::size_t i = 0; i < events.size(); ++i)
        for (std::size_t j = i + 1; j < events.size() && events[j].start_us < events[i].end_us(); ++j)
            if (events[j].source == events[i].source)
                fail(ErrorKind::InvalidArgument, "overlapping transmissions from one source");

    Timeline tl;
    tl.trace.reaction_us = cfg.reaction_us;
    tl.outcomes.resize(events.size());
    if (events.empty())
        return tl;

    // Comparator: evaluate at every start/end instant. Ends are applied
    // before starts at the same instant so back-to-back pulses stay separate.
    std::vector<double> instants;
    instants.reserve(events.size() * 2);
    for (const TxEvent& e : events) {
        instants.push_back(e.start_us);
        instants.push_back(e.end_us());
    }
    std::sort(instants.begin(), instants.end());
    instants.erase(std::unique(instants.begin(), instants.end()), instants.end());

    const double release = cfg.threshold_dbm - cfg.hysteresis_db;
    std::vector<Interval> high; // comparator-high intervals
    bool detector = false;
    double rise = 0.0;
    for (double t : instants) {
        double strongest = -INFINITY;
        for (const TxEvent& e : events) {
            if (e.start_us > t)
                break;
            if (e.end_us() > t)
                strongest = std::max(strongest, e.power_dbm);
        }
        const bool next = detector ? strongest >= release : strongest >= cfg.threshold_dbm;
        if (next && !detector) {
            rise = t;
        } else if (!next && detector) {
            high.push_back({rise, t});
        }
        detector = next;
    }
    if (detector)
        high.push_back({rise, INFINITY});

    // Samples: comparator edges and the switch edges lagging them by the reaction delay.
    struct Change {
        double t;
        int kind; // 0 detector off, 1 detector on, 2 switch to BA, 3 switch to AB
    };
    std::vector<Change> changes;
    for (const Interval& iv : high) {
        changes.push_back({iv.begin, 1});
        changes.push_back({iv.begin + cfg.reaction_us, 3});
        if (std::isfinite(iv.end)) {
            changes.push_back({iv.end, 0});
            changes.push_back({iv.end + cfg.reaction_us, 2});
        }
    }
    std::stable_sort(changes.begin(), changes.end(),
                     [](const Change& a, const Change& b) { return a.t < b.t; });

    TraceSample state{std::min(0.0, events.front().start_us), false, Direction::BtoA};
    tl.trace.samples.push_back(state);
    for (const Change& c : changes) {
        switch (c.kind) {
        case 0: state.detector = false; break;
        case 1: state.detector = true; break;
        case 2: state.direction = Direction::BtoA; break;
        case 3: state.direction = Direction::AtoB; break;
        }
        state.time_us = c.t;
        if (tl.trace.samples.back().time_us == c.t)
            tl.trace.samples.back() = state;
        else
            tl.trace.samples.push_back(state);
    }

    // Direction A->B windows: [rise + reaction, fall + reaction).
    std::vector<Interval> ab;
    for (const Interval& iv : high)
        ab.push_back({iv.begin + cfg.reaction_us, iv.end + cfg.reaction_us});

    for (std::size_t i = 0; i < events.size(); ++i) {
        const TxEvent& e = events[i];
        double overlap_ab = 0.0;
        for (const Interval& iv : ab) {
            const double b = std::max(iv.begin, e.start_us);
            const double en = std::min(iv.end, e.end_us());
            if (en > b)
                overlap_ab += en - b;
        }
        const bool wants_ab = e.source != Source::B;
        const double covered = wants_ab ? overlap_ab : e.duration_us - overlap_ab;
        const double fraction = std::clamp(covered / e.duration_us, 0.0, 1.0);

        EventOutcome& out = tl.outcomes[i];
        if (fraction >= 1.0 - 1e-12) {
            out = {Disposition::Forwarded, 0.0};
        } else if (fraction > 0.0) {
            out = {Disposition::Clipped, 1.0 - fraction};
        } else if (wants_ab && e.power_dbm < cfg.threshold_dbm) {
            out = {Disposition::Ignored, 1.0};
        } else {
            out = {Disposition::Lost, 1.0};
        }
    }
    return tl;
}

void PulsePattern::validate() const
{
    if (pulses_us.empty())
        fail(ErrorKind::Config, "sweep-start pattern needs at least one pulse");
    if (gaps_us.size() + 1 != pulses_us.size())
        fail(ErrorKind::Config, "sweep-start pattern needs one gap between each pair of pulses");
    if (tolerance < 0.0)
        fail(ErrorKind::Config, "pattern tolerance must be non-negative");
}

double PulsePattern::length_us() const
{
    double t = 0.0;
    for (double p : pulses_us)
        t += p;
    for (double g : gaps_us)
        t += g;
    return t;
}

namespace {

std::vector<Interval> detector_pulses(const DetectorTrace& trace)
{
    std::vector<Interval> pulses;
    bool prev = false;
    double rise = 0.0;
    for (const TraceSample& s : trace.samples) {
        if (s.detector && !prev)
            rise = s.time_us;
        else if (!s.detector && prev)
            pulses.push_back({rise, s.time_us});
        prev = s.detector;
    }
    return pulses;
}

bool within(double measured, double nominal, double tolerance)
{
    return std::abs(measured - nominal) <= tolerance * nominal + 1e-9;
}

} // namespace

SweepLock detect_sweep_start(const DetectorTrace& trace, const PulsePattern& pattern)
{
    if (trace.empty())
        fail(ErrorKind::InvalidArgument, "empty detector trace");
    pattern.validate();

    const std::vector<Interval> pulses = detector_pulses(trace);
    const std::size_t k = pattern.pulses_us.size();
    for (std::size_t i = 0; i + k <= pulses.size(); ++i) {
        bool match = true;
        for (std::size_t j = 0; j < k && match; ++j) {
            const Interval& p = pulses[i + j];
            match = within(p.end - p.begin, pattern.pulses_us[j], pattern.tolerance);
            if (match && j + 1 < k)
                match = within(pulses[i + j + 1].begin - p.end, pattern.gaps_us[j], pattern.tolerance);
        }
        if (match)
            return {pulses[i].begin, pulses[i + k - 1].end};
    }
    fail(ErrorKind::Simulation, "sweep not detected");
}

std::vector<double> tone_edges(const DetectorTrace& trace, const SweepLock& lock)
{
    std::vector<double> edges = trace.rising_edges();
    std::erase_if(edges, [&](double t) { return t < lock.pattern_end_us; });
    return edges;
}

void write_trace_csv(const DetectorTrace& trace, std::ostream& out)
{
    out << "time_us,detector,direction\n";
    for (const TraceSample& s : trace.samples)
        out << format_number(s.time_us) << ',' << (s.detector ? 1 : 0) << ','
            << to_string(s.direction) << '\n';
}

} // namespace relaysim
