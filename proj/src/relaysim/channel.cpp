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

#include "channel.hpp"

#include "error.hpp"
#include "units.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace relaysim {

std::string_view to_string(Antenna a)
{
    switch (a) {
    case Antenna::NodeA: return "A";
    case Antenna::NodeB: return "B";
    case Antenna::RelayPrimary: return "primary";
    case Antenna::RelaySecondary: return "secondary";
    }
    return "?";
}

std::string_view to_string(ChannelModel m)
{
    switch (m) {
    case ChannelModel::FreeSpace: return "free_space";
    case ChannelModel::LogDistance: return "log_distance";
    case ChannelModel::Multipath: return "multipath";
    }
    return "?";
}

ChannelModel channel_model_from_string(std::string_view s)
{
    if (s == "free_space")
        return ChannelModel::FreeSpace;
    if (s == "log_distance")
        return ChannelModel::LogDistance;
    if (s == "multipath")
        return ChannelModel::Multipath;
    fail(ErrorKind::Config, "unknown channel model '" + std::string(s) + "'");
}

const Point& Geometry::at(Antenna a) const
{
    switch (a) {
    case Antenna::NodeA: return node_a;
    case Antenna::NodeB: return node_b;
    case Antenna::RelayPrimary: return relay_primary;
    case Antenna::RelaySecondary: return relay_secondary;
    }
    return node_a;
}

double Geometry::distance(Antenna from, Antenna to) const
{
    const Point& p = at(from);
    const Point& q = at(to);
    // hypot is sign-symmetric, so distance(a,b) == distance(b,a) bit for bit
    return std::hypot(p.x - q.x, p.y - q.y);
}

void ChannelModelSpec::validate() const
{
    if (kind != ChannelModel::FreeSpace && (exponent < 1.5 || exponent > 6.0))
        fail(ErrorKind::Config, "path-loss exponent must lie in [1.5, 6.0]");
    if (!std::isfinite(ref_loss_db) || !std::isfinite(antenna_gain_dbi))
        fail(ErrorKind::Config, "non-finite channel loss parameters");
    for (const Tap& t : taps)
        if (t.excess_delay_ns < 0.0 || !std::isfinite(std::abs(t.gain)))
            fail(ErrorKind::Config, "multipath taps need non-negative delay and finite gain");
}

Gain operator*(const Gain& a, const Gain& b)
{
    return {a.magnitude * b.magnitude, wrap_two_pi(a.phase + b.phase)};
}

std::size_t ChannelResponse::index_of(double f_hz) const
{
    auto it = std::find(freqs_hz.begin(), freqs_hz.end(), f_hz);
    if (it == freqs_hz.end())
        fail(ErrorKind::InvalidArgument, "frequency not sampled");
    return static_cast<std::size_t>(it - freqs_hz.begin());
}

namespace {

// Phase of a pure delay, 2π·f·d/c0 mod 2π, computed through the fractional
// cycle count to keep precision at GHz carriers.
double delay_phase(double f_hz, double distance_m)
{
    const double cycles = f_hz * distance_m / kSpeedOfLight;
    return wrap_two_pi(kTwoPi * (cycles - std::floor(cycles)));
}

double loss_law_magnitude(const ChannelModelSpec& spec, double distance_m, double f_hz)
{
    const double antenna = db_to_amplitude(spec.antenna_gain_dbi);
    if (spec.kind == ChannelModel::FreeSpace)
        return antenna * kSpeedOfLight / (4.0 * std::numbers::pi * distance_m * f_hz);
    const double loss_db = spec.ref_loss_db + 10.0 * spec.exponent * std::log10(distance_m);
    return antenna * db_to_amplitude(-loss_db);
}

} // namespace

Gain path_gain(const ChannelModelSpec& spec, double distance_m, double f_hz)
{
    if (!(distance_m > 0.0))
        fail(ErrorKind::InvalidArgument, "coincident antennas");
    if (!(f_hz > 0.0) || !std::isfinite(f_hz))
        fail(ErrorKind::InvalidArgument, "frequencies must be strictly positive");

    Gain g{loss_law_magnitude(spec, distance_m, f_hz), delay_phase(f_hz, distance_m)};
    if (spec.kind != ChannelModel::Multipath || spec.taps.empty())
        return g;

    std::complex<double> echo_sum{1.0, 0.0};
    for (const Tap& t : spec.taps) {
        const double cycles = f_hz * t.excess_delay_ns * 1e-9;
        echo_sum += t.gain * std::polar(1.0, kTwoPi * (cycles - std::floor(cycles)));
    }
    const double m = std::abs(echo_sum);
    if (!(m > 0.0))
        fail(ErrorKind::Simulation, "multipath null: zero channel magnitude");
    return g * Gain{m, wrap_two_pi(std::arg(echo_sum))};
}

ChannelResponse propagate(const Geometry& geom, const ChannelModelSpec& spec,
                          Antenna from, Antenna to, std::span<const double> freqs_hz)
{
    if (from == to)
        fail(ErrorKind::InvalidArgument, "propagate needs two distinct antennas");
    if (freqs_hz.empty())
        fail(ErrorKind::InvalidArgument, "empty frequency list");

    const double d = geom.distance(from, to);
    ChannelResponse r;
    r.from = from;
    r.to = to;
    r.freqs_hz.assign(freqs_hz.begin(), freqs_hz.end());
    r.magnitude.reserve(freqs_hz.size());
    r.phase_rad.reserve(freqs_hz.size());
    for (double f : freqs_hz) {
        const Gain g = path_gain(spec, d, f);
        r.magnitude.push_back(g.magnitude);
        r.phase_rad.push_back(g.phase);
    }
    return r;
}

double received_power_dbm(double tx_power_dbm, const ChannelResponse& resp, double f_hz)
{
    return tx_power_dbm + amplitude_to_db(resp.magnitude[resp.index_of(f_hz)]);
}

} // namespace relaysim
