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

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace relaysim {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

enum class Antenna { NodeA, NodeB, RelayPrimary, RelaySecondary };

std::string_view to_string(Antenna a);

/// Planar scene: the two ranging nodes and the two relay stations (meters).
struct Geometry {
    Point node_a;
    Point node_b;
    Point relay_primary;
    Point relay_secondary;

    const Point& at(Antenna a) const;
    double distance(Antenna from, Antenna to) const;
};

enum class ChannelModel { FreeSpace, LogDistance, Multipath };

std::string_view to_string(ChannelModel m);
ChannelModel channel_model_from_string(std::string_view s);

/// One echo of the tap-delay line, relative to the line-of-sight ray.
struct Tap {
    double excess_delay_ns = 0.0;
    std::complex<double> gain;
};

struct ChannelModelSpec {
    ChannelModel kind = ChannelModel::FreeSpace;
    double exponent = 2.0;       // log-distance / multipath LOS law
    double ref_loss_db = 40.0;   // loss at 1 m for the log-distance law
    std::vector<Tap> taps;       // multipath only
    double antenna_gain_dbi = 0.0; // combined for the link, applied once

    void validate() const;
};

/// Complex gain kept in polar form so phases compose without rounding drift.
struct Gain {
    double magnitude = 1.0;
    double phase = 0.0; // [0, 2π)

    std::complex<double> complex() const { return std::polar(magnitude, phase); }
};

Gain operator*(const Gain& a, const Gain& b);

/// Transfer function of a single link sampled on a frequency grid.
struct ChannelResponse {
    std::vector<double> freqs_hz;
    std::vector<double> magnitude;
    std::vector<double> phase_rad; // [0, 2π)
    Antenna from = Antenna::NodeA;
    Antenna to = Antenna::NodeB;

    std::size_t size() const { return freqs_hz.size(); }
    Gain gain(std::size_t i) const { return {magnitude[i], phase_rad[i]}; }

    /// Index of an exactly sampled frequency; throws "frequency not sampled".
    std::size_t index_of(double f_hz) const;
};

/// Gain of a propagation path of the given length; ignores geometry.
Gain path_gain(const ChannelModelSpec& spec, double distance_m, double f_hz);

/// Pure propagation response between two antennas of the scene.
ChannelResponse propagate(const Geometry& geom, const ChannelModelSpec& spec,
                          Antenna from, Antenna to, std::span<const double> freqs_hz);

double received_power_dbm(double tx_power_dbm, const ChannelResponse& resp, double f_hz);

} // namespace relaysim
