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
#include "rng.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace relaysim {

/// Carrier plan of one ranging procedure. Grid index i is the i-th
/// frequency in ascending order; `order` lists grid indices in transmit
/// order (empty means the plain linear sweep).
struct ToneSweep {
    std::size_t count = 40;
    double f_start_hz = 2.402e9;
    double f_step_hz = 1e6;
    double tone_us = 250.0;
    double gap_us = 150.0;
    std::vector<std::size_t> order;

    void validate() const;
    double frequency(std::size_t grid_index) const { return f_start_hz + static_cast<double>(grid_index) * f_step_hz; }
    std::vector<double> frequencies() const;
    std::size_t grid_index_at(std::size_t tx_position) const;
};

/// Sweep with the same grid but a uniformly shuffled transmit order.
ToneSweep with_random_hopping(ToneSweep sweep, Rng& rng);

struct SweepNoise {
    double phase_sigma_rad = 0.0;
    double amplitude_sigma_db = 0.0; // log-normal, off by default
};

/// What the initiator sees after one sweep, indexed by grid index.
struct SweepObservation {
    std::vector<double> phase_rad; // two-way phase, [0, 2π)
    std::vector<double> mag_ab;    // |H_AB| as measured by B
    std::vector<double> mag_ba;    // |H_BA| as measured by A
    double phase_sigma_rad = 0.0;
    std::uint64_t sweep_id = 0;
};

struct DistanceEstimate {
    double mean_m = 0.0;
    std::vector<double> per_pair_m;
    std::uint64_t sweep_id = 0;
};

SweepObservation run_sweep(const ToneSweep& sweep, const ChannelResponse& forward,
                           const ChannelResponse& reverse, const SweepNoise& noise, Rng& rng);

/// Pairwise phase-slope estimator averaged over the N-1 adjacent pairs.
///
/// Each adjacent difference is reduced mod 2π and then placed on the branch
/// closest to the circular mean slope, so that noise around a near-zero
/// slope does not alias individual pairs to the far end of the range. The
/// reference slope lies in [-m, 2π-m) where m is four circular standard
/// errors (zero for a noiseless linear phase, which reproduces the plain
/// [0, 2π) reduction exactly).
DistanceEstimate estimate_distance(const SweepObservation& obs, const ToneSweep& sweep);

/// c0 / (2 f_step).
double unambiguous_range(double f_step_hz);

} // namespace relaysim
