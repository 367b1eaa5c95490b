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

#include "mcpr.hpp"

#include "error.hpp"
#include "units.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace relaysim {

void ToneSweep::validate() const
{
    if (count < 2)
        fail(ErrorKind::InvalidArgument, "a tone sweep needs at least 2 carriers");
    if (!(f_step_hz > 0.0) || !(f_start_hz > 0.0))
        fail(ErrorKind::InvalidArgument, "sweep start and step must be positive");
    if (!(tone_us > 0.0) || gap_us < 0.0)
        fail(ErrorKind::InvalidArgument, "tone duration must be positive and gap non-negative");
    if (!order.empty()) {
        if (order.size() != count)
            fail(ErrorKind::InvalidArgument, "transmit order must list every carrier once");
        std::vector<std::size_t> sorted = order;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < count; ++i)
            if (sorted[i] != i)
                fail(ErrorKind::InvalidArgument, "transmit order is not a permutation");
    }
}

std::vector<double> ToneSweep::frequencies() const
{
    std::vector<double> f(count);
    for (std::size_t i = 0; i < count; ++i)
        f[i] = frequency(i);
    return f;
}

std::size_t ToneSweep::grid_index_at(std::size_t tx_position) const
{
    return order.empty() ? tx_position : order.at(tx_position);
}

ToneSweep with_random_hopping(ToneSweep sweep, Rng& rng)
{
    sweep.order.resize(sweep.count);
    std::iota(sweep.order.begin(), sweep.order.end(), std::size_t{0});
    // Fisher-Yates with an explicit uniform draw; std::shuffle is not
    // specified tightly enough to be reproducible across standard libraries.
    for (std::size_t i = sweep.count - 1; i > 0; --i) {
        std::uniform_int_distribution<std::size_t> pick(0, i);
        std::swap(sweep.order[i], sweep.order[pick(rng)]);
    }
    return sweep;
}

SweepObservation run_sweep(const ToneSweep& sweep, const ChannelResponse& forward,
                           const ChannelResponse& reverse, const SweepNoise& noise, Rng& rng)
{
    sweep.validate();
    const std::vector<double> freqs = sweep.frequencies();
    if (forward.freqs_hz != freqs || reverse.freqs_hz != freqs)
        fail(ErrorKind::InvalidArgument, "sweep/channel grid mismatch");

    SweepObservation obs;
    obs.phase_sigma_rad = noise.phase_sigma_rad;
    obs.phase_rad.resize(sweep.count);
    obs.mag_ab.resize(sweep.count);
    obs.mag_ba.resize(sweep.count);

    std::normal_distribution<double> unit(0.0, 1.0);
    // Draw in transmit order so a hopping sweep consumes the stream in time order.
    for (std::size_t pos = 0; pos < sweep.count; ++pos) {
        const std::size_t i = sweep.grid_index_at(pos);
        const double phase_noise = noise.phase_sigma_rad * unit(rng);
        const double amp_noise_ab = noise.amplitude_sigma_db * unit(rng);
        const double amp_noise_ba = noise.amplitude_sigma_db * unit(rng);
        obs.phase_rad[i] = wrap_two_pi(forward.phase_rad[i] + reverse.phase_rad[i] + phase_noise);
        obs.mag_ab[i] = forward.magnitude[i] * db_to_amplitude(amp_noise_ab);
        obs.mag_ba[i] = reverse.magnitude[i] * db_to_amplitude(amp_noise_ba);
    }
    return obs;
}

DistanceEstimate estimate_distance(const SweepObservation& obs, const ToneSweep& sweep)
{
    const std::size_t n = obs.phase_rad.size();
    if (n < 2 || n != sweep.count)
        fail(ErrorKind::InvalidArgument, "observation needs the sweep's N >= 2 phases");

    const std::size_t pairs = n - 1;
    std::vector<double> diffs(pairs);
    double c = 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < pairs; ++i) {
        diffs[i] = wrap_two_pi(obs.phase_rad[i + 1] - obs.phase_rad[i]);
        c += std::cos(diffs[i]);
        s += std::sin(diffs[i]);
    }

    const double resultant = std::hypot(c, s) / static_cast<double>(pairs);
    double margin = 0.0;
    if (resultant < 1.0 - 1e-12) {
        const double circular_sd = std::sqrt(-2.0 * std::log(std::max(resultant, 1e-300)));
        margin = std::min(std::numbers::pi / 2.0,
                          4.0 * circular_sd / std::sqrt(static_cast<double>(pairs)));
    }
    const double slope = wrap_two_pi(std::atan2(s, c) + margin) - margin;

    const double scale = kSpeedOfLight / (4.0 * std::numbers::pi * sweep.f_step_hz);
    DistanceEstimate est;
    est.sweep_id = obs.sweep_id;
    est.per_pair_m.resize(pairs);
    for (std::size_t i = 0; i < pairs; ++i) {
        // exact when the pair already sits on the reference branch
        const double offset = wrap_pi(diffs[i] - slope);
        const double unwrapped = std::abs(diffs[i] - slope - offset) < 1e-9 ? diffs[i] : slope + offset;
        est.per_pair_m[i] = scale * unwrapped;
    }
    est.mean_m = std::accumulate(est.per_pair_m.begin(), est.per_pair_m.end(), 0.0)
                 / static_cast<double>(pairs);
    return est;
}

double unambiguous_range(double f_step_hz)
{
    if (!(f_step_hz > 0.0))
        fail(ErrorKind::InvalidArgument, "frequency step must be positive");
    return kSpeedOfLight / (2.0 * f_step_hz);
}

} // namespace relaysim
