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

#include <cmath>
#include <numbers>

namespace relaysim {

/// Vacuum speed of light in m/s (exact SI value).
inline constexpr double kSpeedOfLight = 299'792'458.0;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wraps an angle to [0, 2π).
inline double wrap_two_pi(double rad)
{
    double w = std::fmod(rad, kTwoPi);
    if (w < 0.0)
        w += kTwoPi;
    // fmod of a tiny negative value can round back up to exactly 2π
    if (w >= kTwoPi)
        w -= kTwoPi;
    return w;
}

/// Wraps an angle to (-π, π].
inline double wrap_pi(double rad)
{
    double w = wrap_two_pi(rad);
    return w > std::numbers::pi ? w - kTwoPi : w;
}

inline double db_to_amplitude(double db) { return std::pow(10.0, db / 20.0); }
inline double amplitude_to_db(double lin) { return 20.0 * std::log10(lin); }

} // namespace relaysim
