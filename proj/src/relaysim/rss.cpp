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

#include "rss.hpp"

#include "error.hpp"
#include "units.hpp"

namespace relaysim {

namespace {

// Readings within this margin of a threshold count as reaching it.
constexpr double kSlackDb = 1e-9;

double link_db(const RssModel& m, double distance_m)
{
    return amplitude_to_db(path_gain(m.channel, distance_m, m.f_hz).magnitude);
}

} // namespace

double rss_direct(const RssModel& m, double distance_m, double shadow_db)
{
    return m.tx_power_dbm - shadow_db + link_db(m, distance_m);
}

double rss_relayed(const RssModel& m, double distance_to_secondary_m, double shadow_db)
{
    return m.tx_power_dbm - shadow_db + link_db(m, distance_to_secondary_m) + m.relay_gain_db
           - m.relay_link_loss_db + link_db(m, m.car_antenna_m);
}

RssThresholds calibrate_rss_thresholds(const RssModel& m, double unlock_m, double lock_m, double engine_m)
{
    if (!(engine_m <= unlock_m && unlock_m < lock_m))
        fail(ErrorKind::Config, "RSS calibration needs engine <= unlock < lock distances");
    return {rss_direct(m, unlock_m, 0.0), rss_direct(m, lock_m, 0.0), rss_direct(m, engine_m, 0.0)};
}

std::string_view to_string(AccessState s)
{
    switch (s) {
    case AccessState::Locked: return "locked";
    case AccessState::Unlocked: return "unlocked";
    case AccessState::EngineReady: return "engine";
    }
    return "?";
}

AccessState AccessController::step(double rss_dbm)
{
    if (state_ == AccessState::Locked) {
        if (rss_dbm >= t_.unlock_dbm - kSlackDb)
            state_ = AccessState::Unlocked;
    } else if (rss_dbm < t_.lock_dbm - kSlackDb) {
        state_ = AccessState::Locked;
    }
    if (state_ != AccessState::Locked)
        state_ = rss_dbm >= t_.engine_dbm - kSlackDb ? AccessState::EngineReady : AccessState::Unlocked;
    return state_;
}

std::vector<BodyPreset> default_body_presets()
{
    return {{"hand", 0.0}, {"jacket", 2.0}, {"trouser", 4.0}, {"trouser_back", 10.0}};
}

} // namespace relaysim
