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

#include <string>
#include <vector>

namespace relaysim {

/// Received-signal-strength proximity model of a passive keyless entry
/// system, optionally with the amplify-and-forward relay in the path.
struct RssModel {
    ChannelModelSpec channel{ChannelModel::LogDistance, 2.0, 40.0, {}, 0.0};
    double f_hz = 2.44e9;
    double tx_power_dbm = 0.0;
    double car_antenna_m = 0.2;   // primary relay antenna to the car
    double relay_gain_db = 75.0;
    double relay_link_loss_db = 50.0;
};

struct RssThresholds {
    double unlock_dbm = 0.0; // approach: unlock at or above
    double lock_dbm = 0.0;   // depart: lock below
    double engine_dbm = 0.0; // engine start at or above
};

double rss_direct(const RssModel& m, double distance_m, double shadow_db);
double rss_relayed(const RssModel& m, double distance_to_secondary_m, double shadow_db);

/// Thresholds reproducing the given unshadowed unlock/lock/engine distances.
RssThresholds calibrate_rss_thresholds(const RssModel& m, double unlock_m, double lock_m, double engine_m);

enum class AccessState { Locked, Unlocked, EngineReady };

std::string_view to_string(AccessState s);

/// Hysteresis state machine driven by successive RSS readings.
class AccessController {
public:
    explicit AccessController(RssThresholds t) : t_(t) {}

    AccessState step(double rss_dbm);
    AccessState state() const { return state_; }

private:
    RssThresholds t_;
    AccessState state_ = AccessState::Locked;
};

struct BodyPreset {
    std::string name;
    double shadow_db = 0.0;
};

std::vector<BodyPreset> default_body_presets();

} // namespace relaysim
