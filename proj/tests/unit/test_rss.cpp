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

#include "doctest.h"

#include "relaysim/error.hpp"
#include "relaysim/rss.hpp"

using namespace relaysim;

TEST_CASE("calibrated thresholds reproduce the reference distances")
{
    const RssModel m;
    const RssThresholds t = calibrate_rss_thresholds(m, 5.0, 13.0, 2.0);
    CHECK(t.unlock_dbm == doctest::Approx(-53.979400086720375));
    CHECK(t.lock_dbm == doctest::Approx(-62.27886704613674));
    CHECK(t.engine_dbm == doctest::Approx(-46.020599913279625));
    CHECK(rss_direct(m, 5.0, 0.0) == doctest::Approx(t.unlock_dbm));
    CHECK_THROWS_AS(calibrate_rss_thresholds(m, 13.0, 5.0, 2.0), Error);
}

TEST_CASE("body shadowing lowers the reading")
{
    const RssModel m;
    CHECK(rss_direct(m, 3.0, 10.0) == doctest::Approx(rss_direct(m, 3.0, 0.0) - 10.0));
    CHECK(rss_relayed(m, 3.0, 4.0) == doctest::Approx(rss_relayed(m, 3.0, 0.0) - 4.0));
}

TEST_CASE("relayed reading is independent of the car's distance")
{
    const RssModel m;
    // phone at 4 m from the secondary antenna unlocks a car the phone could never reach directly
    const RssThresholds t = calibrate_rss_thresholds(m, 5.0, 13.0, 2.0);
    CHECK(rss_relayed(m, 4.0, 0.0) >= t.unlock_dbm);
    CHECK(rss_direct(m, 69.0, 0.0) < t.lock_dbm);
}

TEST_CASE("access state machine with hysteresis")
{
    AccessController c({-54.0, -62.0, -46.0});
    CHECK(c.step(-70.0) == AccessState::Locked);
    CHECK(c.step(-58.0) == AccessState::Locked);
    CHECK(c.step(-54.0) == AccessState::Unlocked);
    CHECK(c.step(-58.0) == AccessState::Unlocked); // between lock and unlock
    CHECK(c.step(-45.0) == AccessState::EngineReady);
    CHECK(c.step(-50.0) == AccessState::Unlocked);
    CHECK(c.step(-63.0) == AccessState::Locked);
}

TEST_CASE("default presets")
{
    const auto p = default_body_presets();
    REQUIRE(p.size() == 4);
    CHECK(p.front().name == "hand");
    CHECK(p.back().shadow_db == 10.0);
}
