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
#include "relaysim/relay.hpp"
#include "relaysim/tdd.hpp"

#include <sstream>
#include <vector>

using namespace relaysim;

namespace {

TxEvent a_event(double start, double len, double dbm = -30.0)
{
    return {Source::A, start, len, 2.44e9, dbm};
}

TxEvent b_event(double start, double len)
{
    return {Source::B, start, len, 2.44e9, -200.0};
}

} // namespace

TEST_CASE("clipped fraction equals reaction time over packet length")
{
    RelayConfig cfg;
    for (const auto& [len, expected] : {std::pair{44.0, 0.007954545454545454}, std::pair{2128.0, 0.0001644736842105263}}) {
        const std::vector<TxEvent> ev{a_event(100.0, len)};
        const Timeline t = simulate_timeline(ev, cfg);
        CHECK(t.outcomes[0].disposition == Disposition::Clipped);
        CHECK(t.outcomes[0].lost_fraction == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("reply after A stops is forwarded once the switch has returned")
{
    RelayConfig cfg;
    const std::vector<TxEvent> ev{a_event(0.0, 250.0), b_event(400.0, 250.0)};
    const Timeline t = simulate_timeline(ev, cfg);
    CHECK(t.outcomes[1].disposition == Disposition::Forwarded);
    CHECK(t.trace.direction_at(100.0) == Direction::AtoB);
    CHECK(t.trace.direction_at(250.2) == Direction::AtoB);
    CHECK(t.trace.direction_at(250.4) == Direction::BtoA);
}

TEST_CASE("a reply inside the reaction window loses its head")
{
    RelayConfig cfg;
    const std::vector<TxEvent> ev{a_event(0.0, 100.0), b_event(100.0, 35.0)};
    const Timeline t = simulate_timeline(ev, cfg);
    CHECK(t.outcomes[1].disposition == Disposition::Clipped);
    CHECK(t.outcomes[1].lost_fraction == doctest::Approx(0.01));
}

TEST_CASE("weak transmissions do not trigger the detector")
{
    RelayConfig cfg;
    const std::vector<TxEvent> ev{a_event(0.0, 100.0, -45.0)};
    const Timeline t = simulate_timeline(ev, cfg);
    CHECK(t.outcomes[0].disposition == Disposition::Ignored);
    CHECK(t.trace.rising_edges().empty());
}

TEST_CASE("hysteresis holds the detector through a small dip")
{
    RelayConfig cfg;
    // -38 dBm then -42 dBm back to back: inside the 3 dB release window.
    const std::vector<TxEvent> ev{a_event(0.0, 50.0, -38.0), a_event(50.0, 50.0, -42.0)};
    const Timeline t = simulate_timeline(ev, cfg);
    CHECK(t.trace.rising_edges().size() == 1);
    CHECK(t.trace.detector_at(75.0));
    cfg.hysteresis_db = 0.0;
    const Timeline u = simulate_timeline(ev, cfg);
    CHECK_FALSE(u.trace.detector_at(75.0));
}

TEST_CASE("input validation")
{
    RelayConfig cfg;
    CHECK_THROWS_AS(simulate_timeline(std::vector<TxEvent>{a_event(10.0, 5.0), a_event(0.0, 5.0)}, cfg), Error);
    CHECK_THROWS_AS(simulate_timeline(std::vector<TxEvent>{a_event(0.0, 50.0), a_event(10.0, 5.0)}, cfg), Error);
    CHECK_THROWS_AS(simulate_timeline(std::vector<TxEvent>{a_event(0.0, 0.0)}, cfg), Error);
}

TEST_CASE("sweep start pattern is located and tone edges follow it")
{
    RelayConfig cfg;
    PulsePattern pat{{80.0, 80.0, 80.0}, {1170.0, 1170.0}, 0.1};
    std::vector<TxEvent> ev{a_event(0.0, 376.0)}; // unrelated packet first
    double t = 2000.0;
    for (int k = 0; k < 3; ++k) {
        ev.push_back(a_event(t, 80.0));
        t += 80.0 + 1170.0;
    }
    const double tones_from = t + 400.0;
    for (int k = 0; k < 5; ++k)
        ev.push_back(a_event(tones_from + 800.0 * k, 250.0));
    const Timeline tl = simulate_timeline(ev, cfg);
    const SweepLock lock = detect_sweep_start(tl.trace, pat);
    CHECK(lock.start_us == doctest::Approx(2000.0));
    CHECK(lock.pattern_end_us == doctest::Approx(2000.0 + 2 * 1250.0 + 80.0));
    CHECK(tone_edges(tl.trace, lock).size() == 5);
}

TEST_CASE("missing pattern is reported")
{
    RelayConfig cfg;
    PulsePattern pat{{80.0, 80.0, 80.0}, {1170.0, 1170.0}, 0.1};
    const std::vector<TxEvent> ev{a_event(0.0, 80.0), a_event(1250.0, 80.0)};
    CHECK_THROWS_WITH(detect_sweep_start(simulate_timeline(ev, cfg).trace, pat), "sweep not detected");
    CHECK_THROWS_WITH(detect_sweep_start(DetectorTrace{}, pat), "empty detector trace");
}

TEST_CASE("trace csv")
{
    RelayConfig cfg;
    const std::vector<TxEvent> ev{a_event(1.0, 44.0)};
    std::ostringstream os;
    write_trace_csv(simulate_timeline(ev, cfg).trace, os);
    CHECK(os.str() == "time_us,detector,direction\n"
                      "0.000000,0,BA\n"
                      "1.000000,1,BA\n"
                      "1.350000,1,AB\n"
                      "45.000000,0,AB\n"
                      "45.350000,0,BA\n");
}
