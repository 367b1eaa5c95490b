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

#include "relaysim/config.hpp"
#include "relaysim/error.hpp"
#include "relaysim/harness.hpp"

#include <cmath>
#include <sstream>

using namespace relaysim;

namespace {

ScenarioConfig scenario(const std::string& text)
{
    return load_scenario(KeyValueConfig::parse(text));
}

std::string csv_of(const ScenarioResult& r)
{
    std::ostringstream os;
    write_csv(r, os);
    return os.str();
}

} // namespace

TEST_CASE("seed is mandatory and unknown keys are rejected")
{
    CHECK_THROWS_AS(scenario("experiment = sweep\n"), Error);
    CHECK_THROWS_AS(scenario("seed = 1\nrelay.gian_db = 3\n"), Error);
    CHECK_THROWS_AS(scenario("seed = 1\nexperiment = teleport\n"), Error);
    CHECK_THROWS_AS(scenario("seed = 1\nrepetitions = 0\n"), Error);
    CHECK_NOTHROW(scenario("seed = 1\n"));
}

TEST_CASE("defaults are echoed")
{
    const ScenarioConfig c = scenario("seed = 5\n");
    CHECK(c.repetitions == 100);
    CHECK(c.sweep.count == 40);
    CHECK(c.relay.delay_ns == 30.0);
    CHECK(c.echo.find("relay.phase_bits = 6\n") != std::string::npos);
    CHECK(c.echo.find("seed = 5\n") != std::string::npos);
}

TEST_CASE("list and preset syntax")
{
    const ScenarioConfig c = scenario("seed = 1\nrss.presets = pocket:3\nchannel.model = multipath\n"
                                      "channel.taps = 12:0.3:1.0, 40:0.1:0\ntdd.interferer_dbm = -25\n");
    REQUIRE(c.rss.presets.size() == 1);
    CHECK(c.rss.presets[0].shadow_db == 3.0);
    REQUIRE(c.channel.taps.size() == 2);
    CHECK(std::abs(c.channel.taps[0].gain) == doctest::Approx(0.3));
    CHECK(*c.plan.interferer_dbm == -25.0);
    CHECK_THROWS_AS(scenario("seed = 1\nrss.presets = pocket\n"), Error);
}

TEST_CASE("sweep grid produces one row per repetition and cell")
{
    const ScenarioConfig c = scenario("seed = 3\nrepetitions = 4\ngrid.d_m = 5\ngrid.d_set_m = 1, 10\n");
    const ScenarioResult r = run_experiment(c);
    CHECK(r.rows.size() == 4 * 4);
    CHECK(r.summary.count("sweep/d=5/direct") == 1);
    CHECK(r.summary.at("sweep/d=5/set=10").mean == doctest::Approx(10.0).epsilon(0.02));
    CHECK(r.summary.at("sweep/d=5/off").mean == doctest::Approx(13.994).epsilon(0.02));
}

TEST_CASE("same seed gives identical CSV, different seed does not")
{
    const std::string text = "seed = 11\nrepetitions = 5\ngrid.d_m = 10\ngrid.d_set_m = 5\n";
    const std::string a = csv_of(run_experiment(scenario(text)));
    CHECK(a == csv_of(run_experiment(scenario(text))));
    CHECK(a != csv_of(run_experiment(scenario("seed = 12\nrepetitions = 5\ngrid.d_m = 10\ngrid.d_set_m = 5\n"))));
}

TEST_CASE("thread count does not change the result")
{
    const std::string text = "seed = 4\nrepetitions = 9\ngrid.d_m = 10\ngrid.d_set_m = 5\nsweep.hopping = random\n";
    CHECK(csv_of(run_experiment(scenario(text))) == csv_of(run_experiment(scenario(text + "run.threads = 3\n"))));
}

TEST_CASE("missed pattern repetitions fall back to the unmanipulated distance")
{
    const ScenarioConfig c =
        scenario("seed = 2\nrepetitions = 3\ngrid.d_m = 5\ngrid.d_set_m = 1\ntdd.missed_pattern_reps = 1\n"
                 "noise.phase_sigma_rad = 0\n");
    const ScenarioResult r = run_experiment(c);
    for (const ResultRow& row : r.rows)
        if (row.scenario_id == "sweep/d=5/set=1")
            CHECK(std::abs(row.d_est_m - (row.rep == 1 ? 13.994 : 1.0)) < 0.05);
}

TEST_CASE("OTA geometry must block the direct path")
{
    CHECK_THROWS_AS(run_experiment(scenario("seed = 1\nexperiment = ota\nrepetitions = 1\nota.obstruction_db = 0\n")),
                    Error);
}

TEST_CASE("reciprocity needs enough clean samples")
{
    CHECK_THROWS_AS(run_experiment(scenario("seed = 1\nexperiment = reciprocity\nrepetitions = 10\n")), Error);
}

TEST_CASE("reciprocity verdicts and metrics")
{
    const ScenarioResult r =
        run_experiment(scenario("seed = 1\nexperiment = reciprocity\nrepetitions = 40\nnoise.amplitude_sigma_db = 1.5\n"));
    CHECK(r.rows.size() == 160);
    CHECK(r.metrics.at("median/uni") > r.metrics.at("median/bi"));
    CHECK(r.metrics.at("median/bi") > r.metrics.at("median/legit"));
    CHECK(r.metrics.at("detect_rate/uni") == 1.0);
    for (const ResultRow& row : r.rows)
        CHECK((row.verdict == "attack" || row.verdict == "clean"));
}

TEST_CASE("rss approach and depart")
{
    const ScenarioResult r = run_experiment(scenario("seed = 1\nexperiment = rss\nrss.presets = hand:0\n"));
    CHECK(r.metrics.at("unlock_m/hand/direct") == doctest::Approx(5.0));
    CHECK(r.metrics.at("lock_m/hand/direct") == doctest::Approx(13.1));
    CHECK(r.metrics.at("engine_m/hand/direct") == doctest::Approx(2.0));
    CHECK(r.metrics.at("unlock_m/hand/relay") > 0.0);
}

TEST_CASE("tdd trace is not a result table")
{
    const ScenarioConfig c = scenario("seed = 1\nexperiment = tdd-trace\n");
    CHECK_THROWS_AS(run_experiment(c), Error);
    const Timeline t = run_tdd_trace(c);
    CHECK(t.trace.rising_edges().size() > 40);
}

TEST_CASE("csv header and empty cells")
{
    ScenarioResult r;
    r.seed = 9;
    ResultRow row;
    row.scenario_id = "x";
    row.d_true_m = 1.5;
    r.rows.push_back(row);
    CHECK(csv_of(r) == "scenario_id,rep,d_true_m,d_set_m,d_est_m,dissimilarity,verdict,rss_dbm,decision,seed\n"
                       "x,0,1.500000,,,,,,,9\n");
    CHECK_THROWS_AS(emit_csv(r, "/nonexistent/dir/out.csv"), Error);
}

TEST_CASE("summaries use the sample standard deviation")
{
    std::vector<ResultRow> rows(3);
    for (std::size_t i = 0; i < 3; ++i) {
        rows[i].scenario_id = "c";
        rows[i].d_est_m = static_cast<double>(i + 1);
    }
    const CellSummary s = summarize(rows).at("c");
    CHECK(s.mean == 2.0);
    CHECK(s.sd == doctest::Approx(1.0));
    CHECK(s.min == 1.0);
    CHECK(s.max == 3.0);
}
