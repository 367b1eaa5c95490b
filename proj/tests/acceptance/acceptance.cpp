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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include "relaysim/config.hpp"
#include "relaysim/csv.hpp"
#include "relaysim/harness.hpp"
#include "relaysim/mcpr.hpp"
#include "relaysim/session.hpp"
#include "relaysim/tdd.hpp"
#include "relaysim/units.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace relaysim;

namespace {

const std::string kScenarios = RELAYSIM_SCENARIO_DIR;

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string scientific(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

std::string fmt(double v, int precision = 4)
{
    return format_number(v, precision);
}

ScenarioConfig from_file(const std::string& name, const std::vector<std::pair<std::string, std::string>>& overrides = {})
{
    KeyValueConfig kv = KeyValueConfig::load(kScenarios + "/" + name);
    for (const auto& [k, v] : overrides)
        kv.set(k, v);
    return load_scenario(kv);
}

std::string csv_of(const ScenarioResult& r)
{
    std::ostringstream os;
    write_csv(r, os);
    return os.str();
}

Outcome estimator_round_trip()
{
    const auto t0 = Clock::now();
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> step(0.1e6, 2e6);
    std::uniform_real_distribution<double> frac(0.001, 0.999);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        SessionSetup s;
        s.sweep.f_step_hz = step(rng);
        const double d = frac(rng) * unambiguous_range(s.sweep.f_step_hz);
        s.geometry.node_b = {d, 0.0};
        Rng session_rng(static_cast<std::uint64_t>(k));
        worst = std::max(worst, std::abs(run_session(s, session_rng).estimate.mean_m - d));
    }
    const double secs = seconds_since(t0);
    return {worst < 1e-6 && secs < 5.0, "max error " + scientific(worst) + " m, " + fmt(secs, 2) + " s"};
}

Outcome delay_bias()
{
    const double expected = 8.994;
    SessionSetup s;
    s.mode = LinkMode::Bidirectional;
    s.a_wired = true;
    s.geometry.node_b = {10.0, 0.0};
    Rng rng(1);
    const double bias0 = run_session(s, rng).estimate.mean_m - 10.0;

    const ScenarioResult r = run_experiment(from_file("sweep.cfg", {{"grid.d_set_m", ""}}));
    double worst = 0.0;
    for (const auto& [id, cell] : r.summary)
        if (id.ends_with("/off")) {
            const double d = std::stod(id.substr(id.find("d=") + 2));
            worst = std::max(worst, std::abs(cell.mean - d - expected));
        }
    const bool pass = std::abs(bias0 - expected) <= 1e-3 && worst <= 0.3;
    return {pass, "noiseless bias " + fmt(bias0) + " m, worst noisy mean bias deviation " + fmt(worst) + " m"};
}

Outcome manipulation_grid()
{
    const auto t0 = Clock::now();
    const ScenarioConfig cfg = from_file("sweep.cfg");
    const ScenarioResult r = run_experiment(cfg);
    const double secs = seconds_since(t0);

    double worst_mean = 0.0;
    double worst_quant = 0.0;
    std::size_t cells = 0;
    for (double d : cfg.grid.d_m)
        for (double d_set : cfg.grid.d_set_m) {
            const std::string id = "sweep/d=" + format_shortest(d) + "/set=" + format_shortest(d_set);
            worst_mean = std::max(worst_mean, std::abs(r.summary.at(id).mean - d_set));
            ++cells;

            // The noiseless run isolates the shifter quantization.
            SessionSetup s = base_setup(cfg);
            s.noise = SweepNoise{};
            s.mode = LinkMode::Bidirectional;
            s.a_wired = true;
            s.geometry.node_b = {d, 0.0};
            s.program.enabled = true;
            s.program.d_set_m = d_set;
            s.program.believed_d_m = self_compensated_distance(s);
            Rng rng(1);
            worst_quant = std::max(worst_quant, std::abs(run_session(s, rng).estimate.mean_m - d_set));
        }
    const bool pass = cells == 15 && worst_mean < 0.5 && worst_quant <= 0.061 && secs < 30.0;
    return {pass, std::to_string(cells) + " cells, worst |mean - d_set| " + fmt(worst_mean)
                      + " m, worst quantization " + fmt(worst_quant) + " m, " + fmt(secs, 2) + " s"};
}

Outcome ota_relay()
{
    const ScenarioConfig cfg = from_file("ota.cfg");
    const ScenarioResult r = run_experiment(cfg);
    const double bias = kSpeedOfLight * cfg.relay.delay_ns * 1e-9;
    double worst_off = 0.0;
    double worst_on = 0.0;
    for (double b : cfg.ota.b_m) {
        const double total = cfg.ota.a_offset_m + cfg.ota.span_m + b;
        const std::string id = "ota/b=" + format_shortest(b);
        worst_off = std::max(worst_off, std::abs(r.summary.at(id + "/off").mean - (total + bias)));
        worst_on = std::max(worst_on, std::abs(r.summary.at(id + "/on").mean - cfg.ota.d_set_m));
    }
    return {worst_off <= 0.5 && worst_on <= 0.5,
            "worst off-deviation " + fmt(worst_off) + " m, worst on-deviation " + fmt(worst_on) + " m"};
}

Outcome wrap_ambiguity()
{
    SessionSetup s;
    s.geometry.node_b = {160.0, 0.0};
    Rng rng(1);
    const double est = run_session(s, rng).estimate.mean_m;
    return {std::abs(est - 10.104) <= 1e-3, "estimate " + fmt(est, 6) + " m"};
}

Outcome tdd_timing()
{
    RelayConfig cfg;
    cfg.reaction_us = 0.35;
    double pct[2] = {0.0, 0.0};
    const double lengths[2] = {44.0, 2128.0};
    for (int i = 0; i < 2; ++i) {
        const std::vector<TxEvent> ev{{Source::A, 100.0, lengths[i], 2.44e9, -30.0}};
        pct[i] = 100.0 * simulate_timeline(ev, cfg).outcomes[0].lost_fraction;
    }
    const bool pass = std::abs(pct[0] - 0.795) <= 1e-3 && std::abs(pct[1] - 0.016) <= 1e-3;
    return {pass, "44 us: " + fmt(pct[0], 5) + " %, 2128 us: " + fmt(pct[1], 5) + " %"};
}

Outcome reciprocity_ordering()
{
    const ScenarioResult r = run_experiment(from_file("reciprocity.cfg", {{"repetitions", "200"}}));
    const double uni = r.metrics.at("median/uni");
    const double bi = r.metrics.at("median/bi");
    const double legit = r.metrics.at("median/legit");
    const bool pass = uni > bi && bi > legit && (bi - legit) < (uni - legit);
    return {pass, "medians uni " + fmt(uni, 3) + " > bi " + fmt(bi, 3) + " > legit " + fmt(legit, 3)};
}

Outcome equalization()
{
    constexpr int kMetaRuns = 50;
    int eq_below = 0;
    int bi_above = 0;
    for (int k = 0; k < kMetaRuns; ++k) {
        const ScenarioResult r = run_experiment(
            from_file("reciprocity.cfg", {{"seed", std::to_string(derive_seed(20240610, 8, k))},
                                          {"repetitions", "200"}}));
        const double crit = r.metrics.at("ks_critical");
        eq_below += r.metrics.at("ks/bi_eq_vs_legit") < crit;
        bi_above += r.metrics.at("ks/bi_vs_legit") > crit;
    }
    const bool pass = eq_below >= 45 && bi_above >= 45;
    return {pass, "equalized below critical in " + std::to_string(eq_below) + "/50, non-equalized above in "
                      + std::to_string(bi_above) + "/50"};
}

Outcome countermeasure()
{
    const std::vector<std::pair<std::string, std::string>> base{
        {"grid.d_m", "23"}, {"grid.d_set_m", "1"}, {"tdd.fake_pulses", "3"}};
    auto with = [&](const char* inference) {
        auto o = base;
        o.emplace_back("program.inference", inference);
        return run_experiment(from_file("sweep.cfg", o)).summary.at("sweep/d=23/set=1").mean;
    };
    const double counted = with("count");
    const double oracle = with("oracle");
    const bool pass = std::abs(counted - 1.0) >= 1.0 && std::abs(oracle - 1.0) < 0.5;
    return {pass, "count-based mean " + fmt(counted, 3) + " m, oracle mean " + fmt(oracle, 3) + " m (d_set 1 m)"};
}

Outcome determinism()
{
    std::size_t checked = 0;
    for (const char* name : {"sweep.cfg", "ota.cfg", "reciprocity.cfg", "rss.cfg"}) {
        const std::string a = csv_of(run_experiment(from_file(name)));
        const std::string b = csv_of(run_experiment(from_file(name)));
        const std::string c = csv_of(run_experiment(from_file(name, {{"run.threads", "3"}})));
        if (a != b || a != c)
            return {false, std::string(name) + " differs between runs"};
        ++checked;
    }
    auto trace = [] {
        std::ostringstream os;
        write_trace_csv(run_tdd_trace(from_file("tdd_trace.cfg")).trace, os);
        return os.str();
    };
    if (trace() != trace())
        return {false, "tdd trace differs between runs"};
    return {true, std::to_string(checked) + " scenarios and the tdd trace byte-identical (also with 3 threads)"};
}

} // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"1 estimator round-trip", estimator_round_trip},
        {"2 relay delay bias", delay_bias},
        {"3 distance manipulation grid", manipulation_grid},
        {"4 over-the-air relay", ota_relay},
        {"5 wrap ambiguity", wrap_ambiguity},
        {"6 TDD clipped fraction", tdd_timing},
        {"7 reciprocity ordering", reciprocity_ordering},
        {"8 equalization", equalization},
        {"9 fake-pulse countermeasure", countermeasure},
        {"10 determinism", determinism},
    };
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("%s criterion %-30s %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
