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

#include "harness.hpp"

#include "csv.hpp"
#include "error.hpp"
#include "units.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <thread>

namespace relaysim {

std::string_view to_string(Experiment e)
{
    switch (e) {
    case Experiment::Sweep: return "sweep";
    case Experiment::Ota: return "ota";
    case Experiment::Reciprocity: return "reciprocity";
    case Experiment::Rss: return "rss";
    case Experiment::TddTrace: return "tdd-trace";
    }
    return "?";
}

Experiment experiment_from_string(std::string_view s)
{
    for (Experiment e : {Experiment::Sweep, Experiment::Ota, Experiment::Reciprocity, Experiment::Rss,
                         Experiment::TddTrace})
        if (s == to_string(e))
            return e;
    fail(ErrorKind::Config, "unknown experiment '" + std::string(s) + "'");
}

namespace {

std::vector<Tap> parse_taps(const std::string& text)
{
    // delay_ns:magnitude:phase_rad, comma separated
    std::vector<Tap> taps;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos)
            comma = text.size();
        const std::string item = text.substr(pos, comma - pos);
        pos = comma + 1;
        if (item.find_first_not_of(" \t") == std::string::npos)
            continue;
        const auto c1 = item.find(':');
        const auto c2 = c1 == std::string::npos ? c1 : item.find(':', c1 + 1);
        if (c2 == std::string::npos)
            fail(ErrorKind::Config, "channel.taps: expected delay_ns:magnitude:phase_rad, got '" + item + "'");
        const double delay = parse_double(item.substr(0, c1), "channel.taps");
        const double mag = parse_double(item.substr(c1 + 1, c2 - c1 - 1), "channel.taps");
        const double ph = parse_double(item.substr(c2 + 1), "channel.taps");
        taps.push_back({delay, std::polar(mag, ph)});
    }
    return taps;
}

std::vector<BodyPreset> parse_presets(const std::string& text)
{
    std::vector<BodyPreset> presets;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos)
            comma = text.size();
        std::string item = text.substr(pos, comma - pos);
        pos = comma + 1;
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (item.empty())
            continue;
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            fail(ErrorKind::Config, "rss.presets: expected name:shadow_db, got '" + item + "'");
        presets.push_back({item.substr(0, colon), parse_double(item.substr(colon + 1), "rss.presets")});
    }
    if (presets.empty())
        fail(ErrorKind::Config, "rss.presets must name at least one phone location");
    return presets;
}

std::size_t to_count(double v, const char* key)
{
    if (!(v >= 0.0) || v != std::floor(v))
        fail(ErrorKind::Config, std::string(key) + " must hold non-negative integers");
    return static_cast<std::size_t>(v);
}

} // namespace

ScenarioConfig load_scenario(const KeyValueConfig& kv)
{
    ScenarioConfig c;
    c.experiment = experiment_from_string(kv.get_string("experiment", "sweep"));
    if (!kv.contains("seed"))
        fail(ErrorKind::Config, "seed is mandatory");
    c.seed = kv.get_u64("seed", 0);
    c.repetitions = kv.get_u64("repetitions", 100);
    if (c.repetitions < 1)
        fail(ErrorKind::Config, "repetitions must be at least 1");
    c.threads = std::max<std::uint64_t>(1, kv.get_u64("run.threads", 1));

    ToneSweep& sw = c.sweep;
    sw.count = kv.get_u64("sweep.n", 40);
    sw.f_start_hz = kv.get_double("sweep.f_start_hz", 2.402e9);
    sw.f_step_hz = kv.get_double("sweep.f_step_hz", 1e6);
    sw.tone_us = kv.get_double("sweep.tone_us", 250.0);
    sw.gap_us = kv.get_double("sweep.gap_us", 150.0);
    const std::string hopping = kv.get_string("sweep.hopping", "linear");
    if (hopping != "linear" && hopping != "random")
        fail(ErrorKind::Config, "sweep.hopping must be 'linear' or 'random'");
    c.random_hopping = hopping == "random";
    try {
        sw.validate();
    } catch (const Error& e) {
        fail(ErrorKind::Config, e.what());
    }

    c.channel.kind = channel_model_from_string(kv.get_string("channel.model", "free_space"));
    c.channel.exponent = kv.get_double("channel.exponent", 2.0);
    c.channel.ref_loss_db = kv.get_double("channel.ref_loss_db", 40.0);
    c.channel.antenna_gain_dbi = kv.get_double("channel.antenna_gain_dbi", 0.0);
    c.channel.taps = parse_taps(kv.get_string("channel.taps", ""));
    c.channel.validate();

    c.noise.phase_sigma_rad = kv.get_double("noise.phase_sigma_rad", 0.05);
    c.noise.amplitude_sigma_db = kv.get_double("noise.amplitude_sigma_db", 0.0);
    if (c.noise.phase_sigma_rad < 0.0 || c.noise.amplitude_sigma_db < 0.0)
        fail(ErrorKind::Config, "noise levels must be non-negative");

    RelayConfig& r = c.relay;
    r.gain_ab_db = kv.get_double("relay.gain_ab_db", 75.0);
    r.gain_ba_db = kv.get_double("relay.gain_ba_db", 75.0);
    r.delay_ns = kv.get_double("relay.delay_ns", 30.0);
    r.link_loss_db = kv.get_double("relay.link_loss_db", 0.0);
    r.threshold_dbm = kv.get_double("relay.threshold_dbm", -40.0);
    r.hysteresis_db = kv.get_double("relay.hysteresis_db", 3.0);
    r.reaction_us = kv.get_double("relay.reaction_us", 0.35);
    r.phase_bits = static_cast<int>(kv.get_u64("relay.phase_bits", 6));
    r.attenuator.step_db = kv.get_double("relay.atten_step_db", 0.5);
    r.attenuator.range_db = kv.get_double("relay.atten_range_db", 31.5);
    r.validate();

    c.program.enabled = kv.get_bool("program.enabled", true);
    c.program.believed_d_m = kv.get_auto_double("program.believed_d_m");
    c.program.inference = inference_from_string(kv.get_string("program.inference", "count"));

    c.node_tx_power_dbm = kv.get_double("nodes.tx_power_dbm", 4.0);
    c.a_wired_power_dbm = kv.get_double("nodes.a_wired_power_dbm", -30.0);

    TimelinePlan& p = c.plan;
    p.pattern.pulses_us = kv.get_doubles("tdd.pattern_pulses_us", {80.0, 80.0, 80.0});
    p.pattern.gaps_us = kv.get_doubles("tdd.pattern_gaps_us", {1170.0, 1170.0});
    p.pattern.tolerance = kv.get_double("tdd.pattern_tolerance", 0.1);
    p.pattern.validate();
    p.sweep_start_us = kv.get_double("tdd.sweep_start_us", 12'000.0);
    p.pattern_lead_us = kv.get_double("tdd.pattern_lead_us", 400.0);
    p.fake_pulses = kv.get_u64("tdd.fake_pulses", 0);
    p.fake_after_tone = kv.get_u64("tdd.fake_after_tone", 20);
    p.fake_pulse_us = kv.get_double("tdd.fake_pulse_us", 100.0);
    if (p.fake_pulses > 0 && p.fake_after_tone + 1 >= sw.count)
        fail(ErrorKind::Config, "tdd.fake_after_tone must leave tones after the fake pulses");
    for (double v : kv.get_doubles("tdd.missed_pattern_reps", {}))
        c.missed_pattern_reps.push_back(to_count(v, "tdd.missed_pattern_reps"));
    const std::string interferer = kv.get_string("tdd.interferer_dbm", "none");
    if (interferer != "none")
        p.interferer_dbm = parse_double(interferer, "tdd.interferer_dbm");
    if (p.pattern_lead_us < 0.0 || p.sweep_start_us - p.pattern_lead_us - p.pattern.length_us() < 0.0)
        fail(ErrorKind::Config, "the sweep-start pattern must fit before tdd.sweep_start_us");

    DetectionSpec& d = c.detection;
    d.domain = metric_domain_from_string(kv.get_string("detection.metric_domain", "db"));
    d.quantile = kv.get_double("detection.quantile", 0.99);
    d.node_ripple_db = kv.get_double("detection.node_ripple_db", 0.5);
    d.relay_offset_db = kv.get_double("detection.relay_offset_db", 2.0);
    d.relay_ripple_db = kv.get_double("detection.relay_ripple_db", 0.5);
    if (!(d.quantile > 0.0 && d.quantile < 1.0))
        fail(ErrorKind::Config, "detection.quantile must lie in (0, 1)");

    c.grid.d_m = kv.get_doubles("grid.d_m", c.grid.d_m);
    c.grid.d_set_m = kv.get_doubles("grid.d_set_m", c.grid.d_set_m);

    OtaSpec& o = c.ota;
    o.a_offset_m = kv.get_double("ota.a_offset_m", o.a_offset_m);
    o.span_m = kv.get_double("ota.span_m", o.span_m);
    o.b_m = kv.get_doubles("ota.b_m", o.b_m);
    o.d_set_m = kv.get_double("ota.d_set_m", o.d_set_m);
    o.obstruction_db = kv.get_double("ota.obstruction_db", o.obstruction_db);
    o.sensitivity_dbm = kv.get_double("ota.sensitivity_dbm", o.sensitivity_dbm);

    ReciprocitySpec& rc = c.reciprocity;
    rc.separation_m = kv.get_double("reciprocity.separation_m", rc.separation_m);
    rc.legit_distance_m = kv.get_double("reciprocity.legit_distance_m", rc.legit_distance_m);
    rc.relay_offset_m = kv.get_double("reciprocity.relay_offset_m", rc.relay_offset_m);
    rc.d_set_m = kv.get_double("reciprocity.d_set_m", rc.d_set_m);
    rc.equalized_arm = kv.get_bool("reciprocity.equalized_arm", rc.equalized_arm);
    if (!(2.0 * rc.relay_offset_m < rc.separation_m))
        fail(ErrorKind::Config, "relay antennas must sit between the nodes");

    RssSpec& s = c.rss;
    s.model.tx_power_dbm = kv.get_double("rss.tx_power_dbm", 0.0);
    s.model.channel.exponent = kv.get_double("rss.exponent", 2.0);
    s.model.channel.ref_loss_db = kv.get_double("rss.ref_loss_db", 40.0);
    s.model.channel.validate();
    s.model.f_hz = kv.get_double("rss.f_hz", 2.44e9);
    s.model.car_antenna_m = kv.get_double("rss.car_antenna_m", 0.2);
    s.model.relay_gain_db = kv.get_double("rss.relay_gain_db", 75.0);
    s.model.relay_link_loss_db = kv.get_double("rss.link_loss_db", 50.0);
    s.unlock_dbm = kv.get_auto_double("rss.unlock_dbm");
    s.lock_dbm = kv.get_auto_double("rss.lock_dbm");
    s.engine_dbm = kv.get_auto_double("rss.engine_dbm");
    s.calib_unlock_m = kv.get_double("rss.calib_unlock_m", 5.0);
    s.calib_lock_m = kv.get_double("rss.calib_lock_m", 13.0);
    s.calib_engine_m = kv.get_double("rss.calib_engine_m", 2.0);
    s.min_distance_m = kv.get_double("rss.min_distance_m", 0.5);
    s.max_distance_m = kv.get_double("rss.max_distance_m", 70.0);
    s.step_m = kv.get_double("rss.step_m", 0.1);
    {
        std::string def;
        for (const BodyPreset& b : default_body_presets())
            def += (def.empty() ? "" : ",") + b.name + ":" + format_shortest(b.shadow_db);
        s.presets = parse_presets(kv.get_string("rss.presets", def));
    }
    if (!(s.step_m > 0.0) || !(s.min_distance_m > 0.0) || s.max_distance_m < s.min_distance_m)
        fail(ErrorKind::Config, "rss distance sweep needs 0 < min <= max and a positive step");

    kv.reject_unused();
    c.echo = kv.resolved();
    return c;
}

std::map<std::string, CellSummary> summarize(const std::vector<ResultRow>& rows)
{
    std::map<std::string, std::vector<double>> cells;
    for (const ResultRow& r : rows)
        if (std::isfinite(r.d_est_m))
            cells[r.scenario_id].push_back(r.d_est_m);

    std::map<std::string, CellSummary> out;
    for (const auto& [id, v] : cells) {
        CellSummary s;
        s.count = v.size();
        double sum = 0.0;
        for (double x : v)
            sum += x;
        s.mean = sum / static_cast<double>(v.size());
        double ss = 0.0;
        for (double x : v)
            ss += (x - s.mean) * (x - s.mean);
        s.sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
        s.min = *std::min_element(v.begin(), v.end());
        s.max = *std::max_element(v.begin(), v.end());
        out[id] = s;
    }
    return out;
}

SessionSetup base_setup(const ScenarioConfig& cfg)
{
    SessionSetup s;
    s.sweep = cfg.sweep;
    s.channel = cfg.channel;
    s.relay = cfg.relay;
    s.noise = cfg.noise;
    s.a_tx_power_dbm = cfg.node_tx_power_dbm;
    s.a_wired_power_dbm = cfg.a_wired_power_dbm;
    s.plan = cfg.plan;
    s.program.f_step_hz = cfg.sweep.f_step_hz;
    s.program.inference = cfg.program.inference;
    return s;
}

namespace {

std::uint64_t stream_id(std::string_view id)
{
    std::uint64_t h = 0xcbf29ce484222325ULL; // FNV-1a
    for (unsigned char ch : id) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& body)
{
    threads = std::min(threads, n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(threads);
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                try {
                    for (std::size_t i = t; i < n; i += threads)
                        body(i);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

void enable_program(SessionSetup& s, const ScenarioConfig& cfg, double d_set_m)
{
    s.program.enabled = cfg.program.enabled;
    s.program.d_set_m = d_set_m;
    s.program.believed_d_m = cfg.program.believed_d_m.value_or(self_compensated_distance(s));
}

/// Runs every repetition of one cell; `fill` completes each row.
template <class Fill>
std::vector<SessionResult> run_cell(const ScenarioConfig& cfg, const SessionSetup& setup,
                                    const std::string& id, ScenarioResult& out, Fill fill)
{
    std::vector<SessionResult> results(cfg.repetitions);
    const std::uint64_t stream = stream_id(id);
    parallel_for(cfg.repetitions, cfg.threads, [&](std::size_t rep) {
        Rng rng = make_rng(cfg.seed, stream, rep);
        SessionSetup s = setup;
        if (cfg.random_hopping)
            s.sweep = with_random_hopping(s.sweep, rng);
        s.plan.miss_pattern = std::find(cfg.missed_pattern_reps.begin(), cfg.missed_pattern_reps.end(), rep)
                              != cfg.missed_pattern_reps.end();
        results[rep] = run_session(s, rng);
        results[rep].timeline.reset();
    });
    for (std::size_t rep = 0; rep < results.size(); ++rep) {
        ResultRow row;
        row.scenario_id = id;
        row.rep = rep;
        row.d_est_m = results[rep].estimate.mean_m;
        const SweepObservation& obs = results[rep].observation;
        row.dissimilarity = results[rep].failed
                                ? kNoValue
                                : reciprocity_dissimilarity(obs.mag_ab, obs.mag_ba, cfg.detection.domain);
        fill(row, results[rep]);
        out.rows.push_back(std::move(row));
    }
    return results;
}

ScenarioResult start_result(const ScenarioConfig& cfg, Experiment e)
{
    ScenarioResult r;
    r.experiment = e;
    r.seed = cfg.seed;
    r.config_echo = cfg.echo;
    return r;
}

Geometry grid_geometry(double d)
{
    // A is cabled to the primary port; only the B leg is over the air.
    Geometry g;
    g.node_a = {0.0, 0.0};
    g.relay_primary = {0.0, 0.0};
    g.relay_secondary = {0.0, 0.0};
    g.node_b = {d, 0.0};
    return g;
}

} // namespace

ScenarioResult run_manipulation_sweep(const ScenarioConfig& cfg)
{
    ScenarioResult out = start_result(cfg, Experiment::Sweep);
    for (double d : cfg.grid.d_m) {
        const std::string prefix = "sweep/d=" + format_shortest(d);
        SessionSetup s = base_setup(cfg);
        s.geometry = grid_geometry(d);

        s.mode = LinkMode::Direct;
        run_cell(cfg, s, prefix + "/direct", out, [&](ResultRow& row, const SessionResult&) { row.d_true_m = d; });

        s.mode = LinkMode::Bidirectional;
        s.a_wired = true;
        run_cell(cfg, s, prefix + "/off", out, [&](ResultRow& row, const SessionResult&) { row.d_true_m = d; });

        for (double d_set : cfg.grid.d_set_m) {
            SessionSetup m = s;
            enable_program(m, cfg, d_set);
            run_cell(cfg, m, prefix + "/set=" + format_shortest(d_set), out,
                     [&](ResultRow& row, const SessionResult&) {
                         row.d_true_m = d;
                         row.d_set_m = d_set;
                     });
        }
    }
    out.summary = summarize(out.rows);
    return out;
}

ScenarioResult run_ota_relay(const ScenarioConfig& cfg)
{
    ScenarioResult out = start_result(cfg, Experiment::Ota);
    const OtaSpec& o = cfg.ota;
    for (double b : o.b_m) {
        SessionSetup s = base_setup(cfg);
        s.mode = LinkMode::Bidirectional;
        s.relay.span_m = o.span_m;
        s.geometry.node_a = {0.0, 0.0};
        s.geometry.relay_primary = {o.a_offset_m, 0.0};
        s.geometry.relay_secondary = {o.a_offset_m + o.span_m, 0.0};
        s.geometry.node_b = {o.a_offset_m + o.span_m + b, 0.0};

        const double d_ab = s.geometry.distance(Antenna::NodeA, Antenna::NodeB);
        const double direct_dbm = cfg.node_tx_power_dbm
                                  + amplitude_to_db(path_gain(s.channel, d_ab, s.sweep.f_start_hz).magnitude)
                                  - o.obstruction_db;
        if (direct_dbm >= o.sensitivity_dbm)
            fail(ErrorKind::Config, "OTA geometry leaves the nodes within direct range ("
                                        + format_number(direct_dbm, 1) + " dBm)");

        const std::string prefix = "ota/b=" + format_shortest(b);
        const double total = o.a_offset_m + o.span_m + b;
        run_cell(cfg, s, prefix + "/off", out, [&](ResultRow& row, const SessionResult&) { row.d_true_m = total; });

        enable_program(s, cfg, o.d_set_m);
        run_cell(cfg, s, prefix + "/on", out, [&](ResultRow& row, const SessionResult&) {
            row.d_true_m = total;
            row.d_set_m = o.d_set_m;
        });
    }
    out.summary = summarize(out.rows);
    return out;
}

ScenarioResult run_reciprocity_experiment(const ScenarioConfig& cfg)
{
    if (cfg.repetitions < 30)
        fail(ErrorKind::Config, "the reciprocity experiment needs at least 30 repetitions per arm");
    ScenarioResult out = start_result(cfg, Experiment::Reciprocity);
    const ReciprocitySpec& rc = cfg.reciprocity;
    const std::size_t n = cfg.sweep.count;

    // Hardware is fixed for the whole scenario and shared by every arm.
    Rng hw_rng = make_rng(cfg.seed, stream_id("hardware/nodes"));
    const NodeHardware nodes = NodeHardware::draw(n, cfg.detection.node_ripple_db, hw_rng);
    Rng relay_rng = make_rng(cfg.seed, stream_id("hardware/relay"));
    RelayConfig relay = cfg.relay;
    draw_relay_paths(relay, n, cfg.detection.relay_offset_db, cfg.detection.relay_ripple_db, relay_rng);

    SessionSetup legit = base_setup(cfg);
    legit.nodes = nodes;
    legit.geometry.node_a = {0.0, 0.0};
    legit.geometry.node_b = {rc.legit_distance_m, 0.0};
    legit.mode = LinkMode::Direct;

    SessionSetup attack = base_setup(cfg);
    attack.nodes = nodes;
    attack.relay = relay;
    attack.geometry.node_a = {0.0, 0.0};
    attack.geometry.node_b = {rc.separation_m, 0.0};
    attack.geometry.relay_primary = {rc.relay_offset_m, 0.0};
    attack.geometry.relay_secondary = {rc.separation_m - rc.relay_offset_m, 0.0};

    SessionSetup uni = attack;
    uni.mode = LinkMode::Unidirectional;
    uni.relay.phase_path = Direction::AtoB;
    enable_program(uni, cfg, rc.d_set_m);

    SessionSetup bi = attack;
    bi.mode = LinkMode::Bidirectional;
    enable_program(bi, cfg, rc.d_set_m);

    struct Arm {
        std::string name;
        SessionSetup setup;
        double d_true;
        double d_set;
    };
    std::vector<Arm> arms{{"legit", legit, rc.legit_distance_m, kNoValue},
                          {"uni", uni, rc.separation_m, rc.d_set_m},
                          {"bi", bi, rc.separation_m, rc.d_set_m}};
    if (rc.equalized_arm) {
        SessionSetup eq = bi;
        std::vector<double> fwd(n), rev(n);
        for (std::size_t i = 0; i < n; ++i) {
            fwd[i] = db_to_amplitude(relay.gain_ab_db + relay.path_response_ab_db[i]);
            rev[i] = db_to_amplitude(relay.gain_ba_db + relay.path_response_ba_db[i]);
        }
        const EqualizationProfile profile = equalization_profile(fwd, rev, relay.attenuator);
        eq.program.beta_db = profile.beta_db;
        eq.equalize = true;
        out.metrics["equalizer_out_of_range"] =
            static_cast<double>(std::count(profile.out_of_range.begin(), profile.out_of_range.end(), true));
        arms.push_back({"bi_eq", eq, rc.separation_m, rc.d_set_m});
    }

    std::map<std::string, std::vector<double>> samples;
    for (const Arm& arm : arms) {
        const std::string id = "reciprocity/" + arm.name;
        run_cell(cfg, arm.setup, id, out, [&](ResultRow& row, const SessionResult&) {
            row.d_true_m = arm.d_true;
            row.d_set_m = arm.d_set;
            if (std::isfinite(row.dissimilarity))
                samples[arm.name].push_back(row.dissimilarity);
        });
    }

    const double eps = calibrate_epsilon(samples["legit"], cfg.detection.quantile);
    std::map<std::string, std::size_t> flagged;
    for (ResultRow& row : out.rows) {
        if (!std::isfinite(row.dissimilarity))
            continue;
        const bool attack_verdict = row.dissimilarity > eps;
        row.verdict = attack_verdict ? "attack" : "clean";
        if (attack_verdict)
            ++flagged[row.scenario_id];
    }

    out.metrics["epsilon"] = eps;
    for (const Arm& arm : arms) {
        const auto& v = samples[arm.name];
        out.metrics["median/" + arm.name] = median(v);
        out.metrics["detect_rate/" + arm.name] =
            static_cast<double>(flagged["reciprocity/" + arm.name]) / static_cast<double>(v.size());
    }
    out.metrics["ks/bi_vs_legit"] = ks_statistic(samples["bi"], samples["legit"]);
    out.metrics["ks_critical"] = ks_critical_value(samples["legit"].size(), samples["bi"].size());
    if (rc.equalized_arm)
        out.metrics["ks/bi_eq_vs_legit"] = ks_statistic(samples["bi_eq"], samples["legit"]);
    out.summary = summarize(out.rows);
    return out;
}

ScenarioResult run_rss_access(const ScenarioConfig& cfg)
{
    ScenarioResult out = start_result(cfg, Experiment::Rss);
    const RssSpec& s = cfg.rss;
    const RssThresholds calibrated =
        calibrate_rss_thresholds(s.model, s.calib_unlock_m, s.calib_lock_m, s.calib_engine_m);
    const RssThresholds t{s.unlock_dbm.value_or(calibrated.unlock_dbm), s.lock_dbm.value_or(calibrated.lock_dbm),
                          s.engine_dbm.value_or(calibrated.engine_dbm)};
    if (!(t.lock_dbm < t.unlock_dbm && t.unlock_dbm <= t.engine_dbm))
        fail(ErrorKind::Config, "RSS thresholds need lock < unlock <= engine");
    out.metrics["threshold/unlock_dbm"] = t.unlock_dbm;
    out.metrics["threshold/lock_dbm"] = t.lock_dbm;
    out.metrics["threshold/engine_dbm"] = t.engine_dbm;

    const auto steps = static_cast<std::size_t>(std::llround((s.max_distance_m - s.min_distance_m) / s.step_m));
    auto distance = [&](std::size_t k) { return s.min_distance_m + static_cast<double>(k) * s.step_m; };

    for (const BodyPreset& preset : s.presets) {
        for (bool relayed : {false, true}) {
            const std::string cell = preset.name + (relayed ? "/relay" : "/direct");
            AccessController ctl(t);
            double unlock_m = kNoValue;
            double engine_m = kNoValue;
            double lock_m = kNoValue;
            auto visit = [&](const std::string& phase, std::size_t rep, std::size_t k) {
                const double d = distance(k);
                const double rss = relayed ? rss_relayed(s.model, d, preset.shadow_db)
                                           : rss_direct(s.model, d, preset.shadow_db);
                const AccessState st = ctl.step(rss);
                if (phase == "approach") {
                    if (st != AccessState::Locked && std::isnan(unlock_m))
                        unlock_m = d;
                    if (st == AccessState::EngineReady && std::isnan(engine_m))
                        engine_m = d;
                } else if (st == AccessState::Locked && std::isnan(lock_m)) {
                    lock_m = d;
                }
                ResultRow row;
                row.scenario_id = "rss/" + cell + "/" + phase;
                row.rep = rep;
                row.d_true_m = d;
                row.rss_dbm = rss;
                row.decision = std::string(to_string(st));
                out.rows.push_back(std::move(row));
            };
            for (std::size_t i = 0; i <= steps; ++i)
                visit("approach", i, steps - i);
            for (std::size_t k = 0; k <= steps; ++k)
                visit("depart", k, k);
            out.metrics["unlock_m/" + cell] = unlock_m;
            out.metrics["engine_m/" + cell] = engine_m;
            out.metrics["lock_m/" + cell] = lock_m;
        }
    }
    return out;
}

ScenarioResult run_experiment(const ScenarioConfig& cfg)
{
    switch (cfg.experiment) {
    case Experiment::Sweep: return run_manipulation_sweep(cfg);
    case Experiment::Ota: return run_ota_relay(cfg);
    case Experiment::Reciprocity: return run_reciprocity_experiment(cfg);
    case Experiment::Rss: return run_rss_access(cfg);
    case Experiment::TddTrace: break;
    }
    fail(ErrorKind::Config, "tdd-trace produces a trace, not a result table");
}

Timeline run_tdd_trace(const ScenarioConfig& cfg)
{
    if (cfg.grid.d_m.empty() || cfg.grid.d_set_m.empty())
        fail(ErrorKind::Config, "tdd-trace uses the first grid cell; grid.d_m and grid.d_set_m must be non-empty");
    SessionSetup s = base_setup(cfg);
    s.geometry = grid_geometry(cfg.grid.d_m.front());
    s.mode = LinkMode::Bidirectional;
    s.a_wired = true;
    enable_program(s, cfg, cfg.grid.d_set_m.front());
    s.plan.miss_pattern = false;
    Rng rng = make_rng(cfg.seed, stream_id("tdd-trace"));
    SessionResult r = run_session(s, rng);
    return std::move(*r.timeline);
}

void write_csv(const ScenarioResult& result, std::ostream& out)
{
    out << "scenario_id,rep,d_true_m,d_set_m,d_est_m,dissimilarity,verdict,rss_dbm,decision,seed\n";
    for (const ResultRow& r : result.rows)
        out << r.scenario_id << ',' << r.rep << ',' << format_number(r.d_true_m) << ','
            << format_number(r.d_set_m) << ',' << format_number(r.d_est_m) << ','
            << format_number(r.dissimilarity) << ',' << r.verdict << ',' << format_number(r.rss_dbm) << ','
            << r.decision << ',' << result.seed << '\n';
}

void emit_csv(const ScenarioResult& result, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        fail(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
    write_csv(result, out);
    out.flush();
    if (!out)
        fail(ErrorKind::Io, "write failed for '" + path.string() + "'");
}

} // namespace relaysim
