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

#include "relaysim/relaysim.h"

#include "relaysim/config.hpp"
#include "relaysim/detection.hpp"
#include "relaysim/error.hpp"
#include "relaysim/harness.hpp"
#include "relaysim/mcpr.hpp"
#include "relaysim/relay.hpp"
#include "relaysim/tdd.hpp"

#include <cstring>
#include <exception>
#include <fstream>
#include <memory>
#include <new>
#include <span>
#include <sstream>
#include <string>

struct rs_scenario {
    relaysim::KeyValueConfig kv;
    std::string resolved;
};

struct rs_result {
    relaysim::ScenarioResult result;
    std::vector<std::string> cell_ids;
    std::vector<std::string> metric_names;
};

namespace {

thread_local std::string g_last_error;

rs_status set_error(rs_status status, const char* message)
{
    g_last_error = message;
    return status;
}

rs_status map_kind(relaysim::ErrorKind kind)
{
    switch (kind) {
    case relaysim::ErrorKind::InvalidArgument: return RS_ERR_INVALID_ARGUMENT;
    case relaysim::ErrorKind::Config: return RS_ERR_CONFIG;
    case relaysim::ErrorKind::Io: return RS_ERR_IO;
    case relaysim::ErrorKind::Simulation: return RS_ERR_SIMULATION;
    }
    return RS_ERR_INTERNAL;
}

template <class F>
rs_status guarded(F&& body)
{
    try {
        body();
        g_last_error.clear();
        return RS_OK;
    } catch (const relaysim::Error& e) {
        return set_error(map_kind(e.kind()), e.what());
    } catch (const std::bad_alloc&) {
        return set_error(RS_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return set_error(RS_ERR_INTERNAL, e.what());
    } catch (...) {
        return set_error(RS_ERR_INTERNAL, "unknown error");
    }
}

void require(bool ok, const char* what)
{
    if (!ok)
        relaysim::fail(relaysim::ErrorKind::InvalidArgument, what);
}

relaysim::ScenarioConfig scenario_for(const rs_scenario* s, const char* experiment)
{
    relaysim::KeyValueConfig kv = s->kv;
    if (experiment)
        kv.set("experiment", experiment);
    return relaysim::load_scenario(kv);
}

} // namespace

extern "C" {

const char* rs_version(void) { return "1.0.0"; }

const char* rs_last_error(void) { return g_last_error.c_str(); }

const char* rs_status_name(rs_status status)
{
    switch (status) {
    case RS_OK: return "ok";
    case RS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case RS_ERR_CONFIG: return "configuration error";
    case RS_ERR_IO: return "i/o error";
    case RS_ERR_SIMULATION: return "simulation error";
    case RS_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

rs_status rs_scenario_load_file(const char* path, rs_scenario** out)
{
    return guarded([&] {
        require(path && out, "null argument");
        *out = nullptr;
        auto s = std::make_unique<rs_scenario>();
        s->kv = relaysim::KeyValueConfig::load(path);
        *out = s.release();
    });
}

rs_status rs_scenario_parse(const char* text, rs_scenario** out)
{
    return guarded([&] {
        require(text && out, "null argument");
        *out = nullptr;
        auto s = std::make_unique<rs_scenario>();
        s->kv = relaysim::KeyValueConfig::parse(text);
        *out = s.release();
    });
}

rs_status rs_scenario_set(rs_scenario* scenario, const char* key, const char* value)
{
    return guarded([&] {
        require(scenario && key && value, "null argument");
        scenario->kv.set(key, value);
    });
}

rs_status rs_scenario_resolved(rs_scenario* scenario, const char** text)
{
    return guarded([&] {
        require(scenario && text, "null argument");
        scenario->resolved = scenario_for(scenario, nullptr).echo;
        *text = scenario->resolved.c_str();
    });
}

void rs_scenario_free(rs_scenario* scenario) { delete scenario; }

rs_status rs_run(rs_scenario* scenario, const char* experiment, rs_result** out)
{
    return guarded([&] {
        require(scenario && out, "null argument");
        *out = nullptr;
        auto r = std::make_unique<rs_result>();
        r->result = relaysim::run_experiment(scenario_for(scenario, experiment));
        for (const auto& [id, cell] : r->result.summary)
            r->cell_ids.push_back(id);
        for (const auto& [name, value] : r->result.metrics)
            r->metric_names.push_back(name);
        *out = r.release();
    });
}

void rs_result_free(rs_result* result) { delete result; }

rs_status rs_result_row_count(const rs_result* result, size_t* count)
{
    return guarded([&] {
        require(result && count, "null argument");
        *count = result->result.rows.size();
    });
}

rs_status rs_result_write_csv(const rs_result* result, const char* path)
{
    return guarded([&] {
        require(result && path, "null argument");
        relaysim::emit_csv(result->result, path);
    });
}

rs_status rs_result_csv(const rs_result* result, char* buffer, size_t capacity, size_t* needed)
{
    return guarded([&] {
        require(result && needed, "null argument");
        std::ostringstream os;
        relaysim::write_csv(result->result, os);
        const std::string text = os.str();
        *needed = text.size() + 1;
        if (buffer && capacity >= *needed)
            std::memcpy(buffer, text.c_str(), *needed);
        else if (buffer)
            relaysim::fail(relaysim::ErrorKind::InvalidArgument, "buffer too small for CSV");
    });
}

rs_status rs_result_config_echo(const rs_result* result, const char** text)
{
    return guarded([&] {
        require(result && text, "null argument");
        *text = result->result.config_echo.c_str();
    });
}

rs_status rs_result_cell_count(const rs_result* result, size_t* count)
{
    return guarded([&] {
        require(result && count, "null argument");
        *count = result->cell_ids.size();
    });
}

namespace {

void copy_cell(const relaysim::CellSummary& c, size_t* count, double* mean, double* sd, double* min, double* max)
{
    if (count) *count = c.count;
    if (mean) *mean = c.mean;
    if (sd) *sd = c.sd;
    if (min) *min = c.min;
    if (max) *max = c.max;
}

} // namespace

rs_status rs_result_cell(const rs_result* result, size_t index, const char** scenario_id, size_t* count,
                         double* mean, double* sd, double* min, double* max)
{
    return guarded([&] {
        require(result, "null argument");
        require(index < result->cell_ids.size(), "cell index out of range");
        const std::string& id = result->cell_ids[index];
        if (scenario_id)
            *scenario_id = id.c_str();
        copy_cell(result->result.summary.at(id), count, mean, sd, min, max);
    });
}

rs_status rs_result_cell_by_id(const rs_result* result, const char* scenario_id, size_t* count, double* mean,
                               double* sd, double* min, double* max)
{
    return guarded([&] {
        require(result && scenario_id, "null argument");
        const auto it = result->result.summary.find(scenario_id);
        if (it == result->result.summary.end())
            relaysim::fail(relaysim::ErrorKind::InvalidArgument, std::string("no cell '") + scenario_id + "'");
        copy_cell(it->second, count, mean, sd, min, max);
    });
}

rs_status rs_result_metric_count(const rs_result* result, size_t* count)
{
    return guarded([&] {
        require(result && count, "null argument");
        *count = result->metric_names.size();
    });
}

rs_status rs_result_metric(const rs_result* result, size_t index, const char** name, double* value)
{
    return guarded([&] {
        require(result && value, "null argument");
        require(index < result->metric_names.size(), "metric index out of range");
        const std::string& n = result->metric_names[index];
        if (name)
            *name = n.c_str();
        *value = result->result.metrics.at(n);
    });
}

rs_status rs_result_metric_by_name(const rs_result* result, const char* name, double* value)
{
    return guarded([&] {
        require(result && name && value, "null argument");
        const auto it = result->result.metrics.find(name);
        if (it == result->result.metrics.end())
            relaysim::fail(relaysim::ErrorKind::InvalidArgument, std::string("no metric '") + name + "'");
        *value = it->second;
    });
}

rs_status rs_write_tdd_trace(rs_scenario* scenario, const char* path)
{
    return guarded([&] {
        require(scenario && path, "null argument");
        const relaysim::Timeline t = relaysim::run_tdd_trace(scenario_for(scenario, "tdd-trace"));
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            relaysim::fail(relaysim::ErrorKind::Io, std::string("cannot open '") + path + "' for writing");
        relaysim::write_trace_csv(t.trace, out);
        if (!out.flush())
            relaysim::fail(relaysim::ErrorKind::Io, std::string("write failed for '") + path + "'");
    });
}

rs_status rs_unambiguous_range(double f_step_hz, double* range_m)
{
    return guarded([&] {
        require(range_m, "null argument");
        *range_m = relaysim::unambiguous_range(f_step_hz);
    });
}

rs_status rs_required_phase_slope(double d_set_m, double d_m, double f_step_hz, double* slope_rad)
{
    return guarded([&] {
        require(slope_rad, "null argument");
        *slope_rad = relaysim::required_phase_slope(d_set_m, d_m, f_step_hz);
    });
}

rs_status rs_estimate_distance(const double* phase_rad, size_t count, double f_step_hz, double* distance_m)
{
    return guarded([&] {
        require(phase_rad && distance_m, "null argument");
        relaysim::ToneSweep sweep;
        sweep.count = count;
        sweep.f_step_hz = f_step_hz;
        sweep.validate();
        relaysim::SweepObservation obs;
        obs.phase_rad.assign(phase_rad, phase_rad + count);
        obs.mag_ab.assign(count, 1.0);
        obs.mag_ba.assign(count, 1.0);
        *distance_m = relaysim::estimate_distance(obs, sweep).mean_m;
    });
}

rs_status rs_clipped_fraction(double duration_us, double reaction_us, double* fraction)
{
    return guarded([&] {
        require(fraction, "null argument");
        relaysim::RelayConfig cfg;
        cfg.reaction_us = reaction_us;
        cfg.validate();
        relaysim::TxEvent ev;
        ev.source = relaysim::Source::A;
        ev.start_us = 0.0;
        ev.duration_us = duration_us;
        ev.power_dbm = cfg.threshold_dbm + 10.0;
        const relaysim::Timeline t = relaysim::simulate_timeline(std::span(&ev, 1), cfg);
        *fraction = t.outcomes.front().lost_fraction;
    });
}

rs_status rs_reciprocity_dissimilarity(const double* mag_ab, const double* mag_ba, size_t count, int linear_domain,
                                       double* value)
{
    return guarded([&] {
        require(mag_ab && mag_ba && value, "null argument");
        *value = relaysim::reciprocity_dissimilarity(
            std::span(mag_ab, count), std::span(mag_ba, count),
            linear_domain ? relaysim::MetricDomain::Linear : relaysim::MetricDomain::Db);
    });
}

rs_status rs_calibrate_epsilon(const double* samples, size_t count, double quantile, double* epsilon)
{
    return guarded([&] {
        require(samples && epsilon, "null argument");
        *epsilon = relaysim::calibrate_epsilon(std::span(samples, count), quantile);
    });
}

} // extern "C"
