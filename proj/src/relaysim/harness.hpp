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

#include "config.hpp"
#include "detection.hpp"
#include "rss.hpp"
#include "session.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace relaysim {

enum class Experiment { Sweep, Ota, Reciprocity, Rss, TddTrace };

std::string_view to_string(Experiment e);
Experiment experiment_from_string(std::string_view s);

struct ProgramSpec {
    bool enabled = true;
    std::optional<double> believed_d_m; // nullopt: self-compensated
    FrequencyInference inference = FrequencyInference::CountBased;
};

struct GridSpec {
    std::vector<double> d_m{5.0, 10.0, 23.0};
    std::vector<double> d_set_m{1.0, 5.0, 10.0, 25.0, 50.0};
};

struct OtaSpec {
    double a_offset_m = 1.0;
    double span_m = 86.0;
    std::vector<double> b_m{1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
    double d_set_m = 2.0;
    double obstruction_db = 60.0;   // NLOS loss on the direct A-B path
    double sensitivity_dbm = -95.0; // receiver sensitivity of the nodes
};

struct ReciprocitySpec {
    double separation_m = 15.0;
    double legit_distance_m = 2.0;
    double relay_offset_m = 1.0; // each relay antenna this far from its node
    double d_set_m = 2.0;
    bool equalized_arm = true;
};

struct DetectionSpec {
    MetricDomain domain = MetricDomain::Db;
    double quantile = 0.99;
    double node_ripple_db = 0.5;
    double relay_offset_db = 2.0;
    double relay_ripple_db = 0.5;
};

struct RssSpec {
    RssModel model;
    std::optional<double> unlock_dbm;
    std::optional<double> lock_dbm;
    std::optional<double> engine_dbm;
    double calib_unlock_m = 5.0;
    double calib_lock_m = 13.0;
    double calib_engine_m = 2.0;
    double min_distance_m = 0.5;
    double max_distance_m = 70.0;
    double step_m = 0.1;
    std::vector<BodyPreset> presets = default_body_presets();
};

/// Fully resolved scenario. Every field has a documented default; `echo`
/// holds the resolved key/value text.
struct ScenarioConfig {
    Experiment experiment = Experiment::Sweep;
    std::uint64_t seed = 0;
    std::size_t repetitions = 100;
    std::size_t threads = 1;

    ToneSweep sweep;
    bool random_hopping = false;
    ChannelModelSpec channel;
    SweepNoise noise{0.05, 0.0};
    RelayConfig relay;
    ProgramSpec program;
    double node_tx_power_dbm = 4.0;
    double a_wired_power_dbm = -30.0;
    TimelinePlan plan;
    std::vector<std::size_t> missed_pattern_reps;

    DetectionSpec detection;
    GridSpec grid;
    OtaSpec ota;
    ReciprocitySpec reciprocity;
    RssSpec rss;

    std::string echo;
};

/// Reads every known key (with defaults) and rejects unknown ones.
ScenarioConfig load_scenario(const KeyValueConfig& kv);

inline constexpr double kNoValue = std::numeric_limits<double>::quiet_NaN();

/// One CSV row. NaN / empty fields render as empty cells.
struct ResultRow {
    std::string scenario_id;
    std::size_t rep = 0;
    double d_true_m = kNoValue;
    double d_set_m = kNoValue;
    double d_est_m = kNoValue;
    double dissimilarity = kNoValue;
    std::string verdict;
    double rss_dbm = kNoValue;
    std::string decision;
};

struct CellSummary {
    std::size_t count = 0;
    double mean = 0.0;
    double sd = 0.0;
    double min = 0.0;
    double max = 0.0;
};

struct ScenarioResult {
    Experiment experiment = Experiment::Sweep;
    std::uint64_t seed = 0;
    std::vector<ResultRow> rows;
    std::map<std::string, CellSummary> summary; // d_est_m per scenario_id
    std::map<std::string, double> metrics;      // experiment-level figures
    std::string config_echo;
};

/// Distance-estimate statistics per scenario_id (finite estimates only).
std::map<std::string, CellSummary> summarize(const std::vector<ResultRow>& rows);

ScenarioResult run_manipulation_sweep(const ScenarioConfig& cfg);
ScenarioResult run_ota_relay(const ScenarioConfig& cfg);
ScenarioResult run_reciprocity_experiment(const ScenarioConfig& cfg);
ScenarioResult run_rss_access(const ScenarioConfig& cfg);
ScenarioResult run_experiment(const ScenarioConfig& cfg);

/// Detector/switch trace of one attacked sweep (first grid cell).
Timeline run_tdd_trace(const ScenarioConfig& cfg);

/// Session template shared by the experiments (sweep, relay, noise, plan).
SessionSetup base_setup(const ScenarioConfig& cfg);

void write_csv(const ScenarioResult& result, std::ostream& out);
void emit_csv(const ScenarioResult& result, const std::filesystem::path& path);

} // namespace relaysim
