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

// Command-line front end. Links only the C interface.

#include "relaysim/relaysim.h"

#include "CLI11.hpp"

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

struct Options {
    std::string scenario;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> reps;
    std::optional<std::uint64_t> threads;
    std::string out = ".";
};

struct ScenarioHandle {
    rs_scenario* p = nullptr;
    ~ScenarioHandle() { rs_scenario_free(p); }
};

struct ResultHandle {
    rs_result* p = nullptr;
    ~ResultHandle() { rs_result_free(p); }
};

bool check(rs_status st)
{
    if (st == RS_OK)
        return true;
    std::cerr << "relaysim: " << rs_status_name(st) << ": " << rs_last_error() << '\n';
    return false;
}

int run(const std::string& command, const Options& opt)
{
    ScenarioHandle sc;
    if (!check(rs_scenario_load_file(opt.scenario.c_str(), &sc.p)))
        return 2;
    if (opt.seed && !check(rs_scenario_set(sc.p, "seed", std::to_string(*opt.seed).c_str())))
        return 2;
    if (opt.reps && !check(rs_scenario_set(sc.p, "repetitions", std::to_string(*opt.reps).c_str())))
        return 2;
    if (opt.threads && !check(rs_scenario_set(sc.p, "run.threads", std::to_string(*opt.threads).c_str())))
        return 2;
    if (!check(rs_scenario_set(sc.p, "experiment", command.c_str())))
        return 2;

    std::error_code ec;
    std::filesystem::create_directories(opt.out, ec);
    if (ec) {
        std::cerr << "relaysim: cannot create output directory '" << opt.out << "': " << ec.message() << '\n';
        return 2;
    }
    const std::filesystem::path dir(opt.out);
    const std::string stem = command == "tdd-trace" ? "tdd_trace" : command;

    const char* echo = nullptr;
    if (!check(rs_scenario_resolved(sc.p, &echo)))
        return 2;
    {
        std::ofstream cfg(dir / (stem + ".config"), std::ios::binary | std::ios::trunc);
        cfg << echo;
        if (!cfg) {
            std::cerr << "relaysim: cannot write config echo to '" << opt.out << "'\n";
            return 2;
        }
    }

    const std::string csv = (dir / (stem + ".csv")).string();
    if (command == "tdd-trace") {
        if (!check(rs_write_tdd_trace(sc.p, csv.c_str())))
            return 1;
        std::cout << "wrote " << csv << '\n';
        return 0;
    }

    ResultHandle res;
    if (!check(rs_run(sc.p, nullptr, &res.p)))
        return 1;
    if (!check(rs_result_write_csv(res.p, csv.c_str())))
        return 1;

    size_t rows = 0, cells = 0, metrics = 0;
    rs_result_row_count(res.p, &rows);
    rs_result_cell_count(res.p, &cells);
    rs_result_metric_count(res.p, &metrics);
    for (size_t i = 0; i < cells; ++i) {
        const char* id = nullptr;
        size_t n = 0;
        double mean = 0, sd = 0, lo = 0, hi = 0;
        rs_result_cell(res.p, i, &id, &n, &mean, &sd, &lo, &hi);
        std::printf("%-32s n=%-4zu mean=%9.3f m  sd=%7.3f m\n", id, n, mean, sd);
    }
    for (size_t i = 0; i < metrics; ++i) {
        const char* name = nullptr;
        double v = 0;
        rs_result_metric(res.p, i, &name, &v);
        std::printf("%-32s %.6g\n", name, v);
    }
    std::cout << "wrote " << rows << " rows to " << csv << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"relaysim: relay attack simulator for multi-carrier phase-based ranging"};
    app.require_subcommand(1);
    Options opt;

    const std::vector<std::pair<std::string, std::string>> commands{
        {"sweep", "distance manipulation grid over (d, d_set)"},
        {"ota", "over-the-air relay with a long cable span"},
        {"reciprocity", "channel reciprocity check against relay arms"},
        {"rss", "RSS-based keyless entry with and without relay"},
        {"tdd-trace", "detector and switch trace of one attacked sweep"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--scenario", opt.scenario, "scenario file")->required()->check(CLI::ExistingFile);
        sub->add_option("--seed", opt.seed, "master seed (overrides the file)");
        sub->add_option("--reps", opt.reps, "repetitions per cell (overrides the file)")->check(CLI::PositiveNumber);
        sub->add_option("--threads", opt.threads, "worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--out", opt.out, "output directory")->capture_default_str();
    }

    CLI11_PARSE(app, argc, argv);
    for (const CLI::App* sub : app.get_subcommands())
        return run(sub->get_name(), opt);
    return 2;
}
