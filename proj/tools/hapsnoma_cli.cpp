// SPDX-License-Identifier: Apache-2.0
//
// hapsnoma: link-level simulator for HAPS MIMO-NOMA downlinks
// Copyright (C) 2026 The hapsnoma authors
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

// Command-line driver for the experiment sweeps.
//
//   hapsnoma <command> [--config FILE] [--seed N] [--trials N] [--out PATH] [--format csv|json]
//
// Exit codes: 0 success, 2 configuration error, 3 every sweep point infeasible, 1 anything else.

#include <hapsnoma/hapsnoma.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#ifndef HAPSNOMA_VERSION
#define HAPSNOMA_VERSION "unknown"
#endif

namespace
{
    using namespace hapsnoma;
    using namespace hapsnoma::experiments;

    constexpr int exit_config_error = 2;
    constexpr int exit_all_infeasible = 3;

    struct CommonOptions
    {
        std::string config_path;
        std::optional<std::uint64_t> seed;
        std::optional<int> trials;
        std::string out_path;
        std::string format = "csv";
        std::string dump_stats_path;
    };

    void add_common(CLI::App *cmd, CommonOptions &opt)
    {
        cmd->add_option("--config", opt.config_path, "Scenario file (key = value)");
        cmd->add_option("--seed", opt.seed, "Override the scenario seed");
        cmd->add_option("--trials", opt.trials, "Override the number of Monte Carlo trials")->check(CLI::PositiveNumber);
        cmd->add_option("--out", opt.out_path, "Output file (default: stdout)");
        cmd->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    }

    ScenarioConfig resolve_config(const CommonOptions &opt)
    {
        ScenarioConfig cfg = opt.config_path.empty() ? ScenarioConfig{} : load_config(opt.config_path);
        if (opt.seed)
            cfg.seed = *opt.seed;
        if (opt.trials)
            cfg.n_trials = *opt.trials;
        cfg.validate();
        return cfg;
    }

    void emit(const MetricSeries &series, const CommonOptions &opt)
    {
        std::ofstream file;
        std::ostream *os = &std::cout;
        if (!opt.out_path.empty())
        {
            file.open(opt.out_path, std::ios::binary);
            if (!file)
                throw std::runtime_error("cannot open output file '" + opt.out_path + "'");
            os = &file;
        }
        if (opt.format == "json")
            write_json(*os, series);
        else
            write_csv(*os, series);
    }

    std::vector<std::string> columns_with_prefix(const MetricSeries &s, const std::vector<std::string> &prefixes)
    {
        std::vector<std::string> names;
        for (const auto &[name, v] : s.series)
            for (const auto &p : prefixes)
                if (name.rfind(p, 0) == 0)
                    names.push_back(name);
        return names;
    }

    int run_command(const std::string &command, const CommonOptions &opt)
    {
        const ScenarioConfig cfg = resolve_config(opt);
        const std::string version = HAPSNOMA_VERSION;

        if (command == "favprop")
        {
            emit(favprop_sweep(cfg, azimuth_grid_deg(-180.0, 180.0, cfg.azimuth_step_deg), version), opt);
            return 0;
        }
        if (command == "corr-sweep")
        {
            std::vector<double> az;
            for (double deg : azimuth_grid_deg(-90.0, 90.0, cfg.azimuth_step_deg))
                az.push_back(deg_to_rad(deg));
            emit(correlation_sweep(cfg, 0.0, az, version), opt);
            return 0;
        }

        MetricSeries series;
        if (command == "sumrate-vs-power" || command == "ee-vs-power")
        {
            const MetricSeries full = run_sum_rate_sweep(cfg, dbm_grid_to_watt(cfg.power_grid_dbm), version);
            const std::string metric = command == "ee-vs-power" ? "energy_efficiency_" : "sum_rate_";
            series = full.select(columns_with_prefix(full, {metric, "feasibility_fraction_"}));
            emit(series, opt);
            return all_infeasible(full) ? exit_all_infeasible : 0;
        }
        if (command == "sumrate-vs-qos")
        {
            series = run_qos_sweep(cfg, cfg.r_min_grid, version);
            emit(series, opt);
            return all_infeasible(series) ? exit_all_infeasible : 0;
        }

        // run
        if (!opt.dump_stats_path.empty())
        {
            const TrialChannels ch = draw_trial(cfg, cfg.platform, 0);
            nlohmann::ordered_json users = nlohmann::ordered_json::array();
            for (const auto &u : ch.users)
                users.push_back(to_json(u.stats));
            std::ofstream dump(opt.dump_stats_path);
            if (!dump)
                throw std::runtime_error("cannot open '" + opt.dump_stats_path + "'");
            dump << nlohmann::ordered_json{{"platform", to_string(cfg.platform)}, {"trial", 0}, {"users", users}}.dump(2)
                 << '\n';
        }
        series = run_single(cfg, version);
        emit(series, opt);
        return all_infeasible(series) ? exit_all_infeasible : 0;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Link-level simulator for HAPS MIMO-NOMA downlinks"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(HAPSNOMA_VERSION));

    CommonOptions opt;
    const std::pair<const char *, const char *> commands[] = {
        {"favprop", "Variance of favorable propagation versus user-2 azimuth"},
        {"corr-sweep", "LoS correlation of two users versus azimuth, HAPS and terrestrial"},
        {"sumrate-vs-power", "Mean sum rate versus transmit power"},
        {"sumrate-vs-qos", "Mean sum rate versus per-user minimum rate"},
        {"ee-vs-power", "Energy efficiency versus transmit power"},
        {"run", "Single operating point of the configured platform"}};
    for (const auto &[name, help] : commands)
    {
        CLI::App *cmd = app.add_subcommand(name, help);
        add_common(cmd, opt);
        if (std::string(name) == "run")
            cmd->add_option("--dump-stats", opt.dump_stats_path, "Write trial-0 channel statistics as JSON");
    }

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config_error;
    }

    try
    {
        return run_command(app.get_subcommands().front()->get_name(), opt);
    }
    catch (const hapsnoma::config_error &e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config_error;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
