// SPDX-License-Identifier: Apache-2.0
//
// riscade: correlated mixture-gamma channel synthesis and linear estimation
// for RIS-aided THz uplinks
// Copyright (C) 2026 the riscade authors
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

#include "riscade/acceptance.hpp"
#include "riscade/presets.hpp"
#include "riscade/runner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace
{

riscade::ScenarioConfig load_config(const std::string &config_path, const std::string &preset)
{
    if (!config_path.empty())
        return riscade::load_scenario_file(config_path);
    return riscade::make_preset(preset.empty() ? "default" : preset);
}

std::ofstream open_output(const std::string &path)
{
    std::ofstream out(path);
    if (!out)
        throw riscade::validation_error("cannot open output file: " + path);
    return out;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"riscade: RIS-aided THz cascaded-channel synthesis and linear estimation"};
    app.require_subcommand(1);

    std::string config_path, preset_name, out_path = "-", link_name;
    std::optional<std::uint64_t> seed_override;
    std::optional<long> trials_override;
    int workers = 1;
    bool ls_only = false, no_coupling = false, dump_channels = false;

    auto add_source_flags = [&](CLI::App *cmd) {
        cmd->add_option("--config", config_path,
                        "scenario config file (a riscade CSV also works: its embedded "
                        "configuration is used)");
        cmd->add_option("--preset", preset_name, "built-in preset name")
            ->check(CLI::IsMember(riscade::preset_names()));
    };

    CLI::App *simulate = app.add_subcommand("simulate", "run the Monte Carlo NMSE sweep");
    add_source_flags(simulate);
    simulate->add_option("--out", out_path, "output CSV path ('-' for stdout)");
    simulate->add_option("--seed", seed_override, "override the master seed");
    simulate->add_option("--trials", trials_override, "override the trial count");
    simulate->add_option("--workers", workers, "worker threads (results are worker-independent)")
        ->check(CLI::PositiveNumber);
    simulate->add_flag("--ls-only", ls_only, "skip the LMMSE estimator");
    simulate->add_flag("--no-coupling", no_coupling, "disable mutual coupling for this run");
    simulate->add_flag("--dump-channels", dump_channels,
                       "also write the first realization per SNR to <out>.channels.csv");

    CLI::App *correlation = app.add_subcommand("correlation", "dump one correlation matrix");
    add_source_flags(correlation);
    correlation->add_option("--link", link_name, "ris_ue | ris_bs | bs_ris")->required();
    correlation->add_option("--out", out_path, "output CSV path ('-' for stdout)");

    CLI::App *verify = app.add_subcommand("verify", "run the acceptance criteria");
    add_source_flags(verify);
    verify->add_option("--seed", seed_override, "base seed for the acceptance battery");
    verify->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try
    {
        if (simulate->parsed())
        {
            riscade::ScenarioConfig cfg = load_config(config_path, preset_name);
            if (seed_override)
                cfg.seed = *seed_override;
            if (trials_override)
                cfg.trials = *trials_override;
            if (ls_only)
                cfg.ls_only = true;
            if (no_coupling)
            {
                cfg.coupling.enabled = false;
                cfg.mismatch_nocoupling = false;
            }
            const riscade::ScenarioConfig resolved = riscade::resolve_scenario(cfg);
            riscade::validate_scenario(resolved);

            const riscade::RunResult result = riscade::run_sweep(resolved, workers);
            if (out_path == "-")
                riscade::write_run_csv(result, std::cout);
            else
            {
                auto out = open_output(out_path);
                riscade::write_run_csv(result, out);
            }
            if (dump_channels)
            {
                if (out_path == "-")
                    throw riscade::validation_error("--dump-channels needs --out FILE");
                auto out = open_output(out_path + ".channels.csv");
                riscade::dump_channels_csv(resolved, out);
            }
            return 0;
        }

        if (correlation->parsed())
        {
            riscade::ScenarioConfig cfg = load_config(config_path, preset_name);
            if (seed_override)
                cfg.seed = *seed_override;
            const riscade::ScenarioConfig resolved = riscade::resolve_scenario(cfg);
            riscade::validate_scenario(resolved);
            if (out_path == "-")
                riscade::dump_correlation_csv(resolved, link_name, std::cout);
            else
            {
                auto out = open_output(out_path);
                riscade::dump_correlation_csv(resolved, link_name, out);
            }
            return 0;
        }

        // verify: validate the supplied scenario first, then run the battery.
        riscade::ScenarioConfig cfg = load_config(config_path, preset_name);
        riscade::validate_scenario(riscade::resolve_scenario(cfg));
        const std::uint64_t seed = seed_override.value_or(20260401);
        const auto results = riscade::run_acceptance(seed, workers);
        riscade::print_acceptance(results, std::cout);
        return riscade::all_criteria_passed(results) ? 0 : 3;
    }
    catch (const riscade::validation_error &e)
    {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    }
    catch (const std::domain_error &e)
    {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    }
    catch (const riscade::numerical_error &e)
    {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
