// SPDX-License-Identifier: Apache-2.0
//
// hbsim: hybrid beam selection simulator for beamspace MIMO
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


// Command-line front end: run, table1, sweep and qe.

#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "hbsim/error.hpp"
#include "hbsim/harness.hpp"
#include "hbsim/report.hpp"

namespace {

constexpr int exit_config = 2;
constexpr int exit_numerical = 3;

struct GlobalOptions {
    std::string config_file;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<std::size_t> threads;
    std::string out;
    std::string format;
    std::vector<std::string> assignments;
};

// Config file first, then `--set key=value`, then the dedicated global flags.
hbsim::RunConfig resolve_config(const GlobalOptions& g)
{
    hbsim::RunConfig c = g.config_file.empty() ? hbsim::RunConfig{} : hbsim::load_config(g.config_file);
    for (const auto& a : g.assignments) {
        const auto eq = a.find('=');
        if (eq == std::string::npos)
            throw hbsim::ConfigError("--set expects key=value, got '" + a + "'");
        hbsim::set_config_value(c, a.substr(0, eq), a.substr(eq + 1));
    }
    if (g.seed)
        c.seed = *g.seed;
    if (g.trials)
        c.trials = *g.trials;
    if (g.threads)
        c.threads = *g.threads;
    if (!g.out.empty())
        c.output = g.out;
    if (!g.format.empty())
        c.format = hbsim::format_from_string(g.format);
    return c;
}

void apply_snr(hbsim::RunConfig& c, const std::string& snr)
{
    if (!snr.empty())
        hbsim::set_config_value(c, "snr_db", snr);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"hbsim: hybrid beam selection simulator for beamspace MIMO"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--config", g.config_file, "Flat key = value configuration file");
    app.add_option("--seed", g.seed, "Master RNG seed");
    app.add_option("--trials", g.trials, "Monte Carlo trials");
    app.add_option("--threads", g.threads, "Worker threads (results do not depend on it)");
    app.add_option("--out", g.out, "Output file (default: standard output)");
    app.add_option("--format", g.format, "Report format: csv or json");
    app.add_option("--set", g.assignments, "Override a configuration key (key=value), repeatable");

    auto* run_cmd = app.add_subcommand("run", "Simulate one configuration");
    std::string run_snr, export_channels;
    run_cmd->add_option("--snr", run_snr, "SNR list in dB: 'a,b,c' or 'start:stop:step'");
    run_cmd->add_option("--export-channels", export_channels, "Write the first trial's channel ensemble as CSV");

    auto* table1_cmd = app.add_subcommand("table1", "Reproduce the five-configuration rate-loss table");
    std::string table1_snr;
    table1_cmd->add_option("--snr", table1_snr, "SNR in dB (default 12)");

    auto* sweep_cmd = app.add_subcommand("sweep", "Per-user rate against SNR for SBS and both HBS cases");
    std::string sweep_setting = "fig2", sweep_snr, baseline;
    sweep_cmd->add_option("--setting", sweep_setting, "fig2 (32+16 beams) or fig3 (48+32 beams)")
        ->check(CLI::IsMember({"fig2", "fig3"}));
    sweep_cmd->add_option("--snr", sweep_snr, "SNR grid (default 0:20:2)");
    sweep_cmd->add_option("--baseline", baseline, "Extra baseline curve")->check(CLI::IsMember({"rvq-full"}));

    auto* qe_cmd = app.add_subcommand("qe", "Quantization-error theory table");
    std::vector<double> qe_L{2.0, 3.0};
    std::vector<std::size_t> qe_N{7, 15};
    qe_cmd->add_option("--L", qe_L, "Cluster counts")->delimiter(',');
    qe_cmd->add_option("--N", qe_N, "Feedback bit counts")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }

    try {
        hbsim::RunConfig config = resolve_config(g);
        if (*run_cmd) {
            apply_snr(config, run_snr);
            if (!export_channels.empty())
                hbsim::save_channel_csv(hbsim::trial_channels(config, 0), export_channels);
            hbsim::emit_report(hbsim::run(config), config.output, config.format);
        } else if (*table1_cmd) {
            apply_snr(config, table1_snr);
            hbsim::emit_report(hbsim::reproduce_table1(config), config.output, config.format);
        } else if (*sweep_cmd) {
            config.snr_db = hbsim::default_sweep_grid();
            apply_snr(config, sweep_snr);
            hbsim::SweepOptions options;
            options.setting = hbsim::sweep_setting_from_string(sweep_setting);
            options.rvq_full_baseline = baseline == "rvq-full";
            hbsim::emit_report(hbsim::sweep_snr(config, options), config.output, config.format);
        } else if (*qe_cmd) {
            hbsim::emit_qe_table(hbsim::qe_table(qe_L, qe_N), config.output);
        }
    } catch (const hbsim::Error& e) {
        std::cerr << "hbsim: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "hbsim: internal failure: " << e.what() << '\n';
        return exit_numerical;
    }
    return 0;
}
