// Copyright 2026 The hsps Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// hsps: simulate heralded single-photon HBT experiments and analyze time tags.
//
// Exit codes: 0 success, 1 I/O or capacity error, 2 configuration or usage
// error, 3 malformed time-tag file, 4 g2 undefined for the data.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hsps/hsps.hpp"

namespace {

using namespace hsps;

enum ExitCode : int {
    exit_ok = 0,
    exit_runtime = 1,
    exit_config = 2,
    exit_format = 3,
    exit_insufficient = 4,
};

struct CommonOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> window_ps;
    std::string out;
    std::string format;
    std::optional<double> duration_s;
    std::optional<double> power_mw;
    std::optional<int> oam_l;
};

void add_common(CLI::App &cmd, CommonOptions &o) {
    cmd.add_option("--config", o.config_path, "Experiment config file")->check(CLI::ExistingFile);
    cmd.add_option("--seed", o.seed, "Base random seed");
    cmd.add_option("--window-ps", o.window_ps, "Coincidence window in ps (default 410)");
    cmd.add_option("--out", o.out, "Output path (stdout when omitted)");
    cmd.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    cmd.add_option("--duration-s", o.duration_s, "Simulated acquisition time in seconds");
    cmd.add_option("--power-mw", o.power_mw, "Pump power in mW");
    cmd.add_option("--oam-l", o.oam_l, "Pump OAM order");
}

auto build_config(const CommonOptions &o) -> ExperimentConfig {
    ExperimentConfig cfg = o.config_path.empty() ? ExperimentConfig{} : load_config(o.config_path);
    if (o.seed)
        cfg.source.seed = *o.seed;
    if (o.window_ps)
        cfg.spec.window_ps = *o.window_ps;
    if (!o.out.empty())
        cfg.output_path = o.out;
    if (!o.format.empty())
        cfg.output_format = parse_output_format(o.format);
    if (o.duration_s) {
        if (!(*o.duration_s >= 0.0) || !std::isfinite(*o.duration_s))
            throw config_error("--duration-s must be finite and >= 0");
        cfg.source.duration_ps =
            static_cast<std::int64_t>(std::llround(*o.duration_s * ps_per_second));
    }
    if (o.power_mw)
        cfg.source.pump_power_mw = *o.power_mw;
    if (o.oam_l)
        cfg.source.pump_oam_l = *o.oam_l;
    cfg.validate();
    return cfg;
}

void write_report(const ExperimentConfig &cfg, const std::string &json, const std::string &csv) {
    report::emit(cfg.output_format == OutputFormat::csv ? csv : json, cfg.output_path, std::cout);
}

auto run_simulate(const CommonOptions &o) -> int {
    auto cfg = build_config(o);
    if (cfg.output_path.empty())
        throw config_error("simulate: --out is required");
    if (!o.format.empty() && cfg.output_format == OutputFormat::csv &&
        !ttag::detail::is_csv_path(cfg.output_path))
        throw config_error("simulate: --format csv needs an output path ending in .csv");
    const auto stream = simulate_stream(cfg);
    write_tags(stream, cfg.output_path);
    std::cerr << "wrote " << stream.size() << " tags (" << cfg.source.duration_ps
              << " ps) to " << cfg.output_path.string() << "\n";
    return exit_ok;
}

auto run_analyze(const CommonOptions &o, const std::string &input) -> int {
    const auto cfg = build_config(o);
    const auto result = analyze(read_tags(input), cfg.spec);
    write_report(cfg, report::to_json(result).dump(2) + "\n", report::to_csv(result));
    if (!result.defined()) {
        std::cerr << "hsps: " << result.error << "\n";
        return exit_insufficient;
    }
    return exit_ok;
}

auto run_scan(const CommonOptions &o, const std::string &input, std::optional<std::int64_t> step,
              std::optional<int> steps) -> int {
    auto cfg = build_config(o);
    if (step)
        cfg.sweep.delay_step_ps = *step;
    if (steps)
        cfg.sweep.delay_steps = *steps;
    if (cfg.sweep.delay_step_ps <= 0 || cfg.sweep.delay_steps < 0)
        throw config_error("scan-delay: step must be > 0 and steps >= 0");
    const auto channels =
        input.empty() ? simulate_channels(cfg) : ChannelTimes::split(read_tags(input));
    const auto curve =
        g2_delay_scan(channels, cfg.spec, cfg.sweep.delay_step_ps, cfg.sweep.delay_steps);
    write_report(cfg, report::to_json(curve, cfg.spec.window_ps).dump(2) + "\n",
                 report::to_csv(curve));
    return exit_ok;
}

auto run_sweep_cmd(const CommonOptions &o, SweepKind kind, const std::vector<double> &powers,
                   const std::vector<int> &orders) -> int {
    auto cfg = build_config(o);
    if (!powers.empty())
        cfg.sweep.power_mw = powers;
    if (!orders.empty())
        cfg.sweep.oam_l = orders;
    const auto result = run_sweep(cfg, kind);
    write_report(cfg, report::to_json(result, cfg.spec.window_ps).dump(2) + "\n",
                 report::to_csv(result, cfg.spec.window_ps));
    if (!result.complete) {
        std::cerr << "hsps: sweep stopped early: " << result.error << "\n";
        return exit_insufficient;
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Heralded single-photon source simulator and g2 analyzer"};
    app.require_subcommand(1);

    CommonOptions sim_o, ana_o, scan_o, pow_o, oam_o;
    std::string ana_input, scan_input;
    std::optional<std::int64_t> step_ps;
    std::optional<int> steps;
    std::vector<double> powers;
    std::vector<int> orders;

    auto *sim = app.add_subcommand("simulate", "Simulate an acquisition and write time tags");
    add_common(*sim, sim_o);

    auto *ana = app.add_subcommand("analyze", "Count coincidences and estimate g2(0)");
    ana->add_option("input", ana_input, "TTAG or .csv time-tag file")->required();
    add_common(*ana, ana_o);

    auto *scan = app.add_subcommand("scan-delay", "g2(tau) by delaying the s2 channel");
    scan->add_option("input", scan_input, "Time-tag file (simulates from config when omitted)");
    scan->add_option("--step-ps", step_ps, "Delay step in ps (default 500)");
    scan->add_option("--steps", steps, "Steps on each side of tau = 0 (default 10)");
    add_common(*scan, scan_o);

    auto *pow = app.add_subcommand("sweep-power", "g2(0) versus pump power");
    pow->add_option("--powers", powers, "Pump powers in mW")->delimiter(',');
    add_common(*pow, pow_o);

    auto *oam = app.add_subcommand("sweep-oam", "g2(0) versus pump OAM order");
    oam->add_option("--orders", orders, "OAM orders")->delimiter(',');
    add_common(*oam, oam_o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    try {
        if (*sim)
            return run_simulate(sim_o);
        if (*ana)
            return run_analyze(ana_o, ana_input);
        if (*scan)
            return run_scan(scan_o, scan_input, step_ps, steps);
        if (*pow)
            return run_sweep_cmd(pow_o, SweepKind::power, powers, {});
        if (*oam)
            return run_sweep_cmd(oam_o, SweepKind::oam, {}, orders);
    } catch (const config_error &e) {
        std::cerr << "hsps: config error: " << e.what() << "\n";
        return exit_config;
    } catch (const format_error &e) {
        std::cerr << "hsps: bad time-tag file: " << e.what() << "\n";
        return exit_format;
    } catch (const insufficient_data &e) {
        std::cerr << "hsps: " << e.what() << "\n";
        return exit_insufficient;
    } catch (const std::exception &e) {
        std::cerr << "hsps: " << e.what() << "\n";
        return exit_runtime;
    }
    return exit_config;
}
