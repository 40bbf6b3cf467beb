// Command-line front end: simulate / sweep / check / drives / report.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "stacool/config.hpp"
#include "stacool/drives.hpp"
#include "stacool/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIntegration = 3;

std::string default_prefix(const std::string& config_path, const std::string& override_prefix) {
    if (!override_prefix.empty()) return override_prefix;
    return std::filesystem::path(config_path).stem().string();
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw stacool::ConfigError("cannot open output file '" + path + "'");
    return os;
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

int cmd_simulate(const std::string& config_path, const std::string& prefix_arg,
                 bool with_drives) {
    const stacool::ScenarioConfig cfg = stacool::load_config_file(config_path);
    std::vector<std::string> warnings;
    const stacool::RunResult run = stacool::run_scenario(cfg, &warnings);
    print_warnings(warnings);

    const std::string prefix = default_prefix(config_path, prefix_arg);
    {
        auto os = open_out(prefix + "_timeseries.csv");
        stacool::write_timeseries_csv(os, cfg, run);
    }
    {
        auto os = open_out(prefix + "_summary.json");
        stacool::write_summary_json(os, cfg, run);
    }
    if (with_drives) {
        const stacool::DrivePair drives =
            stacool::reconstruct_drives(cfg.schedule(), cfg.system_params(), cfg.grid_points);
        auto os = open_out(prefix + "_drives.csv");
        stacool::write_drives_csv(os, drives);
    }
    std::cout << stacool::summary_text(cfg, run);
    std::cout << "wrote " << prefix << "_timeseries.csv, " << prefix << "_summary.json";
    if (with_drives) std::cout << ", " << prefix << "_drives.csv";
    std::cout << "\n";
    return kExitOk;
}

int cmd_check(const std::string& config_path) {
    const stacool::ScenarioConfig cfg = stacool::load_config_file(config_path);
    const stacool::ProtocolParams p = cfg.protocol_params();
    std::cout << "protocol " << stacool::family_name(cfg.protocol) << " ("
              << stacool::mode_name(cfg.mode) << ")\n";
    std::cout << "  window            [" << p.t_start << ", " << p.t_end << "]\n";
    std::cout << "  J/G2 at t_start   " << stacool::coupling_ratio(p, p.t_start) << "\n";
    std::cout << "  J/G2 at t_end     " << stacool::coupling_ratio(p, p.t_end) << "\n";
    std::cout << "  max R(t)          " << stacool::max_adiabatic_ratio(p, cfg.delta) << "\n";
    std::cout << "  max |theta_dot|   " << stacool::max_theta_dot(p) << "\n";
    const auto warnings = cfg.policy_warnings();
    if (warnings.empty()) {
        std::cout << "  policy checks     ok\n";
    } else {
        for (const auto& w : warnings) std::cout << "  policy violation  " << w << "\n";
    }
    return kExitOk;
}

int cmd_drives(const std::string& config_path, const std::string& prefix_arg) {
    const stacool::ScenarioConfig cfg = stacool::load_config_file(config_path);
    stacool::DriveReconstruction rec(stacool::DriveInputs::from_schedule(cfg.schedule()),
                                     cfg.system_params(), cfg.protocol_params().t_start,
                                     cfg.protocol_params().t_end);
    const stacool::DrivePair drives = rec.sample(cfg.grid_points);
    const std::string prefix = default_prefix(config_path, prefix_arg);
    auto os = open_out(prefix + "_drives.csv");
    stacool::write_drives_csv(os, drives);
    std::cout << "max displaced-frame detuning shift 2 g_i |Re beta| / Delta_i = "
              << rec.max_detuning_shift_ratio() << "\n";
    std::cout << "wrote " << prefix << "_drives.csv\n";
    return kExitOk;
}

int cmd_sweep(const std::vector<std::string>& config_paths, double dmin, double dmax, int steps,
              unsigned jobs, const std::string& out_path) {
    std::vector<stacool::ScenarioConfig> configs;
    configs.reserve(config_paths.size());
    for (const auto& p : config_paths) configs.push_back(stacool::load_config_file(p));
    const auto deltas = stacool::linspace(dmin, dmax, static_cast<std::size_t>(steps));
    const stacool::SweepResult sweep = stacool::sweep_detuning(configs, deltas, jobs);
    auto os = open_out(out_path);
    stacool::write_sweep_csv(os, sweep);
    std::cout << "wrote " << out_path << " (" << deltas.size() << " detunings x "
              << configs.size() << " scenario(s))\n";
    return kExitOk;
}

int cmd_report(const std::vector<std::string>& summary_paths, const std::string& out_path,
               const std::string& json_path) {
    std::vector<stacool::ReportRow> rows;
    rows.reserve(summary_paths.size());
    for (const auto& p : summary_paths) rows.push_back(stacool::read_summary_json_file(p));
    const std::string text = stacool::make_report(rows);
    std::cout << text;
    if (!out_path.empty()) {
        auto os = open_out(out_path);
        os << text;
    }
    if (!json_path.empty()) {
        auto os = open_out(json_path);
        os << stacool::make_report_json(rows);
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"stacool: pulsed cooling simulator for a three-mode loop-coupled "
                 "optomechanical system"};
    app.require_subcommand(1);

    std::string config_path, prefix, out_path = "sweep.csv", report_out, report_json;
    std::vector<std::string> paths;
    bool with_drives = false;
    double dmin = -0.2, dmax = 0.2;
    int steps = 41;
    unsigned jobs = 0;

    auto* sim = app.add_subcommand("simulate", "run one scenario and emit CSV + summary");
    sim->add_option("config", config_path, "scenario config file")->required();
    sim->add_option("--output", prefix, "output file prefix (default: config stem)");
    sim->add_flag("--drives", with_drives, "also emit the reconstructed drive CSV");

    auto* chk = app.add_subcommand("check", "validate a config and print diagnostics");
    chk->add_option("config", config_path, "scenario config file")->required();

    auto* drv = app.add_subcommand("drives", "reconstruct the pulsed drive amplitudes");
    drv->add_option("config", config_path, "scenario config file")->required();
    drv->add_option("--output", prefix, "output file prefix (default: config stem)");

    auto* swp = app.add_subcommand("sweep", "sweep the quasi-single-photon detuning");
    swp->add_option("configs", paths, "scenario config file(s)")->required()->expected(-1);
    swp->add_option("--delta-min", dmin, "sweep start (default -0.2)");
    swp->add_option("--delta-max", dmax, "sweep end (default 0.2)");
    swp->add_option("--steps", steps, "number of grid points (default 41)")
        ->check(CLI::PositiveNumber);
    swp->add_option("--jobs", jobs, "worker threads (default: hardware concurrency)");
    swp->add_option("--output", out_path, "output CSV path (default sweep.csv)");

    auto* rep = app.add_subcommand("report", "tabulate figures of merit from summary files");
    rep->add_option("summaries", paths, "summary JSON file(s)")->required()->expected(-1);
    rep->add_option("--output", report_out, "also write the report to this file");
    rep->add_option("--json", report_json, "write a machine-readable report to this file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(config_path, prefix, with_drives);
        if (chk->parsed()) return cmd_check(config_path);
        if (drv->parsed()) return cmd_drives(config_path, prefix);
        if (swp->parsed()) return cmd_sweep(paths, dmin, dmax, steps, jobs, out_path);
        if (rep->parsed()) return cmd_report(paths, report_out, report_json);
    } catch (const stacool::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const stacool::IntegrationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIntegration;
    } catch (const stacool::TruncationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIntegration;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
