#pragma once

// Scenario orchestration: running configured simulations, detuning sweeps,
// CSV/summary emission, and multi-run reports.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stacool/config.hpp"
#include "stacool/drives.hpp"
#include "stacool/dynamics.hpp"

namespace stacool {

// Runs one configured scenario (policy warnings, if any, are appended to
// *warnings when non-null; they never abort a non-strict run).
RunResult run_scenario(const ScenarioConfig& cfg, std::vector<std::string>* warnings = nullptr);

// Time-series CSV: t, P1, P2, Pb, J, G2, theta, theta_dot, R.
void write_timeseries_csv(std::ostream& os, const ScenarioConfig& cfg, const RunResult& run);

// Drive CSV: t, Re(Omega1), Im(Omega1), Re(Omega2), Im(Omega2). A skipped
// Omega1 (g1 = 0) is written as zeros.
void write_drives_csv(std::ostream& os, const DrivePair& drives);

// Machine-readable single-run summary (JSON object).
void write_summary_json(std::ostream& os, const ScenarioConfig& cfg, const RunResult& run);

// Human-readable single-run summary.
std::string summary_text(const ScenarioConfig& cfg, const RunResult& run);

// One row of a multi-run report, as stored in the summary JSON files.
struct ReportRow {
    std::string family;
    std::string mode;
    double T = 0.0;
    double t_start = 0.0, t_end = 0.0;
    double pb_final = 0.0;
    double pb_min = 0.0;
    std::optional<double> t_ground;
    std::optional<double> t_cooled;
    double max_R = 0.0;
    double max_theta_dot = 0.0;
    double ratio_start = 0.0;
    double ratio_end = 0.0;
};

ReportRow report_row(const ScenarioConfig& cfg, const RunResult& run);
ReportRow read_summary_json_file(const std::string& path);

// Tabulates runs and, for each family with both a stirap run (that cooled)
// and an sta run, the cooling speedup t_cooled / sta duration.
std::string make_report(const std::vector<ReportRow>& rows);

// Same content as a JSON document.
std::string make_report_json(const std::vector<ReportRow>& rows);

struct SweepResult {
    std::vector<double> deltas;
    std::vector<std::string> labels;            // one per scenario
    std::vector<std::vector<double>> pb_final;  // [scenario][delta]
};

// One run per delta per scenario; runs are independent and may execute on up
// to `jobs` worker threads.
SweepResult sweep_detuning(const std::vector<ScenarioConfig>& configs,
                           const std::vector<double>& deltas, unsigned jobs = 0);

std::vector<double> linspace(double lo, double hi, std::size_t n);

void write_sweep_csv(std::ostream& os, const SweepResult& sweep);

} // namespace stacool
