#pragma once

// Plain-text key=value scenario configuration: parsing, validation, defaults,
// and serialization. Unset protocol shape parameters and windows fall back to
// the standard per-family choices; physical rates default to the reference
// parameter set (kappa = 2e-2, gamma_m = 3e-6, n_bar = 1e4, g_i = 6e-5).

#include <iosfwd>
#include <string>
#include <vector>

#include "stacool/dynamics.hpp"
#include "stacool/protocols.hpp"

namespace stacool {

enum class RunMode { STIRAP, STA, STA_NO_CD };

const char* mode_name(RunMode mode);
RunMode mode_from_name(const std::string& name); // throws ConfigError

struct ScenarioConfig {
    ProtocolFamily protocol = ProtocolFamily::Gaussian;
    RunMode mode = RunMode::STIRAP;
    double g = 0.1;
    double T = 0.0;
    double xi = 0.0;  // 0 -> family default
    double t_f = 0.0; // 0 -> family default
    double delta = 0.0;
    double kappa1 = 2e-2;
    double kappa2 = 2e-2;
    double gamma_m = 3e-6;
    double n_bar = 1e4;
    double g1 = 6e-5;
    double g2 = 6e-5;
    double n0 = 1e4;
    double t_start = 0.0;
    double t_end = 0.0; // 0 -> family default window end
    std::size_t grid_points = 2000;
    bool include_counter_rotating = true;
    bool strict = false;

    ProtocolParams protocol_params() const;
    SystemParams system_params() const;
    CouplingSchedule schedule() const; // CD channel active iff mode == STA

    // Adiabaticity / STA feasibility policy checks. Violations are warnings
    // unless strict is set (load_config then rejects the file).
    std::vector<std::string> policy_warnings() const;

    bool operator==(const ScenarioConfig&) const = default;
};

// Parses a config stream; throws ConfigError listing every violation.
ScenarioConfig load_config(std::istream& in);
ScenarioConfig load_config_file(const std::string& path);
ScenarioConfig load_config_string(const std::string& text);

std::string serialize(const ScenarioConfig& cfg);

} // namespace stacool
