#include "stacool/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace stacool {

const char* mode_name(RunMode mode) {
    switch (mode) {
    case RunMode::STIRAP: return "stirap";
    case RunMode::STA: return "sta";
    case RunMode::STA_NO_CD: return "sta_no_cd";
    }
    return "unknown";
}

RunMode mode_from_name(const std::string& name) {
    std::string s;
    for (char c : name) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (s == "stirap") return RunMode::STIRAP;
    if (s == "sta") return RunMode::STA;
    if (s == "sta_no_cd" || s == "sta-no-cd") return RunMode::STA_NO_CD;
    throw ConfigError("unknown mode '" + name + "' (expected stirap, sta, or sta_no_cd)");
}

ProtocolParams ScenarioConfig::protocol_params() const {
    return with_defaults(protocol, g, T, xi, t_f, t_start, t_end);
}

SystemParams ScenarioConfig::system_params() const {
    SystemParams s;
    s.delta = delta;
    s.kappa1 = kappa1;
    s.kappa2 = kappa2;
    s.gamma_m = gamma_m;
    s.n_bar = n_bar;
    s.g1 = g1;
    s.g2 = g2;
    s.include_counter_rotating = include_counter_rotating;
    return s;
}

CouplingSchedule ScenarioConfig::schedule() const {
    CouplingSchedule sched;
    sched.protocol = protocol_params();
    sched.delta = delta;
    sched.cd_enabled = (mode == RunMode::STA);
    return sched;
}

std::vector<std::string> ScenarioConfig::policy_warnings() const {
    std::vector<std::string> w;
    const ProtocolParams p = protocol_params();
    if (mode == RunMode::STIRAP) {
        const double r = max_adiabatic_ratio(p, delta);
        if (!(r < 0.01)) {
            std::ostringstream os;
            os << "adiabaticity policy: max R(t) = " << r
               << " >= 0.01; the run is not in the adiabatic regime";
            w.push_back(os.str());
        }
    } else {
        const double td = max_theta_dot(p);
        if (td > g * (1.0 + 1e-9)) {
            std::ostringstream os;
            os << "sta policy: max |theta_dot| = " << td << " exceeds the peak coupling g = " << g;
            w.push_back(os.str());
        }
    }
    return w;
}

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

bool parse_bool(const std::string& v, bool& out) {
    std::string s;
    for (char c : v) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (s == "true" || s == "1" || s == "yes" || s == "on") {
        out = true;
        return true;
    }
    if (s == "false" || s == "0" || s == "no" || s == "off") {
        out = false;
        return true;
    }
    return false;
}

bool parse_double(const std::string& v, double& out) {
    try {
        std::size_t pos = 0;
        out = std::stod(v, &pos);
        return pos == v.size() && std::isfinite(out);
    } catch (...) {
        return false;
    }
}

bool parse_size(const std::string& v, std::size_t& out) {
    try {
        std::size_t pos = 0;
        const long long x = std::stoll(v, &pos);
        if (pos != v.size() || x < 0) return false;
        out = static_cast<std::size_t>(x);
        return true;
    } catch (...) {
        return false;
    }
}

} // namespace

ScenarioConfig load_config(std::istream& in) {
    ScenarioConfig cfg;
    std::vector<std::string> problems;
    std::map<std::string, std::string> seen;
    bool has_protocol = false, has_mode = false, has_T = false;

    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string token;
        while (ls >> token) {
            const auto eq = token.find('=');
            if (eq == std::string::npos || eq == 0) {
                problems.push_back("malformed entry '" + token + "' (expected key=value)");
                continue;
            }
            const std::string key = token.substr(0, eq);
            const std::string val = token.substr(eq + 1);
            if (seen.count(key)) {
                problems.push_back("duplicate key '" + key + "'");
                continue;
            }
            seen[key] = val;

            auto need_double = [&](double& field) {
                if (!parse_double(val, field)) {
                    problems.push_back("key '" + key + "': cannot parse '" + val + "' as a number");
                }
            };
            auto need_bool = [&](bool& field) {
                if (!parse_bool(val, field)) {
                    problems.push_back("key '" + key + "': cannot parse '" + val + "' as a boolean");
                }
            };

            if (key == "protocol") {
                try {
                    cfg.protocol = family_from_name(val);
                    has_protocol = true;
                } catch (const ConfigError& e) {
                    problems.push_back(e.what());
                }
            } else if (key == "mode") {
                try {
                    cfg.mode = mode_from_name(val);
                    has_mode = true;
                } catch (const ConfigError& e) {
                    problems.push_back(e.what());
                }
            } else if (key == "g") {
                need_double(cfg.g);
            } else if (key == "T") {
                need_double(cfg.T);
                has_T = true;
            } else if (key == "xi") {
                need_double(cfg.xi);
            } else if (key == "t_f") {
                need_double(cfg.t_f);
            } else if (key == "delta") {
                need_double(cfg.delta);
            } else if (key == "kappa1") {
                need_double(cfg.kappa1);
            } else if (key == "kappa2") {
                need_double(cfg.kappa2);
            } else if (key == "gamma_m") {
                need_double(cfg.gamma_m);
            } else if (key == "n_bar") {
                need_double(cfg.n_bar);
            } else if (key == "g1") {
                need_double(cfg.g1);
            } else if (key == "g2") {
                need_double(cfg.g2);
            } else if (key == "n0") {
                need_double(cfg.n0);
            } else if (key == "t_start") {
                need_double(cfg.t_start);
            } else if (key == "t_end") {
                need_double(cfg.t_end);
            } else if (key == "grid_points") {
                if (!parse_size(val, cfg.grid_points)) {
                    problems.push_back("key 'grid_points': cannot parse '" + val +
                                       "' as a non-negative integer");
                }
            } else if (key == "include_counter_rotating") {
                need_bool(cfg.include_counter_rotating);
            } else if (key == "strict") {
                need_bool(cfg.strict);
            } else {
                problems.push_back("unknown key '" + key + "'");
            }
        }
    }

    if (!has_protocol) problems.push_back("missing required key 'protocol'");
    if (!has_mode) problems.push_back("missing required key 'mode'");
    if (!has_T) problems.push_back("missing required key 'T'");

    if (problems.empty()) {
        if (cfg.n0 < 0.0) problems.push_back("n0 must be non-negative");
        if (cfg.n_bar < 0.0) problems.push_back("n_bar must be non-negative");
        for (auto [v, name] : {std::pair<double, const char*>{cfg.kappa1, "kappa1"},
                               {cfg.kappa2, "kappa2"},
                               {cfg.gamma_m, "gamma_m"},
                               {cfg.g1, "g1"},
                               {cfg.g2, "g2"}}) {
            if (v < 0.0) problems.push_back(std::string(name) + " must be non-negative");
        }
        if (cfg.grid_points < 2) problems.push_back("grid_points must be at least 2");
        const auto proto_problems = cfg.protocol_params().validate();
        problems.insert(problems.end(), proto_problems.begin(), proto_problems.end());
    }

    if (problems.empty() && cfg.strict) {
        const auto w = cfg.policy_warnings();
        for (const auto& s : w) problems.push_back("strict: " + s);
    }

    if (!problems.empty()) {
        std::string msg = "config error:";
        for (const auto& s : problems) msg += "\n  - " + s;
        throw ConfigError(msg);
    }
    return cfg;
}

ScenarioConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return load_config(in);
}

ScenarioConfig load_config_string(const std::string& text) {
    std::istringstream in(text);
    return load_config(in);
}

std::string serialize(const ScenarioConfig& cfg) {
    std::ostringstream os;
    os << "protocol=" << family_name(cfg.protocol) << "\n";
    os << "mode=" << mode_name(cfg.mode) << "\n";
    os << "g=" << fmt_double(cfg.g) << "\n";
    os << "T=" << fmt_double(cfg.T) << "\n";
    os << "xi=" << fmt_double(cfg.xi) << "\n";
    os << "t_f=" << fmt_double(cfg.t_f) << "\n";
    os << "delta=" << fmt_double(cfg.delta) << "\n";
    os << "kappa1=" << fmt_double(cfg.kappa1) << "\n";
    os << "kappa2=" << fmt_double(cfg.kappa2) << "\n";
    os << "gamma_m=" << fmt_double(cfg.gamma_m) << "\n";
    os << "n_bar=" << fmt_double(cfg.n_bar) << "\n";
    os << "g1=" << fmt_double(cfg.g1) << "\n";
    os << "g2=" << fmt_double(cfg.g2) << "\n";
    os << "n0=" << fmt_double(cfg.n0) << "\n";
    os << "t_start=" << fmt_double(cfg.t_start) << "\n";
    os << "t_end=" << fmt_double(cfg.t_end) << "\n";
    os << "grid_points=" << cfg.grid_points << "\n";
    os << "include_counter_rotating=" << (cfg.include_counter_rotating ? "true" : "false") << "\n";
    os << "strict=" << (cfg.strict ? "true" : "false") << "\n";
    return os.str();
}

} // namespace stacool
