#include "stacool/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace stacool {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

} // namespace

RunResult run_scenario(const ScenarioConfig& cfg, std::vector<std::string>* warnings) {
    const auto w = cfg.policy_warnings();
    if (warnings) warnings->insert(warnings->end(), w.begin(), w.end());
    const CouplingSchedule sched = cfg.schedule();
    const SystemParams sys = cfg.system_params();
    IntegrateOptions opts;
    opts.grid_points = cfg.grid_points;
    return integrate(sys, sched, initial_state(cfg.n0), opts);
}

void write_timeseries_csv(std::ostream& os, const ScenarioConfig& cfg, const RunResult& run) {
    os << "# stacool timeseries v1 protocol=" << family_name(cfg.protocol)
       << " mode=" << mode_name(cfg.mode) << "\n";
    os << "t,P1,P2,Pb,J,G2,theta,theta_dot,R\n";
    const ProtocolParams p = cfg.protocol_params();
    for (std::size_t i = 0; i < run.t.size(); ++i) {
        const AngleSample s = angle_sample(p, run.t[i], cfg.delta);
        os << fmt(run.t[i]) << ',' << fmt(run.P1[i]) << ',' << fmt(run.P2[i]) << ','
           << fmt(run.Pb[i]) << ',' << fmt(s.J) << ',' << fmt(s.G2) << ',' << fmt(s.theta) << ','
           << fmt(s.theta_dot) << ',' << fmt(s.R) << "\n";
    }
}

void write_drives_csv(std::ostream& os, const DrivePair& drives) {
    os << "# stacool drives v1\n";
    os << "t,Re(Omega1),Im(Omega1),Re(Omega2),Im(Omega2)\n";
    for (std::size_t i = 0; i < drives.t.size(); ++i) {
        const cxd o1 = drives.Omega1.empty() ? cxd(0.0, 0.0) : drives.Omega1[i];
        os << fmt(drives.t[i]) << ',' << fmt(o1.real()) << ',' << fmt(o1.imag()) << ','
           << fmt(drives.Omega2[i].real()) << ',' << fmt(drives.Omega2[i].imag()) << "\n";
    }
}

ReportRow report_row(const ScenarioConfig& cfg, const RunResult& run) {
    ReportRow r;
    r.family = family_name(cfg.protocol);
    r.mode = mode_name(cfg.mode);
    r.T = cfg.T;
    r.t_start = run.t_start;
    r.t_end = run.t_end;
    r.pb_final = run.pb_final;
    r.pb_min = run.pb_min;
    r.t_ground = run.t_ground;
    r.t_cooled = run.t_cooled;
    r.max_R = run.diag.max_R;
    r.max_theta_dot = run.diag.max_theta_dot;
    r.ratio_start = run.diag.ratio_start;
    r.ratio_end = run.diag.ratio_end;
    return r;
}

void write_summary_json(std::ostream& os, const ScenarioConfig& cfg, const RunResult& run) {
    const ReportRow r = report_row(cfg, run);
    nlohmann::ordered_json j;
    j["schema"] = "stacool-summary-v1";
    j["protocol"] = r.family;
    j["mode"] = r.mode;
    j["T"] = r.T;
    j["t_start"] = r.t_start;
    j["t_end"] = r.t_end;
    j["pb_final"] = r.pb_final;
    j["pb_min"] = r.pb_min;
    if (r.t_ground) {
        j["t_ground"] = *r.t_ground;
    } else {
        j["t_ground"] = nullptr;
    }
    if (r.t_cooled) {
        j["t_cooled"] = *r.t_cooled;
    } else {
        j["t_cooled"] = nullptr;
    }
    j["max_R"] = r.max_R;
    j["max_theta_dot"] = r.max_theta_dot;
    j["ratio_start"] = std::isfinite(r.ratio_start) ? r.ratio_start : -1.0;
    j["ratio_end"] = r.ratio_end;
    j["n_accepted_steps"] = run.stats.n_accepted;
    j["n_rhs_evaluations"] = run.stats.n_rhs;
    os << j.dump(2) << "\n";
}

std::string summary_text(const ScenarioConfig& cfg, const RunResult& run) {
    std::ostringstream os;
    os << "protocol " << family_name(cfg.protocol) << " (" << mode_name(cfg.mode)
       << "), T = " << fmt_short(cfg.T) << ", window [" << fmt_short(run.t_start) << ", "
       << fmt_short(run.t_end) << "]\n";
    os << "  final phonon number  Pb(t_end) = " << fmt_short(run.pb_final) << "\n";
    os << "  minimum phonon number          = " << fmt_short(run.pb_min) << "\n";
    if (run.t_ground) {
        os << "  ground state (Pb < 1) first at = " << fmt_short(*run.t_ground) << "\n";
    } else {
        os << "  ground state (Pb < 1) not reached\n";
    }
    if (run.t_cooled) {
        os << "  cooling reference time         = " << fmt_short(*run.t_cooled) << "\n";
    }
    os << "  diagnostics: max R = " << fmt_short(run.diag.max_R)
       << ", max |theta_dot| = " << fmt_short(run.diag.max_theta_dot)
       << ", J/G2 at ends = " << fmt_short(run.diag.ratio_start) << " / "
       << fmt_short(run.diag.ratio_end) << "\n";
    return os.str();
}

ReportRow read_summary_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open summary file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("cannot parse summary file '" + path + "': " + e.what());
    }
    if (j.value("schema", "") != std::string("stacool-summary-v1")) {
        throw ConfigError("summary file '" + path + "' has unexpected schema");
    }
    ReportRow r;
    r.family = j.at("protocol").get<std::string>();
    r.mode = j.at("mode").get<std::string>();
    r.T = j.at("T").get<double>();
    r.t_start = j.at("t_start").get<double>();
    r.t_end = j.at("t_end").get<double>();
    r.pb_final = j.at("pb_final").get<double>();
    r.pb_min = j.at("pb_min").get<double>();
    if (!j.at("t_ground").is_null()) r.t_ground = j.at("t_ground").get<double>();
    if (j.contains("t_cooled") && !j.at("t_cooled").is_null()) {
        r.t_cooled = j.at("t_cooled").get<double>();
    }
    r.max_R = j.at("max_R").get<double>();
    r.max_theta_dot = j.at("max_theta_dot").get<double>();
    r.ratio_start = j.at("ratio_start").get<double>();
    r.ratio_end = j.at("ratio_end").get<double>();
    return r;
}

std::string make_report(const std::vector<ReportRow>& rows) {
    std::ostringstream os;
    os << std::left;
    os << std::setw(10) << "protocol" << std::setw(11) << "mode" << std::setw(12) << "T"
       << std::setw(13) << "pb_final" << std::setw(13) << "pb_min" << std::setw(13) << "t_ground"
       << std::setw(13) << "t_cooled" << std::setw(12) << "max_R" << std::setw(14)
       << "max|th_dot|" << "\n";
    for (const auto& r : rows) {
        os << std::setw(10) << r.family << std::setw(11) << r.mode << std::setw(12)
           << fmt_short(r.T) << std::setw(13) << fmt_short(r.pb_final) << std::setw(13)
           << fmt_short(r.pb_min) << std::setw(13)
           << (r.t_ground ? fmt_short(*r.t_ground) : std::string("-")) << std::setw(13)
           << (r.t_cooled ? fmt_short(*r.t_cooled) : std::string("-")) << std::setw(12)
           << fmt_short(r.max_R) << std::setw(14) << fmt_short(r.max_theta_dot) << "\n";
    }

    // Speedups: stirap cooling reference time over sta pulse duration.
    bool header_done = false;
    for (const auto& ref : rows) {
        if (ref.mode != "stirap" || !ref.t_cooled) continue;
        for (const auto& acc : rows) {
            if (acc.mode != "sta" || acc.family != ref.family) continue;
            const double duration = acc.t_end - acc.t_start;
            if (!(duration > 0.0)) continue;
            if (!header_done) {
                os << "\nspeedup (stirap t_cooled / sta pulse duration):\n";
                header_done = true;
            }
            os << "  " << ref.family << ": " << fmt_short(*ref.t_cooled) << " / "
               << fmt_short(duration) << " = " << fmt_short(*ref.t_cooled / duration) << "\n";
        }
    }
    return os.str();
}

std::string make_report_json(const std::vector<ReportRow>& rows) {
    nlohmann::ordered_json j;
    j["schema"] = "stacool-report-v1";
    j["runs"] = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json e;
        e["protocol"] = r.family;
        e["mode"] = r.mode;
        e["T"] = r.T;
        e["t_start"] = r.t_start;
        e["t_end"] = r.t_end;
        e["pb_final"] = r.pb_final;
        e["pb_min"] = r.pb_min;
        e["t_ground"] = r.t_ground ? nlohmann::ordered_json(*r.t_ground)
                                   : nlohmann::ordered_json(nullptr);
        e["t_cooled"] = r.t_cooled ? nlohmann::ordered_json(*r.t_cooled)
                                   : nlohmann::ordered_json(nullptr);
        e["max_R"] = r.max_R;
        e["max_theta_dot"] = r.max_theta_dot;
        e["ratio_start"] = std::isfinite(r.ratio_start) ? r.ratio_start : -1.0;
        e["ratio_end"] = r.ratio_end;
        j["runs"].push_back(e);
    }
    j["speedups"] = nlohmann::ordered_json::array();
    for (const auto& ref : rows) {
        if (ref.mode != "stirap" || !ref.t_cooled) continue;
        for (const auto& acc : rows) {
            if (acc.mode != "sta" || acc.family != ref.family) continue;
            const double duration = acc.t_end - acc.t_start;
            if (!(duration > 0.0)) continue;
            nlohmann::ordered_json e;
            e["protocol"] = ref.family;
            e["t_cooled"] = *ref.t_cooled;
            e["sta_duration"] = duration;
            e["speedup"] = *ref.t_cooled / duration;
            j["speedups"].push_back(e);
        }
    }
    return j.dump(2) + "\n";
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = lo;
        return v;
    }
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return v;
}

SweepResult sweep_detuning(const std::vector<ScenarioConfig>& configs,
                           const std::vector<double>& deltas, unsigned jobs) {
    SweepResult out;
    out.deltas = deltas;
    out.labels.reserve(configs.size());
    for (const auto& c : configs) out.labels.push_back(family_name(c.protocol));
    out.pb_final.assign(configs.size(), std::vector<double>(deltas.size(), 0.0));

    struct Task {
        std::size_t ci, di;
    };
    std::vector<Task> tasks;
    tasks.reserve(configs.size() * deltas.size());
    for (std::size_t ci = 0; ci < configs.size(); ++ci)
        for (std::size_t di = 0; di < deltas.size(); ++di) tasks.push_back({ci, di});

    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, static_cast<unsigned>(tasks.size()));

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string error_msg;
    std::mutex error_mutex;

    auto worker = [&]() {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= tasks.size() || failed.load()) return;
            ScenarioConfig cfg = configs[tasks[k].ci];
            cfg.delta = deltas[tasks[k].di];
            try {
                const RunResult r = run_scenario(cfg);
                out.pb_final[tasks[k].ci][tasks[k].di] = r.pb_final;
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                failed.store(true);
                if (error_msg.empty()) error_msg = e.what();
            }
        }
    };

    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (unsigned i = 0; i < jobs; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failed.load()) throw IntegrationError("sweep failed: " + error_msg);
    return out;
}

void write_sweep_csv(std::ostream& os, const SweepResult& sweep) {
    os << "# stacool sweep v1\n";
    os << "delta";
    for (const auto& l : sweep.labels) os << ",pb_" << l;
    os << "\n";
    for (std::size_t di = 0; di < sweep.deltas.size(); ++di) {
        os << fmt(sweep.deltas[di]);
        for (std::size_t ci = 0; ci < sweep.labels.size(); ++ci) {
            os << ',' << fmt(sweep.pb_final[ci][di]);
        }
        os << "\n";
    }
}

} // namespace stacool
