#include "stacool/drives.hpp"

#include <cmath>

namespace stacool {

DriveInputs DriveInputs::zero() {
    DriveInputs d;
    d.J = [](double) { return 0.0; };
    d.G2 = [](double) { return 0.0; };
    d.G2dot = [](double) { return 0.0; };
    d.G1 = [](double) { return cxd(0.0, 0.0); };
    d.G1dot = [](double) { return cxd(0.0, 0.0); };
    return d;
}

DriveInputs DriveInputs::from_schedule(const CouplingSchedule& sched) {
    DriveInputs d;
    const ProtocolParams p = sched.protocol;
    d.J = [p](double t) { return eval_pulses(p, t).J; };
    d.G2 = [p](double t) { return eval_pulses(p, t).G2; };
    d.G2dot = [p](double t) { return eval_pulse_derivs(p, t).G2dot; };
    if (sched.cd_enabled) {
        d.G1 = [p](double t) { return cxd(0.0, eval_theta_dot(p, t)); };
        d.G1dot = [p](double t) { return cxd(0.0, eval_theta_ddot(p, t)); };
    } else {
        d.G1 = [](double) { return cxd(0.0, 0.0); };
        d.G1dot = [](double) { return cxd(0.0, 0.0); };
    }
    return d;
}

DriveReconstruction::DriveReconstruction(DriveInputs inputs, SystemParams sys, double t_start,
                                         double t_end, IntegratorOptions ode)
    : inputs_(std::move(inputs)), sys_(sys), t_start_(t_start), t_end_(t_end) {
    // Channel consistency: a prescribed coupling needs its single-photon rate.
    auto max_abs = [&](auto&& f) {
        double m = 0.0;
        for (int i = 0; i <= 256; ++i) {
            const double t = t_start_ + (t_end_ - t_start_) * i / 256.0;
            m = std::max(m, std::abs(f(t)));
        }
        return m;
    };
    const double g1_needed = max_abs(inputs_.G1);
    const double g2_needed = max_abs(inputs_.G2);
    if (sys_.g1 == 0.0 && g1_needed > 0.0) {
        throw ConfigError("drive reconstruction: G1 prescribed but g1 = 0");
    }
    if (sys_.g2 == 0.0 && g2_needed > 0.0) {
        throw ConfigError("drive reconstruction: G2 prescribed but g2 = 0");
    }
    has_omega1_ = (sys_.g1 != 0.0);

    // beta' = (-i omega_m - gamma_m/2) beta - i (g1 |alpha1|^2 + g2 |alpha2|^2)
    const double g1 = sys_.g1, g2 = sys_.g2;
    auto rhs = [this, g1, g2](double t, std::span<const cxd> y, std::span<cxd> dy) {
        const double a1sq = (g1 != 0.0) ? std::norm(inputs_.G1(t)) / (g1 * g1) : 0.0;
        const double a2sq = (g2 != 0.0) ? std::norm(inputs_.G2(t)) / (g2 * g2) : 0.0;
        dy[0] = (cxd(0.0, -sys_.omega_m) - 0.5 * sys_.gamma_m) * y[0] -
                cxd(0.0, 1.0) * (g1 * a1sq + g2 * a2sq);
    };
    std::vector<cxd> y{cxd(0.0, 0.0)};
    beta_ = solve_dense(rhs, std::move(y), t_start_, t_end_, ode);
}

cxd DriveReconstruction::beta(double t) const { return beta_.eval(0, t); }

cxd DriveReconstruction::alpha1(double t) const {
    return (sys_.g1 != 0.0) ? inputs_.G1(t) / sys_.g1 : cxd(0.0, 0.0);
}

cxd DriveReconstruction::alpha2(double t) const {
    return (sys_.g2 != 0.0) ? inputs_.G2(t) / sys_.g2 : cxd(0.0, 0.0);
}

cxd DriveReconstruction::omega1(double t) const {
    if (!has_omega1_) {
        throw DomainError("omega1: a1 drive reconstruction skipped (g1 = 0)");
    }
    const cxd i(0.0, 1.0);
    const double delta1 = sys_.omega_m; // Delta1 = omega_m (quasi-two-photon resonance)
    const cxd a1 = inputs_.G1(t) / sys_.g1;
    const cxd a1dot = inputs_.G1dot(t) / sys_.g1;
    const double re_b = beta(t).real();
    return -i * a1dot + (delta1 + 2.0 * sys_.g1 * re_b - i * 0.5 * sys_.kappa1) * a1 +
           inputs_.J(t) * alpha2(t);
}

cxd DriveReconstruction::omega2(double t) const {
    const cxd i(0.0, 1.0);
    const double delta2 = sys_.omega_m + sys_.delta;
    const cxd a2 = (sys_.g2 != 0.0) ? cxd(inputs_.G2(t) / sys_.g2, 0.0) : cxd(0.0, 0.0);
    const cxd a2dot = (sys_.g2 != 0.0) ? cxd(inputs_.G2dot(t) / sys_.g2, 0.0) : cxd(0.0, 0.0);
    const double re_b = beta(t).real();
    return -i * a2dot + (delta2 + 2.0 * sys_.g2 * re_b - i * 0.5 * sys_.kappa2) * a2 +
           inputs_.J(t) * alpha1(t);
}

DrivePair DriveReconstruction::sample(std::size_t n_points) const {
    DrivePair out;
    const std::size_t n = std::max<std::size_t>(2, n_points);
    out.t.resize(n);
    out.Omega2.resize(n);
    if (has_omega1_) out.Omega1.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t =
            t_start_ + (t_end_ - t_start_) * static_cast<double>(k) / static_cast<double>(n - 1);
        out.t[k] = t;
        out.Omega2[k] = omega2(t);
        if (has_omega1_) out.Omega1[k] = omega1(t);
    }
    return out;
}

double DriveReconstruction::max_detuning_shift_ratio(std::size_t n_points) const {
    const double delta1 = sys_.omega_m;
    const double delta2 = sys_.omega_m + sys_.delta;
    double worst = 0.0;
    for (std::size_t k = 0; k < n_points; ++k) {
        const double t =
            t_start_ + (t_end_ - t_start_) * static_cast<double>(k) /
                           static_cast<double>(n_points - 1);
        const double re_b = std::abs(beta(t).real());
        if (delta1 > 0.0) worst = std::max(worst, 2.0 * sys_.g1 * re_b / delta1);
        if (delta2 > 0.0) worst = std::max(worst, 2.0 * sys_.g2 * re_b / delta2);
    }
    return worst;
}

std::vector<cxd> beta_trajectory(const DriveInputs& inputs, const SystemParams& sys,
                                 double t_start, double t_end, std::size_t n_points) {
    DriveReconstruction rec(inputs, sys, t_start, t_end);
    std::vector<cxd> out(n_points);
    for (std::size_t k = 0; k < n_points; ++k) {
        const double t = t_start + (t_end - t_start) * static_cast<double>(k) /
                                       static_cast<double>(n_points - 1);
        out[k] = rec.beta(t);
    }
    return out;
}

DrivePair reconstruct_drives(const CouplingSchedule& sched, const SystemParams& sys,
                             std::size_t n_points) {
    DriveReconstruction rec(DriveInputs::from_schedule(sched), sys, sched.protocol.t_start,
                            sched.protocol.t_end);
    return rec.sample(n_points);
}

} // namespace stacool
