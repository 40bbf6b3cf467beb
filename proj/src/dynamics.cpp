#include "stacool/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace stacool {

MomentState initial_state(double n0) {
    if (n0 < 0.0) {
        throw DomainError("initial_state: occupation must be non-negative");
    }
    MomentState s{};
    s[kNb] = n0;
    return s;
}

CouplingFns CouplingFns::zero() {
    CouplingFns f;
    f.J = [](double) { return 0.0; };
    f.G2 = [](double) { return 0.0; };
    f.G1 = [](double) { return cxd(0.0, 0.0); };
    return f;
}

CouplingFns CouplingFns::from_schedule(const CouplingSchedule& sched) {
    CouplingFns f;
    f.J = [sched](double t) { return sched.J(t); };
    f.G2 = [sched](double t) { return sched.G2(t); };
    f.G1 = [sched](double t) { return sched.G1(t); };
    return f;
}

void moment_rhs(double t, std::span<const cxd> y, std::span<cxd> dy, const SystemParams& sys,
                double J, double G2, cxd G1) {
    const cxd i(0.0, 1.0);
    const cxd G1c = std::conj(G1);
    const double k1 = sys.kappa1, k2 = sys.kappa2, gm = sys.gamma_m;
    const double delta = sys.delta;

    // Counter-rotating phase factors on the G2 channel only.
    cxd Ep(0.0, 0.0), Em(0.0, 0.0);
    if (sys.include_counter_rotating) {
        const double ph = 2.0 * sys.omega_m * t;
        Ep = cxd(std::cos(ph), std::sin(ph));
        Em = std::conj(Ep);
    }

    const cxd n1 = y[kN1], n2 = y[kN2], nb = y[kNb];
    const cxd m12 = y[kM12], m1b = y[kM1b], m2b = y[kM2b];
    const cxd p12 = y[kP12], p1b = y[kP1b], p2b = y[kP2b];
    const cxd s11 = y[kS11], s22 = y[kS22], sbb = y[kSbb];

    // Conjugate partners of the canonical set.
    const cxd m12c = std::conj(m12); // <a1 a2+>
    const cxd m1bc = std::conj(m1b); // <a1 b+>
    const cxd m2bc = std::conj(m2b); // <a2 b+>
    const cxd p2bc = std::conj(p2b); // <a2 b>
    const cxd sbbc = std::conj(sbb); // <b b>

    dy[kN1] = -i * J * m12 + i * J * m12c - i * G1 * m1b + i * G1c * m1bc - k1 * n1;

    dy[kN2] = i * J * m12 - i * J * m12c - i * G2 * m2b + i * G2 * m2bc - k2 * n2 -
              i * G2 * Ep * p2b + i * G2 * Em * p2bc;

    dy[kNb] = i * G1 * m1b - i * G1c * m1bc + i * G2 * m2b - i * G2 * m2bc - gm * nb +
              gm * sys.n_bar - i * G2 * Ep * p2b + i * G2 * Em * p2bc;

    dy[kM12] = -(i * delta + 0.5 * (k1 + k2)) * m12 - i * J * n1 + i * J * n2 - i * G2 * m1b +
               i * G1c * m2bc - i * G2 * Ep * p1b;

    dy[kM1b] = i * J * m2b - i * G2 * m12 - i * G1c * n1 + i * G1c * nb -
               0.5 * (k1 + gm) * m1b - i * G2 * Ep * p12;

    dy[kM2b] = (i * delta - 0.5 * (k2 + gm)) * m2b + i * J * m1b - i * G2 * n2 + i * G2 * nb -
               i * G1c * m12c - i * G2 * Ep * s22 + i * G2 * Em * sbbc;

    dy[kP12] = (i * delta - 0.5 * (k1 + k2)) * p12 + i * J * s11 + i * J * s22 + i * G2 * p1b +
               i * G1c * p2b + i * G2 * Em * m1b;

    dy[kP1b] = i * J * p2b + i * G2 * p12 + i * G1 * s11 + i * G1c * sbb -
               0.5 * (k1 + gm) * p1b + i * G2 * Em * m12;

    dy[kP2b] = (i * delta - 0.5 * (k2 + gm)) * p2b + i * J * p1b + i * G2 * s22 + i * G2 * sbb +
               i * G1 * p12 + i * G2 * Em * (n2 + nb + 1.0);

    dy[kS11] = 2.0 * i * J * p12 + 2.0 * i * G1c * p1b - k1 * s11;

    dy[kS22] = (2.0 * i * delta - k2) * s22 + 2.0 * i * J * p12 + 2.0 * i * G2 * p2b +
               2.0 * i * G2 * Em * m2b;

    dy[kSbb] = 2.0 * i * G1 * p1b + 2.0 * i * G2 * p2b - gm * sbb + 2.0 * i * G2 * Em * m2bc;
}

namespace {

double pb_of(std::span<const cxd> y) { return y[kNb].real(); }

} // namespace

RunResult integrate(const SystemParams& sys, const CouplingFns& fns, const MomentState& initial,
                    double t_start, double t_end, const IntegrateOptions& opts) {
    if (!(t_end > t_start)) {
        throw ConfigError("integrate: window must satisfy t_end > t_start");
    }
    const std::size_t n_grid = std::max<std::size_t>(2, opts.grid_points);

    RunResult res;
    res.t_start = t_start;
    res.t_end = t_end;
    res.t.resize(n_grid);
    res.P1.resize(n_grid);
    res.P2.resize(n_grid);
    res.Pb.resize(n_grid);
    for (std::size_t i = 0; i < n_grid; ++i) {
        res.t[i] = t_start + (t_end - t_start) * static_cast<double>(i) /
                                 static_cast<double>(n_grid - 1);
    }

    std::vector<cxd> y(initial.begin(), initial.end());

    auto rhs = [&sys, &fns](double t, std::span<const cxd> yy, std::span<cxd> dd) {
        moment_rhs(t, yy, dd, sys, fns.J(t), fns.G2(t), fns.G1(t));
    };

    res.P1[0] = y[kN1].real();
    res.P2[0] = y[kN2].real();
    res.Pb[0] = y[kNb].real();
    res.pb_min = res.Pb[0];
    if (res.Pb[0] < opts.ground_level) res.t_ground = t_start;

    std::size_t next_sample = 1;
    std::array<cxd, kMomentCount> buf{};

    // Trailing accepted-node window for the local-minimum (reference time)
    // detection. Accepted steps resolve the fastest oscillation, so node
    // triples locate interior minima to within a step.
    double tm2 = t_start, tm1 = t_start;
    double pm2 = res.Pb[0], pm1 = res.Pb[0];
    bool have2 = false;

    auto parabola_vertex = [](double x1, double y1, double x2, double y2, double x3, double y3) {
        const double a = (x2 - x1) * (y2 - y3);
        const double b = (x2 - x3) * (y2 - y1);
        const double den = a - b;
        if (den == 0.0) return x2;
        const double t = x2 - 0.5 * ((x2 - x1) * a - (x2 - x3) * b) / den;
        return std::clamp(t, x1, x3);
    };

    auto on_step = [&](const StepView& s) {
        // Reporting-grid samples inside this step.
        while (next_sample < n_grid && res.t[next_sample] <= s.t1) {
            const double ts = res.t[next_sample];
            s.eval_all(ts, std::span<cxd>(buf));
            res.P1[next_sample] = buf[kN1].real();
            res.P2[next_sample] = buf[kN2].real();
            res.Pb[next_sample] = buf[kNb].real();
            res.pb_min = std::min(res.pb_min, res.Pb[next_sample]);
            ++next_sample;
        }
        const double pb0 = s.y0[kNb].real();
        const double pb1 = s.y1[kNb].real();
        res.pb_min = std::min(res.pb_min, pb1);
        if (!res.t_ground && pb0 >= opts.ground_level && pb1 < opts.ground_level) {
            res.t_ground = bisect_crossing(
                s, [](std::span<const cxd> v) { return pb_of(v); }, opts.ground_level,
                opts.crossing_time_tol);
        }
        if (!res.t_cooled && have2 && pm1 < opts.ground_level && pm1 < pm2 && pm1 <= pb1) {
            res.t_cooled = parabola_vertex(tm2, pm2, tm1, pm1, s.t1, pb1);
        }
        tm2 = tm1;
        pm2 = pm1;
        tm1 = s.t1;
        pm1 = pb1;
        have2 = true;
    };

    res.stats = integrate_adaptive(rhs, y, t_start, t_end, opts.ode, on_step);
    if (!res.t_cooled && y[kNb].real() < opts.ground_level) {
        res.t_cooled = t_end; // still decreasing at the end: minimum sits there
    }

    // Final state exactly from the integrator, not the interpolant.
    std::copy(y.begin(), y.end(), res.final_state.begin());
    res.pb_final = y[kNb].real();
    res.P1[n_grid - 1] = y[kN1].real();
    res.P2[n_grid - 1] = y[kN2].real();
    res.Pb[n_grid - 1] = y[kNb].real();
    res.pb_min = std::min(res.pb_min, res.pb_final);
    return res;
}

RunResult integrate(const SystemParams& sys, const CouplingSchedule& sched,
                    const MomentState& initial, const IntegrateOptions& opts) {
    RunResult res = integrate(sys, CouplingFns::from_schedule(sched), initial,
                              sched.protocol.t_start, sched.protocol.t_end, opts);
    res.diag.max_R = max_adiabatic_ratio(sched.protocol, sched.delta);
    res.diag.max_theta_dot = max_theta_dot(sched.protocol);
    res.diag.ratio_start = coupling_ratio(sched.protocol, sched.protocol.t_start);
    res.diag.ratio_end = coupling_ratio(sched.protocol, sched.protocol.t_end);
    return res;
}

FiguresOfMerit figures_of_merit(const RunResult& run) {
    FiguresOfMerit f;
    f.pb_final = run.pb_final;
    f.pb_min = run.pb_min;
    f.t_ground = run.t_ground;
    f.t_cooled = run.t_cooled;
    return f;
}

std::optional<double> cooling_speedup(const RunResult& reference, const RunResult& accelerated) {
    if (!reference.t_cooled) return std::nullopt;
    const double duration = accelerated.t_end - accelerated.t_start;
    if (!(duration > 0.0)) return std::nullopt;
    return *reference.t_cooled / duration;
}

} // namespace stacool
