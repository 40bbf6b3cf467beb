#pragma once

// Exact second-order-moment dynamics of the linearized three-mode system under
// the Lindblad master equation, in the frame rotating at the mechanical
// frequency. The twelve canonical moments close on themselves; every
// non-canonical moment appearing on a right-hand side is the conjugate of a
// canonical one.

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "stacool/integrator.hpp"
#include "stacool/protocols.hpp"

namespace stacool {

struct SystemParams {
    double omega_m = 1.0; // unit scale; enters only the e^{+-2 i omega_m t} factors
    double delta = 0.0;   // quasi-single-photon detuning (Delta2 = omega_m + delta)
    double kappa1 = 0.0;
    double kappa2 = 0.0;
    double gamma_m = 0.0;
    double n_bar = 0.0;
    double g1 = 6e-5; // single-photon couplings, used by the drive reconstruction
    double g2 = 6e-5;
    bool include_counter_rotating = true;
};

// Canonical moment ordering used throughout.
enum MomentIndex : std::size_t {
    kN1 = 0,   // <a1+ a1>
    kN2,       // <a2+ a2>
    kNb,       // <b+ b>
    kM12,      // <a1+ a2>
    kM1b,      // <a1+ b>
    kM2b,      // <a2+ b>
    kP12,      // <a1+ a2+>
    kP1b,      // <a1+ b+>
    kP2b,      // <a2+ b+>
    kS11,      // <a1+ a1+>
    kS22,      // <a2+ a2+>
    kSbb,      // <b+ b+>
    kMomentCount
};

using MomentState = std::array<cxd, kMomentCount>;

// State with <b+ b> = n0 and every other moment zero.
MomentState initial_state(double n0); // throws DomainError for n0 < 0

// Time-dependent coupling evaluators consumed by the right-hand side. The
// schedule-backed factory is the production path; tests substitute arbitrary
// functions (zero couplings, constants, ...).
struct CouplingFns {
    std::function<double(double)> J;
    std::function<double(double)> G2;
    std::function<cxd(double)> G1;

    static CouplingFns zero();
    static CouplingFns from_schedule(const CouplingSchedule& sched);
};

// The twelve coupled moment equations. Couplings enter as J(t), real G2(t)
// (with its counter-rotating e^{+-2 i omega_m t} partners), and complex G1(t)
// on the a1-b channel in rotating-wave form.
void moment_rhs(double t, std::span<const cxd> state, std::span<cxd> deriv,
                const SystemParams& sys, double J, double G2, cxd G1);

struct Diagnostics {
    double max_R = 0.0;
    double max_theta_dot = 0.0;
    double ratio_start = 0.0;
    double ratio_end = 0.0;
};

struct RunResult {
    std::vector<double> t;
    std::vector<double> P1, P2, Pb;
    double t_start = 0.0, t_end = 0.0;
    double pb_final = 0.0;
    double pb_min = 0.0;
    // First down-crossing of Pb through the ground level (one phonon).
    std::optional<double> t_ground;
    // Reference time of the cooling: the first local minimum of Pb below the
    // ground level (the end of the rapid cooling phase, where the decay meets
    // the residual floor). For a trace still decreasing at t_end this is
    // t_end itself.
    std::optional<double> t_cooled;
    MomentState final_state{};
    Diagnostics diag;
    IntegrationStats stats;
};

struct IntegrateOptions {
    IntegratorOptions ode; // rtol 1e-9 / atol 1e-12 defaults
    std::size_t grid_points = 2000;
    double crossing_time_tol = 1e-3;
    double ground_level = 1.0;
};

// Adaptive integration of the moment system over [t_start, t_end], sampled on
// a uniform reporting grid. Populations are the real parts of the number
// moments. t_ground is located by bisection on the cubic Hermite interpolant
// of the accepted step containing the first down-crossing.
RunResult integrate(const SystemParams& sys, const CouplingFns& fns, const MomentState& initial,
                    double t_start, double t_end, const IntegrateOptions& opts = {});

// Schedule-backed entry point; also fills the protocol diagnostics.
RunResult integrate(const SystemParams& sys, const CouplingSchedule& sched,
                    const MomentState& initial, const IntegrateOptions& opts = {});

struct FiguresOfMerit {
    double pb_final = 0.0;
    double pb_min = 0.0;
    std::optional<double> t_ground;
    std::optional<double> t_cooled;
};

FiguresOfMerit figures_of_merit(const RunResult& run);

// Cooling speedup of an accelerated protocol over a reference one: the
// reference run's cooling reference time (t_cooled), divided by the
// accelerated run's pulse duration. Empty when the reference never cooled.
std::optional<double> cooling_speedup(const RunResult& reference, const RunResult& accelerated);

} // namespace stacool
