#pragma once

// Direct integration of the Lindblad master equation in a truncated Fock
// basis for the three-mode system, in the same rotating frame and with the
// same counter-rotating convention as the moment dynamics. Small instances
// only; used as an independent cross-check of the moment equations.

#include <complex>
#include <cstddef>
#include <vector>

#include "stacool/dynamics.hpp"
#include "stacool/errors.hpp"

namespace stacool {

struct FockDims {
    int d1 = 4;
    int d2 = 4;
    int db = 6;
    int total() const { return d1 * d2 * db; }
};

// Density matrix on the product space, row-major dim x dim.
struct FockState {
    FockDims dims;
    std::vector<cxd> rho;

    static FockState vacuum(FockDims dims);
    // Pure Fock state |n1, n2, nb>.
    static FockState fock(FockDims dims, int n1, int n2, int nb);
    // Thermal state of mode b (vacuum in the cavities). Tail beyond the
    // truncation is renormalized away; keep nbar small against db.
    static FockState thermal_b(FockDims dims, double nbar);
};

struct FockRunOptions {
    IntegratorOptions ode{.rtol = 1e-8, .atol = 1e-11};
    std::size_t grid_points = 201;
    double leakage_tol = 1e-6; // max allowed population in any top level
};

// Evolves rho over [t_start, t_end] and samples the three populations on a
// uniform grid. Throws TruncationError if population leaks into the highest
// Fock level of any mode beyond leakage_tol.
RunResult fock_evolve(const SystemParams& sys, const CouplingFns& fns, const FockState& initial,
                      double t_start, double t_end, const FockRunOptions& opts = {});

// Schedule-backed oracle entry (dims product should stay <= ~200).
RunResult fock_oracle(const SystemParams& sys, const CouplingSchedule& sched, FockDims dims,
                      const FockState& initial, const FockRunOptions& opts = {});

} // namespace stacool
