#pragma once

// Reconstruction of the physical pulsed-drive amplitudes Omega1(t), Omega2(t)
// that realize prescribed linearized couplings G_i(t) = g_i alpha_i(t). The
// mechanical displacement beta(t) is integrated from its equation of motion
// (driven by |alpha_i|^2); the cavity displacement equations are then
// inverted algebraically for the drives.

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "stacool/dynamics.hpp"
#include "stacool/integrator.hpp"
#include "stacool/protocols.hpp"

namespace stacool {

// Prescribed couplings with the analytic time derivatives the inversion needs.
struct DriveInputs {
    std::function<double(double)> J;
    std::function<double(double)> G2;
    std::function<double(double)> G2dot;
    std::function<cxd(double)> G1;
    std::function<cxd(double)> G1dot;

    static DriveInputs zero();
    static DriveInputs from_schedule(const CouplingSchedule& sched);
};

struct DrivePair {
    std::vector<double> t;
    std::vector<cxd> Omega1; // empty when the a1 drive is skipped (g1 = 0)
    std::vector<cxd> Omega2;
};

class DriveReconstruction {
public:
    // Integrates beta over [t_start, t_end] with beta(0) = 0. Throws
    // ConfigError when g_i = 0 while the corresponding G_i is nonzero.
    DriveReconstruction(DriveInputs inputs, SystemParams sys, double t_start, double t_end,
                        IntegratorOptions ode = {.rtol = 1e-11, .atol = 1e-14});

    cxd beta(double t) const;
    cxd alpha1(double t) const;
    cxd alpha2(double t) const;

    bool has_omega1() const { return has_omega1_; }
    cxd omega1(double t) const; // throws DomainError when skipped
    cxd omega2(double t) const;

    DrivePair sample(std::size_t n_points) const;

    // max over the window of 2 g_i |Re beta(t)| / Delta_i (the displaced-frame
    // detuning shift that the linearization neglects).
    double max_detuning_shift_ratio(std::size_t n_points = 2000) const;

    double t_start() const { return t_start_; }
    double t_end() const { return t_end_; }
    const SystemParams& system() const { return sys_; }
    const DriveInputs& inputs() const { return inputs_; }

private:
    DriveInputs inputs_;
    SystemParams sys_;
    double t_start_, t_end_;
    bool has_omega1_ = true;
    DenseSolution beta_;
};

// beta(t) sampled on a uniform grid (convenience wrapper).
std::vector<cxd> beta_trajectory(const DriveInputs& inputs, const SystemParams& sys,
                                 double t_start, double t_end, std::size_t n_points);

// Full reconstruction sampled on a uniform grid.
DrivePair reconstruct_drives(const CouplingSchedule& sched, const SystemParams& sys,
                             std::size_t n_points);

} // namespace stacool
