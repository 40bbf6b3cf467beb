#pragma once

// The four coupling protocols (Gaussian, sin^4, ()^{-1/2}, Vitanov) driving
// the photon-hopping strength J(t) and the linearized optomechanical coupling
// G2(t), together with the mixing angles, their rates, and the adiabaticity
// diagnostics derived from them. All quantities are expressed in units of the
// mechanical frequency (time in 1/omega_m, rates in omega_m).

#include <complex>
#include <string>
#include <vector>

#include "stacool/errors.hpp"

namespace stacool {

using cxd = std::complex<double>;

enum class ProtocolFamily { Gaussian, Sin4, InvSqrt, Vitanov };

const char* family_name(ProtocolFamily family);
ProtocolFamily family_from_name(const std::string& name); // throws ConfigError

struct Window {
    double t_start = 0.0;
    double t_end = 0.0;
};

// Default simulation windows. Chosen so that the counterintuitive-ordering
// ratios J/G2 at the endpoints exceed 1e4 (start) and fall below 1.5e-3 (end)
// for the standard delay/shift choices.
Window default_window(ProtocolFamily family, double T, double xi, double t_f);

struct ProtocolParams {
    ProtocolFamily family = ProtocolFamily::Gaussian;
    double g = 0.1;   // peak coupling strength
    double T = 0.0;   // pulse width
    double xi = 0.0;  // pulse delay (Gaussian, Sin4)
    double t_f = 0.0; // time shift (Gaussian, InvSqrt)
    double t_start = 0.0;
    double t_end = 0.0;

    // Returns every violated invariant; empty when the parameter set is valid.
    std::vector<std::string> validate() const;
    // Throws ConfigError listing all violations.
    void validate_or_throw() const;
};

// Fills xi/t_f/window with the standard choices for the family when the caller
// left them unset (<= 0): xi = 0.8T (Gaussian) or 0.5T (Sin4); t_f = 3T
// (Gaussian) or 20T (InvSqrt).
ProtocolParams with_defaults(ProtocolFamily family, double g, double T, double xi = 0.0,
                             double t_f = 0.0, double t_start = 0.0, double t_end = 0.0);

struct PulsePair {
    double J = 0.0;
    double G2 = 0.0;
};

// Pulse values plus first and second time derivatives (used by the drive
// reconstruction, which needs analytic d/dt of the prescribed couplings).
struct PulseDerivs {
    double J = 0.0, G2 = 0.0;
    double Jdot = 0.0, G2dot = 0.0;
    double Jddot = 0.0, G2ddot = 0.0;
};

// Closed-form evaluation, valid for any t (no window check).
PulsePair eval_pulses(const ProtocolParams& p, double t);
PulseDerivs eval_pulse_derivs(const ProtocolParams& p, double t);
double eval_theta_dot(const ProtocolParams& p, double t);  // tabulated closed form
double eval_theta_ddot(const ProtocolParams& p, double t); // from pulse derivatives

// Window-checked operations.
PulsePair pulse_pair(const ProtocolParams& p, double t);  // throws DomainError off-window
double mixing_theta(const ProtocolParams& p, double t);   // atan2(J, G2) in [0, pi/2]
double theta_dot(const ProtocolParams& p, double t);

struct PhiPair {
    double phi = 0.0;
    double phi_dot = 0.0;
};

// Second mixing angle: tan(phi) = g0 / (sqrt(delta^2/4 + g0^2) + delta/2),
// with rate phi_dot = (d g0/dt) * delta / (delta^2 + 4 g0^2).
PhiPair phi_angles(const ProtocolParams& p, double t, double delta); // throws SingularityError at g0 = 0

// Adiabaticity ratio R(t) = |theta_dot| / min_pm |delta/2 pm sqrt(delta^2/4 + g0^2)|
// (worst case over the two nonzero eigenvalue branches).
double adiabatic_ratio(const ProtocolParams& p, double t, double delta);

// Full diagnostic sample at one instant.
struct AngleSample {
    double t = 0.0;
    double J = 0.0, G2 = 0.0, g0 = 0.0;
    double theta = 0.0, theta_dot = 0.0;
    double phi = 0.0, phi_dot = 0.0;
    double R = 0.0;
};

AngleSample angle_sample(const ProtocolParams& p, double t, double delta);

// Coupling ratio J/G2 (returns +inf when G2 = 0 and J > 0).
double coupling_ratio(const ProtocolParams& p, double t);

// Maximum of |theta_dot| over the window: dense grid plus local refinement.
double max_theta_dot(const ProtocolParams& p);

// Maximum of R(t) over the window: dense grid plus local refinement.
double max_adiabatic_ratio(const ProtocolParams& p, double delta);

// Evaluator bundle consumed by the dynamics, drive-reconstruction, and harness
// layers: the protocol couplings plus the counterdiabatic channel
// G1(t) = i * theta_dot(t) when enabled.
struct CouplingSchedule {
    ProtocolParams protocol;
    double delta = 0.0;
    bool cd_enabled = false;

    double J(double t) const { return eval_pulses(protocol, t).J; }
    double G2(double t) const { return eval_pulses(protocol, t).G2; }
    cxd G1(double t) const {
        return cd_enabled ? cxd(0.0, eval_theta_dot(protocol, t)) : cxd(0.0, 0.0);
    }
    double theta(double t) const { return mixing_theta(protocol, t); }
    double theta_dot(double t) const { return eval_theta_dot(protocol, t); }
    AngleSample sample(double t) const { return angle_sample(protocol, t, delta); }
};

} // namespace stacool
