#include "stacool/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace stacool {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Endpoint thresholds for the counterintuitive-ordering check. Relaxed from
// the values the default windows achieve (>= 1e4 / <= 1.5e-3) to tolerate
// user-supplied windows.
constexpr double kStartRatioMin = 1e3;
constexpr double kEndRatioMax = 1e-2;

struct Sin4Terms {
    double sJ, cJ; // sin/cos of pi (t + xi) / T  (J pulse)
    double sG, cG; // sin/cos of pi t / T         (G2 pulse)
};

Sin4Terms sin4_terms(const ProtocolParams& p, double t) {
    Sin4Terms r;
    const double wJ = kPi * (t + p.xi) / p.T;
    const double wG = kPi * t / p.T;
    r.sJ = std::sin(wJ);
    r.cJ = std::cos(wJ);
    r.sG = std::sin(wG);
    r.cG = std::cos(wG);
    return r;
}

// Vitanov pulse angle f(t) = (pi/2) e^{t/T} / (e^{t/T} + e^{10}), written with
// the stable form 1/(1 + e^{10 - t/T}).
struct VitanovTerms {
    double f, fdot, fddot;
};

VitanovTerms vitanov_terms(const ProtocolParams& p, double t) {
    VitanovTerms r;
    const double u = t / p.T - 10.0;
    const double sig = 1.0 / (1.0 + std::exp(-u));   // e^{t/T} / (e^{t/T} + e^{10})
    const double sig1 = 1.0 / (1.0 + std::exp(u));   // e^{10}  / (e^{t/T} + e^{10})
    r.f = 0.5 * kPi * sig;
    r.fdot = 0.5 * kPi * sig * sig1 / p.T;
    r.fddot = 0.5 * kPi * sig * sig1 * (sig1 - sig) / (p.T * p.T);
    return r;
}

} // namespace

const char* family_name(ProtocolFamily family) {
    switch (family) {
    case ProtocolFamily::Gaussian: return "gaussian";
    case ProtocolFamily::Sin4: return "sin4";
    case ProtocolFamily::InvSqrt: return "invsqrt";
    case ProtocolFamily::Vitanov: return "vitanov";
    }
    return "unknown";
}

ProtocolFamily family_from_name(const std::string& name) {
    std::string s;
    s.reserve(name.size());
    for (char c : name) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (s == "gaussian") return ProtocolFamily::Gaussian;
    if (s == "sin4" || s == "sin^4") return ProtocolFamily::Sin4;
    if (s == "invsqrt" || s == "inv_sqrt") return ProtocolFamily::InvSqrt;
    if (s == "vitanov") return ProtocolFamily::Vitanov;
    throw ConfigError("unknown protocol family '" + name +
                      "' (expected gaussian, sin4, invsqrt, or vitanov)");
}

Window default_window(ProtocolFamily family, double T, double xi, double t_f) {
    switch (family) {
    case ProtocolFamily::Gaussian: return {0.0, 2.0 * t_f};
    case ProtocolFamily::Sin4: return {0.0, T - xi};
    case ProtocolFamily::InvSqrt: return {0.0, 2.0 * t_f};
    case ProtocolFamily::Vitanov: return {0.0, 20.0 * T};
    }
    return {0.0, 0.0};
}

ProtocolParams with_defaults(ProtocolFamily family, double g, double T, double xi, double t_f,
                             double t_start, double t_end) {
    ProtocolParams p;
    p.family = family;
    p.g = g;
    p.T = T;
    p.xi = xi;
    p.t_f = t_f;
    if (p.xi <= 0.0) {
        if (family == ProtocolFamily::Gaussian) p.xi = 0.8 * T;
        if (family == ProtocolFamily::Sin4) p.xi = 0.5 * T;
    }
    if (p.t_f <= 0.0) {
        if (family == ProtocolFamily::Gaussian) p.t_f = 3.0 * T;
        if (family == ProtocolFamily::InvSqrt) p.t_f = 20.0 * T;
    }
    const Window w = default_window(family, p.T, p.xi, p.t_f);
    p.t_start = t_start;
    p.t_end = (t_end > 0.0) ? t_end : w.t_end;
    return p;
}

PulsePair eval_pulses(const ProtocolParams& p, double t) {
    PulsePair r;
    switch (p.family) {
    case ProtocolFamily::Gaussian: {
        // Squared exponents: consistent with the tabulated theta_dot form.
        const double u = (t - p.t_f + p.xi) / p.T;
        const double v = (t - p.t_f - p.xi) / p.T;
        r.J = p.g * std::exp(-u * u);
        r.G2 = p.g * std::exp(-v * v);
        break;
    }
    case ProtocolFamily::Sin4: {
        const Sin4Terms s = sin4_terms(p, t);
        const double sJ2 = s.sJ * s.sJ, sG2 = s.sG * s.sG;
        r.J = p.g * sJ2 * sJ2;
        r.G2 = p.g * sG2 * sG2;
        break;
    }
    case ProtocolFamily::InvSqrt: {
        const double u = (t - p.t_f) / p.T;
        r.J = p.g / std::sqrt(1.0 + std::exp(u));
        r.G2 = p.g / std::sqrt(1.0 + std::exp(-u));
        break;
    }
    case ProtocolFamily::Vitanov: {
        const VitanovTerms v = vitanov_terms(p, t);
        r.J = p.g * std::cos(v.f);
        r.G2 = p.g * std::sin(v.f);
        break;
    }
    }
    return r;
}

PulseDerivs eval_pulse_derivs(const ProtocolParams& p, double t) {
    PulseDerivs d;
    const PulsePair pp = eval_pulses(p, t);
    d.J = pp.J;
    d.G2 = pp.G2;
    switch (p.family) {
    case ProtocolFamily::Gaussian: {
        const double u = (t - p.t_f + p.xi) / p.T;
        const double v = (t - p.t_f - p.xi) / p.T;
        const double iT = 1.0 / p.T;
        d.Jdot = -2.0 * u * iT * d.J;
        d.G2dot = -2.0 * v * iT * d.G2;
        d.Jddot = (4.0 * u * u - 2.0) * iT * iT * d.J;
        d.G2ddot = (4.0 * v * v - 2.0) * iT * iT * d.G2;
        break;
    }
    case ProtocolFamily::Sin4: {
        const Sin4Terms s = sin4_terms(p, t);
        const double w = kPi / p.T;
        d.Jdot = 4.0 * p.g * w * s.sJ * s.sJ * s.sJ * s.cJ;
        d.G2dot = 4.0 * p.g * w * s.sG * s.sG * s.sG * s.cG;
        d.Jddot = 4.0 * p.g * w * w * s.sJ * s.sJ * (3.0 * s.cJ * s.cJ - s.sJ * s.sJ);
        d.G2ddot = 4.0 * p.g * w * w * s.sG * s.sG * (3.0 * s.cG * s.cG - s.sG * s.sG);
        break;
    }
    case ProtocolFamily::InvSqrt: {
        const double u = (t - p.t_f) / p.T;
        const double iT = 1.0 / p.T;
        const double eu = std::exp(u);
        const double emu = std::exp(-u);
        const double qJ = 1.0 + eu;
        const double qG = 1.0 + emu;
        d.Jdot = -0.5 * p.g * iT * eu * std::pow(qJ, -1.5);
        d.G2dot = 0.5 * p.g * iT * emu * std::pow(qG, -1.5);
        d.Jddot = p.g * iT * iT * (0.75 * eu * eu * std::pow(qJ, -2.5) -
                                   0.5 * eu * std::pow(qJ, -1.5));
        d.G2ddot = p.g * iT * iT * (0.75 * emu * emu * std::pow(qG, -2.5) -
                                    0.5 * emu * std::pow(qG, -1.5));
        break;
    }
    case ProtocolFamily::Vitanov: {
        const VitanovTerms v = vitanov_terms(p, t);
        const double sf = std::sin(v.f), cf = std::cos(v.f);
        d.Jdot = -p.g * sf * v.fdot;
        d.G2dot = p.g * cf * v.fdot;
        d.Jddot = -p.g * (cf * v.fdot * v.fdot + sf * v.fddot);
        d.G2ddot = p.g * (-sf * v.fdot * v.fdot + cf * v.fddot);
        break;
    }
    }
    return d;
}

double eval_theta_dot(const ProtocolParams& p, double t) {
    switch (p.family) {
    case ProtocolFamily::Gaussian: {
        const double arg = 4.0 * p.xi * (t - p.t_f) / (p.T * p.T);
        return -2.0 * p.xi / (p.T * p.T * std::cosh(arg));
    }
    case ProtocolFamily::Sin4: {
        const Sin4Terms s = sin4_terms(p, t);
        const double sG3 = s.sG * s.sG * s.sG;
        const double sJ3 = s.sJ * s.sJ * s.sJ;
        const double sG8 = sG3 * sG3 * s.sG * s.sG;
        const double sJ8 = sJ3 * sJ3 * s.sJ * s.sJ;
        const double den = sG8 + sJ8;
        if (den == 0.0) return 0.0;
        return -4.0 * kPi / p.T * std::sin(kPi * p.xi / p.T) * sG3 * sJ3 / den;
    }
    case ProtocolFamily::InvSqrt: {
        const double arg = (t - p.t_f) / (2.0 * p.T);
        return -1.0 / (4.0 * p.T * std::cosh(arg));
    }
    case ProtocolFamily::Vitanov:
        // theta = pi/2 - f, so theta_dot = -f'.
        return -vitanov_terms(p, t).fdot;
    }
    return 0.0;
}

double eval_theta_ddot(const ProtocolParams& p, double t) {
    // theta_dot = (Jdot G2 - J G2dot) / g0^2; differentiate the quotient.
    const PulseDerivs d = eval_pulse_derivs(p, t);
    const double g0sq = d.J * d.J + d.G2 * d.G2;
    if (g0sq == 0.0) return 0.0;
    const double num = d.Jdot * d.G2 - d.J * d.G2dot;
    const double num_dot = d.Jddot * d.G2 - d.J * d.G2ddot;
    const double g0sq_dot = 2.0 * (d.J * d.Jdot + d.G2 * d.G2dot);
    return num_dot / g0sq - num * g0sq_dot / (g0sq * g0sq);
}

namespace {

void check_window(const ProtocolParams& p, double t) {
    const double slop = 1e-9 * std::max(1.0, p.t_end - p.t_start);
    if (t < p.t_start - slop || t > p.t_end + slop) {
        std::ostringstream os;
        os << "time " << t << " outside simulation window [" << p.t_start << ", " << p.t_end
           << "]";
        throw DomainError(os.str());
    }
}

} // namespace

PulsePair pulse_pair(const ProtocolParams& p, double t) {
    check_window(p, t);
    return eval_pulses(p, t);
}

double mixing_theta(const ProtocolParams& p, double t) {
    check_window(p, t);
    const PulsePair pp = eval_pulses(p, t);
    return std::atan2(pp.J, pp.G2);
}

double theta_dot(const ProtocolParams& p, double t) {
    check_window(p, t);
    return eval_theta_dot(p, t);
}

PhiPair phi_angles(const ProtocolParams& p, double t, double delta) {
    const PulsePair pp = eval_pulses(p, t);
    const double g0 = std::hypot(pp.J, pp.G2);
    if (g0 <= 0.0) {
        throw SingularityError("phi_angles: both couplings vanish (g0 = 0)");
    }
    PhiPair r;
    // tan(2 phi) = 2 g0 / delta with phi in (0, pi/2).
    r.phi = 0.5 * std::atan2(2.0 * g0, delta);
    const PulseDerivs d = eval_pulse_derivs(p, t);
    const double g0dot = (d.J * d.Jdot + d.G2 * d.G2dot) / g0;
    r.phi_dot = g0dot * delta / (delta * delta + 4.0 * g0 * g0);
    return r;
}

double adiabatic_ratio(const ProtocolParams& p, double t, double delta) {
    const PulsePair pp = eval_pulses(p, t);
    const double g0 = std::hypot(pp.J, pp.G2);
    const double s = std::sqrt(0.25 * delta * delta + g0 * g0);
    const double den = std::min(std::abs(0.5 * delta + s), std::abs(0.5 * delta - s));
    if (den <= 0.0) {
        throw SingularityError("adiabatic_ratio: both eigenvalue branches vanish");
    }
    return std::abs(eval_theta_dot(p, t)) / den;
}

AngleSample angle_sample(const ProtocolParams& p, double t, double delta) {
    AngleSample s;
    s.t = t;
    const PulsePair pp = eval_pulses(p, t);
    s.J = pp.J;
    s.G2 = pp.G2;
    s.g0 = std::hypot(pp.J, pp.G2);
    s.theta = std::atan2(pp.J, pp.G2);
    s.theta_dot = eval_theta_dot(p, t);
    if (s.g0 > 0.0) {
        const PhiPair ph = phi_angles(p, t, delta);
        s.phi = ph.phi;
        s.phi_dot = ph.phi_dot;
        s.R = adiabatic_ratio(p, t, delta);
    }
    return s;
}

double coupling_ratio(const ProtocolParams& p, double t) {
    const PulsePair pp = eval_pulses(p, t);
    if (pp.G2 == 0.0) {
        return pp.J > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
    }
    return pp.J / pp.G2;
}

namespace {

// Golden-section refinement of a scalar maximum inside [lo, hi].
template <typename F>
double refine_max(F&& f, double lo, double hi) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < 80; ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        }
    }
    return std::max(f1, f2);
}

template <typename F>
double grid_max(F&& f, double lo, double hi, int n) {
    double best = -std::numeric_limits<double>::infinity();
    int best_i = 0;
    for (int i = 0; i <= n; ++i) {
        const double t = lo + (hi - lo) * i / n;
        const double v = f(t);
        if (v > best) {
            best = v;
            best_i = i;
        }
    }
    const double h = (hi - lo) / n;
    const double a = std::max(lo, lo + best_i * h - h);
    const double b = std::min(hi, lo + best_i * h + h);
    return std::max(best, refine_max(f, a, b));
}

} // namespace

double max_theta_dot(const ProtocolParams& p) {
    auto f = [&p](double t) { return std::abs(eval_theta_dot(p, t)); };
    return grid_max(f, p.t_start, p.t_end, 4096);
}

double max_adiabatic_ratio(const ProtocolParams& p, double delta) {
    auto f = [&p, delta](double t) { return adiabatic_ratio(p, t, delta); };
    return grid_max(f, p.t_start, p.t_end, 4096);
}

std::vector<std::string> ProtocolParams::validate() const {
    std::vector<std::string> v;
    if (!(g > 0.0)) v.push_back("g must be > 0");
    if (!(T > 0.0)) v.push_back("T must be > 0");
    if (!(t_start >= 0.0)) v.push_back("t_start must be >= 0");
    if (!(t_end > t_start)) v.push_back("t_end must be > t_start");
    if (family == ProtocolFamily::Gaussian && !(xi > 0.0)) {
        v.push_back("gaussian protocol requires xi > 0");
    }
    if (family == ProtocolFamily::Sin4) {
        if (!(xi > 0.0 && xi < T)) v.push_back("sin4 protocol requires 0 < xi < T");
        if (t_end > T - xi + 1e-12 * T) {
            v.push_back("sin4 protocol requires t_end <= T - xi (both pulses in their first lobe)");
        }
    }
    if (!v.empty()) return v; // endpoint ratios are meaningless on a broken window

    const double r_start = coupling_ratio(*this, t_start);
    const double r_end = coupling_ratio(*this, t_end);
    if (!(r_start >= kStartRatioMin)) {
        std::ostringstream os;
        os << "counterintuitive ordering violated at t_start: J/G2 = " << r_start << " < 1e3";
        v.push_back(os.str());
    }
    if (!(r_end <= kEndRatioMax)) {
        std::ostringstream os;
        os << "counterintuitive ordering violated at t_end: J/G2 = " << r_end << " > 1e-2";
        v.push_back(os.str());
    }
    return v;
}

void ProtocolParams::validate_or_throw() const {
    const auto v = validate();
    if (v.empty()) return;
    std::string msg = "invalid protocol parameters:";
    for (const auto& s : v) msg += "\n  - " + s;
    throw ConfigError(msg);
}

} // namespace stacool
