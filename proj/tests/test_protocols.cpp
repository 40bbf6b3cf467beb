#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "deriv_oracle.hpp"
#include "stacool/protocols.hpp"

using namespace stacool;

namespace {

constexpr double kPi = 3.14159265358979323846;

ProtocolParams paper_params(ProtocolFamily family, double T) {
    return with_defaults(family, 0.1, T);
}

double theta_numeric_dot(const ProtocolParams& p, double t, double h) {
    auto th = [&](double tt) {
        const PulsePair pp = eval_pulses(p, tt);
        return std::atan2(pp.J, pp.G2);
    };
    return richardson_derivative(th, t, h);
}

} // namespace

TEST_CASE("gaussian pulses are equal at the symmetry midpoint") {
    const auto p = paper_params(ProtocolFamily::Gaussian, 1600.0);
    const auto pp = pulse_pair(p, p.t_f);
    const double expect = 0.1 * std::exp(-(p.xi / p.T) * (p.xi / p.T));
    CHECK(pp.J == doctest::Approx(expect).epsilon(1e-12));
    CHECK(pp.G2 == doctest::Approx(expect).epsilon(1e-12));
    CHECK(mixing_theta(p, p.t_f) == doctest::Approx(kPi / 4).epsilon(1e-12));
}

TEST_CASE("vitanov pulse starts fully on the J side") {
    const auto p = paper_params(ProtocolFamily::Vitanov, 3.95);
    const auto pp = pulse_pair(p, 0.0);
    CHECK(pp.J == doctest::Approx(0.1).epsilon(1e-6));
    CHECK(pp.G2 < 1e-4);
    CHECK(pp.G2 > 0.0);
}

TEST_CASE("endpoint coupling ratios reproduce the reference values") {
    // Gaussian with xi = 0.8T, t_f = 3T starts at J/G2 = e^{9.6}.
    const auto pg = paper_params(ProtocolFamily::Gaussian, 1600.0);
    CHECK(coupling_ratio(pg, 0.0) == doctest::Approx(1.47e4).epsilon(5e-3));

    // ()^{-1/2} with t_f = 20T has J/G2 ~ 1.04e-3 at the reference end time
    // 8531 (T = 253).
    const auto pi = paper_params(ProtocolFamily::InvSqrt, 253.0);
    CHECK(coupling_ratio(pi, 8531.0) == doctest::Approx(1.04e-3).epsilon(2e-2));

    // Window-start ratios exceed 1e4 in all four families.
    for (auto [family, T] : {std::pair{ProtocolFamily::Gaussian, 1600.0},
                             {ProtocolFamily::Sin4, 35200.0},
                             {ProtocolFamily::InvSqrt, 253.0},
                             {ProtocolFamily::Vitanov, 395.0}}) {
        const auto p = paper_params(family, T);
        CHECK(coupling_ratio(p, p.t_start) >= 1e4);
        CHECK(coupling_ratio(p, p.t_end) <= 1.5e-3);
    }
}

TEST_CASE("mixing angle runs from pi/2 to 0 and is monotone") {
    for (auto [family, T] : {std::pair{ProtocolFamily::Gaussian, 16.0},
                             {ProtocolFamily::Sin4, 126.0},
                             {ProtocolFamily::InvSqrt, 2.53},
                             {ProtocolFamily::Vitanov, 3.95}}) {
        const auto p = paper_params(family, T);
        CHECK(mixing_theta(p, p.t_start) > kPi / 2 - std::atan(1e-3));
        CHECK(mixing_theta(p, p.t_end) < std::atan(1e-2) + 1e-12);
        double prev = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= 2000; ++i) {
            const double t = p.t_start + (p.t_end - p.t_start) * i / 2000.0;
            const double th = mixing_theta(p, t);
            CHECK(th <= prev + 1e-12);
            prev = th;
        }
    }
}

TEST_CASE("coupling ratio J/G2 is strictly decreasing over the window") {
    for (auto [family, T] : {std::pair{ProtocolFamily::Gaussian, 1600.0},
                             {ProtocolFamily::Sin4, 126.0},
                             {ProtocolFamily::InvSqrt, 253.0},
                             {ProtocolFamily::Vitanov, 3.95}}) {
        const auto p = paper_params(family, T);
        double prev = std::numeric_limits<double>::infinity();
        for (int i = 1; i < 2000; ++i) { // open interval; endpoints can be 0/inf
            const double t = p.t_start + (p.t_end - p.t_start) * i / 2000.0;
            const double r = coupling_ratio(p, t);
            CHECK(r < prev);
            prev = r;
        }
    }
}

TEST_CASE("tabulated theta_dot values at the pulse center") {
    const auto pg = paper_params(ProtocolFamily::Gaussian, 16.0);
    CHECK(eval_theta_dot(pg, pg.t_f) ==
          doctest::Approx(-2.0 * pg.xi / (pg.T * pg.T)).epsilon(1e-12));
    const auto pi = paper_params(ProtocolFamily::InvSqrt, 2.53);
    CHECK(eval_theta_dot(pi, pi.t_f) == doctest::Approx(-1.0 / (4.0 * pi.T)).epsilon(1e-12));
}

TEST_CASE("tabulated theta_dot matches numerical differentiation of atan2(J, G2)") {
    // Interior grid: the difference stencil must stay inside the window (the
    // sin^4 pulses fold at t = 0, so mixing_theta has no smooth continuation
    // below t_start).
    for (auto [family, T] : {std::pair{ProtocolFamily::Gaussian, 1600.0},
                             {ProtocolFamily::Sin4, 35200.0},
                             {ProtocolFamily::InvSqrt, 253.0},
                             {ProtocolFamily::Vitanov, 395.0}}) {
        const auto p = paper_params(family, T);
        const double h = 0.01 * p.T;
        const double lo = p.t_start + 2 * h;
        const double hi = p.t_end - 2 * h;
        const double scale = max_theta_dot(p);
        double worst = 0.0;
        for (int i = 0; i <= 10000; ++i) {
            const double t = lo + (hi - lo) * i / 10000.0;
            const double ana = eval_theta_dot(p, t);
            const double num = theta_numeric_dot(p, t, h);
            const double rel = std::abs(ana - num) / (std::abs(ana) + 1e-9 * scale);
            worst = std::max(worst, rel);
        }
        CAPTURE(family_name(family));
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("theta_ddot matches numerical differentiation of theta_dot") {
    for (auto [family, T] : {std::pair{ProtocolFamily::Gaussian, 16.0},
                             {ProtocolFamily::Sin4, 126.0},
                             {ProtocolFamily::InvSqrt, 2.53},
                             {ProtocolFamily::Vitanov, 3.95}}) {
        const auto p = paper_params(family, T);
        const double h = 1e-3 * p.T;
        const double scale = max_theta_dot(p) / p.T;
        for (int i = 0; i <= 500; ++i) {
            const double t = p.t_start + (p.t_end - p.t_start) * i / 500.0;
            const double ana = eval_theta_ddot(p, t);
            const double num = (-eval_theta_dot(p, t + 2 * h) + 8 * eval_theta_dot(p, t + h) -
                                8 * eval_theta_dot(p, t - h) + eval_theta_dot(p, t - 2 * h)) /
                               (12 * h);
            CHECK(std::abs(ana - num) < 1e-6 * (std::abs(ana) + scale));
        }
    }
}

TEST_CASE("g0 identity and pulse bounds hold for every family") {
    for (auto [family, T] : {std::pair{ProtocolFamily::Gaussian, 16.0},
                             {ProtocolFamily::Sin4, 126.0},
                             {ProtocolFamily::InvSqrt, 2.53},
                             {ProtocolFamily::Vitanov, 3.95}}) {
    const auto p = paper_params(family, T);
    for (int i = 0; i <= 100; ++i) {
        const double t = p.t_start + (p.t_end - p.t_start) * i / 100.0;
        const auto s = angle_sample(p, t, 0.05);
        CHECK(s.g0 * s.g0 ==
              doctest::Approx(s.J * s.J + s.G2 * s.G2).epsilon(1e-12));
        CHECK(s.J >= 0.0);
        CHECK(s.G2 >= 0.0);
        CHECK(s.J <= p.g * (1.0 + 1e-12));
        CHECK(s.G2 <= p.g * (1.0 + 1e-12));
        if (s.G2 > 0.0) {
            CHECK(std::tan(s.theta) * s.G2 == doctest::Approx(s.J).epsilon(1e-9));
        }
        CHECK(s.theta >= 0.0);
        CHECK(s.theta <= 1.5707963267948966 + 1e-15);
    }
    }
}

TEST_CASE("phi angles: resonant and far-detuned limits") {
    const auto p = paper_params(ProtocolFamily::Gaussian, 16.0);
    const auto at_res = phi_angles(p, p.t_f, 0.0);
    CHECK(at_res.phi == doctest::Approx(kPi / 4).epsilon(1e-12));
    CHECK(at_res.phi_dot == 0.0);

    const auto far = phi_angles(p, p.t_f, 1e8);
    CHECK(far.phi < 1e-6);

    // phi_dot formula vs numerical differentiation at delta = 0.1.
    const double delta = 0.1;
    const double h = 1e-4 * p.T;
    for (double t : {p.t_f - 3.0, p.t_f, p.t_f + 5.0}) {
        const double ana = phi_angles(p, t, delta).phi_dot;
        const double num = (-phi_angles(p, t + 2 * h, delta).phi +
                            8 * phi_angles(p, t + h, delta).phi -
                            8 * phi_angles(p, t - h, delta).phi +
                            phi_angles(p, t - 2 * h, delta).phi) /
                           (12 * h);
        CHECK(ana == doctest::Approx(num).epsilon(1e-6));
    }
}

TEST_CASE("adiabatic ratio: resonant form and STA-width violation") {
    const auto p = paper_params(ProtocolFamily::Gaussian, 1600.0);
    const auto s = angle_sample(p, p.t_f, 0.0);
    CHECK(s.R == doctest::Approx(std::abs(s.theta_dot) / s.g0).epsilon(1e-12));

    // At the STA pulse width the adiabatic condition is violated.
    const auto fast = paper_params(ProtocolFamily::Gaussian, 16.0);
    CHECK(max_adiabatic_ratio(fast, 0.0) > 0.01);

    // Detuned case picks the smaller branch |delta/2 - sqrt(delta^2/4 + g0^2)|.
    const double delta = 0.3;
    const double g0 = s.g0;
    const double root = std::sqrt(0.25 * delta * delta + g0 * g0);
    const double expect = std::abs(s.theta_dot) / std::abs(0.5 * delta - root);
    CHECK(adiabatic_ratio(p, p.t_f, delta) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("default windows") {
    const Window ws = default_window(ProtocolFamily::Sin4, 126.0, 63.0, 0.0);
    CHECK(ws.t_end == doctest::Approx(63.0));
    const Window wv = default_window(ProtocolFamily::Vitanov, 3.95, 0.0, 0.0);
    CHECK(wv.t_end == doctest::Approx(79.0));
    const Window wg = default_window(ProtocolFamily::Gaussian, 16.0, 12.8, 48.0);
    CHECK(wg.t_start == 0.0);
    CHECK(wg.t_end == doctest::Approx(96.0));
}

TEST_CASE("max_theta_dot: closed-form maxima and STA bounds") {
    const auto pg = paper_params(ProtocolFamily::Gaussian, 16.0);
    CHECK(max_theta_dot(pg) == doctest::Approx(2 * pg.xi / (pg.T * pg.T)).epsilon(1e-9));
    const auto pi = paper_params(ProtocolFamily::InvSqrt, 2.53);
    CHECK(max_theta_dot(pi) == doctest::Approx(1.0 / (4 * pi.T)).epsilon(1e-9));
    const auto pv = paper_params(ProtocolFamily::Vitanov, 3.95);
    CHECK(max_theta_dot(pv) == doctest::Approx(kPi / (8 * pv.T)).epsilon(1e-6));

    for (auto [family, T] : {std::pair{ProtocolFamily::Gaussian, 16.0},
                             {ProtocolFamily::Sin4, 126.0},
                             {ProtocolFamily::InvSqrt, 2.53},
                             {ProtocolFamily::Vitanov, 3.95}}) {
        CHECK(max_theta_dot(paper_params(family, T)) <= 0.1 * (1.0 + 1e-9));
    }
}

TEST_CASE("window and parameter validation") {
    auto p = paper_params(ProtocolFamily::Gaussian, 16.0);
    CHECK(p.validate().empty());

    p.t_end = p.t_f; // mid-transfer: end ratio far above 1e-2
    CHECK(!p.validate().empty());

    auto q = paper_params(ProtocolFamily::Sin4, 126.0);
    q.t_end = 80.0; // beyond T - xi
    CHECK(!q.validate().empty());

    auto r = paper_params(ProtocolFamily::Gaussian, -1.0);
    CHECK(!r.validate().empty());

    CHECK_THROWS_AS(pulse_pair(paper_params(ProtocolFamily::Gaussian, 16.0), 1e9), DomainError);
    CHECK_THROWS_AS(family_from_name("nope"), ConfigError);
}
