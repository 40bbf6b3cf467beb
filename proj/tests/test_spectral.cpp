#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "stacool/integrator.hpp"
#include "stacool/protocols.hpp"
#include "stacool/spectral.hpp"

using namespace stacool;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Independent oracle: cyclic Jacobi eigensolver for a real symmetric 3x3
// matrix. Returns eigenvalues ascending with matching orthonormal columns.
struct JacobiResult {
    std::array<double, 3> eval;
    std::array<std::array<double, 3>, 3> evec; // evec[k] is the k-th eigenvector
};

JacobiResult jacobi3(std::array<std::array<double, 3>, 3> a) {
    std::array<std::array<double, 3>, 3> v{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < 3; ++p)
            for (int q = p + 1; q < 3; ++q) off += a[p][q] * a[p][q];
        if (off < 1e-300) break;
        for (int p = 0; p < 3; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                const double theta = 0.5 * (a[q][q] - a[p][p]) / a[p][q];
                const double t = ((theta >= 0) ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < 3; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < 3; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (int k = 0; k < 3; ++k) {
                    const double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    JacobiResult r;
    std::array<int, 3> order{0, 1, 2};
    std::array<double, 3> d{a[0][0], a[1][1], a[2][2]};
    std::sort(order.begin(), order.end(), [&](int x, int y) { return d[x] < d[y]; });
    for (int k = 0; k < 3; ++k) {
        r.eval[k] = d[order[k]];
        for (int i = 0; i < 3; ++i) r.evec[k][i] = v[i][order[k]];
    }
    return r;
}

double vec_mismatch(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    // Distance up to a global sign.
    double dp = 0.0, dm = 0.0;
    for (int i = 0; i < 3; ++i) {
        dp = std::max(dp, std::abs(a[i] - b[i]));
        dm = std::max(dm, std::abs(a[i] + b[i]));
    }
    return std::min(dp, dm);
}

double eigen_residual(const Matrix3c& m, const std::array<double, 3>& v, double e) {
    std::array<cxd, 3> vc{v[0], v[1], v[2]};
    const auto mv = m.apply(vc);
    double r = 0.0;
    for (int i = 0; i < 3; ++i) r = std::max(r, std::abs(mv[i] - e * vc[i]));
    return r;
}

} // namespace

TEST_CASE("coupling matrix layout and trivial spectra") {
    const Matrix3c z = coupling_matrix(0.0, 0.0, 0.0);
    for (auto& e : z.m) CHECK(std::abs(e) == 0.0);

    const Matrix3c m = coupling_matrix(0.3, 0.4, 0.7);
    CHECK(m(0, 1) == cxd(0.3, 0.0));
    CHECK(m(1, 0) == cxd(0.3, 0.0));
    CHECK(m(1, 2) == cxd(0.4, 0.0));
    CHECK(m(2, 1) == cxd(0.4, 0.0));
    CHECK(m(1, 1) == cxd(0.7, 0.0));
    CHECK(std::abs(m(0, 0)) == 0.0);
    CHECK(std::abs(m(2, 2)) == 0.0);
    CHECK(std::abs(m(0, 2)) == 0.0);
    CHECK(m.hermiticity_defect() < 1e-14);

    // Equal couplings at resonance: eigenvalues {0, +-g sqrt 2}.
    const double g = 0.1;
    const EigenTriple e = eigensystem(g, g, 0.0);
    CHECK(e.E0 == 0.0);
    CHECK(e.E_plus == doctest::Approx(g * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(e.E_minus == doctest::Approx(-g * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("dark state limits at the window ends") {
    // theta = pi/2: lambda0 = -|b> up to the fixed sign convention.
    const EigenTriple start = eigensystem(1.0, 1e-12, 0.0);
    CHECK(std::abs(start.lambda0[0]) < 1e-9);
    CHECK(std::abs(start.lambda0[1]) == 0.0);
    CHECK(start.lambda0[2] == doctest::Approx(-1.0).epsilon(1e-9));

    // theta = 0: lambda0 = |a1>.
    const EigenTriple end = eigensystem(1e-12, 1.0, 0.0);
    CHECK(end.lambda0[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(end.lambda0[2]) < 1e-9);
}

TEST_CASE("closed-form eigensystem matches a generic symmetric eigensolver") {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> uc(1e-3, 1.0);
    std::uniform_real_distribution<double> ud(-1.0, 1.0);
    for (int it = 0; it < 500; ++it) {
        const double J = uc(rng), G2 = uc(rng), delta = ud(rng);
        const EigenTriple e = eigensystem(J, G2, delta);
        const Matrix3c m = coupling_matrix(J, G2, delta);

        std::array<std::array<double, 3>, 3> a{{{0.0, J, 0.0}, {J, delta, G2}, {0.0, G2, 0.0}}};
        const JacobiResult jr = jacobi3(a);

        // Ascending order from the oracle is (E_minus, E0, E_plus).
        CHECK(std::abs(jr.eval[0] - e.E_minus) < 1e-9);
        CHECK(std::abs(jr.eval[1] - e.E0) < 1e-9);
        CHECK(std::abs(jr.eval[2] - e.E_plus) < 1e-9);
        CHECK(vec_mismatch(jr.evec[0], e.lambda_minus) < 1e-9);
        CHECK(vec_mismatch(jr.evec[1], e.lambda0) < 1e-9);
        CHECK(vec_mismatch(jr.evec[2], e.lambda_plus) < 1e-9);

        // Residuals and Vieta identities.
        CHECK(eigen_residual(m, e.lambda0, e.E0) < 1e-10);
        CHECK(eigen_residual(m, e.lambda_plus, e.E_plus) < 1e-10);
        CHECK(eigen_residual(m, e.lambda_minus, e.E_minus) < 1e-10);
        const double g0sq = J * J + G2 * G2;
        CHECK(e.E_plus * e.E_minus == doctest::Approx(-g0sq).epsilon(1e-10));
        CHECK(e.E_plus + e.E_minus == doctest::Approx(delta).epsilon(1e-10));

        // Orthonormality and the dark state's empty |a2> slot.
        auto dot = [](const std::array<double, 3>& x, const std::array<double, 3>& y) {
            return x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
        };
        CHECK(dot(e.lambda0, e.lambda0) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(dot(e.lambda_plus, e.lambda_plus) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(dot(e.lambda_minus, e.lambda_minus) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(std::abs(dot(e.lambda0, e.lambda_plus)) < 1e-10);
        CHECK(std::abs(dot(e.lambda0, e.lambda_minus)) < 1e-10);
        CHECK(std::abs(dot(e.lambda_plus, e.lambda_minus)) < 1e-10);
        CHECK(e.lambda0[1] == 0.0);
        CHECK(e.lambda0[2] <= 0.0);
    }
    CHECK_THROWS_AS(eigensystem(0.0, 0.0, 0.5), SingularityError);
}

TEST_CASE("counterdiabatic matrices: structure and limits") {
    const Matrix3c zero = cd_matrix_full(0.0, 0.0, 0.7);
    for (auto& e : zero.m) CHECK(std::abs(e) == 0.0);

    const double td = -0.1;
    const Matrix3c simp = cd_matrix_simplified(td);
    CHECK(simp(0, 2) == cxd(0.0, td));
    CHECK(simp(2, 0) == cxd(0.0, -td));
    CHECK(simp.hermiticity_defect() < 1e-14);

    // At delta = 0 (phi_dot = 0) the full matrix reduces to the simplified one.
    const Matrix3c full = cd_matrix_full(td, 0.0, 1.234);
    for (int i = 0; i < 9; ++i) CHECK(std::abs(full.m[i] - simp.m[i]) == 0.0);

    const Matrix3c n = total_matrix(0.05, 0.07, 0.3, td);
    CHECK(n(0, 2) == cxd(0.0, td));
    CHECK(n.trace() == cxd(0.3, 0.0));
    CHECK(n.hermiticity_defect() < 1e-14);

    // theta_dot = 0 leaves the bare coupling matrix.
    const Matrix3c bare = total_matrix(0.05, 0.07, 0.3, 0.0);
    const Matrix3c ref = coupling_matrix(0.05, 0.07, 0.3);
    for (int i = 0; i < 9; ++i) CHECK(std::abs(bare.m[i] - ref.m[i]) == 0.0);
}

TEST_CASE("cd_matrix_full equals i * sum_n d/dt |lambda_n><lambda_n|") {
    const auto p = with_defaults(ProtocolFamily::Gaussian, 0.1, 16.0);
    const double delta = 0.2;
    const double h = 1e-6 * p.T;
    for (int k = 1; k < 40; ++k) {
        const double t = p.t_start + (p.t_end - p.t_start) * k / 40.0;
        const auto pp = eval_pulses(p, t);
        const auto ang = angle_sample(p, t, delta);
        const Matrix3c full = cd_matrix_full(ang.theta_dot, ang.phi_dot, ang.theta);

        const EigenTriple em = eigensystem(eval_pulses(p, t - h).J, eval_pulses(p, t - h).G2, delta);
        const EigenTriple ep = eigensystem(eval_pulses(p, t + h).J, eval_pulses(p, t + h).G2, delta);
        const EigenTriple e0 = eigensystem(pp.J, pp.G2, delta);

        Matrix3c k_num; // sum over n of |d/dt lambda_n><lambda_n|
        auto accumulate = [&](const std::array<double, 3>& vp, const std::array<double, 3>& vm,
                              const std::array<double, 3>& v0) {
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c)
                    k_num(r, c) += cxd((vp[r] - vm[r]) / (2 * h) * v0[c], 0.0);
        };
        accumulate(ep.lambda0, em.lambda0, e0.lambda0);
        accumulate(ep.lambda_plus, em.lambda_plus, e0.lambda_plus);
        accumulate(ep.lambda_minus, em.lambda_minus, e0.lambda_minus);

        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) {
                const cxd want = cxd(0.0, 1.0) * k_num(r, c);
                CHECK(std::abs(full(r, c) - want) < 1e-6);
            }
    }
}

TEST_CASE("N(0,2) stays within the peak coupling for the STA gaussian") {
    const auto p = with_defaults(ProtocolFamily::Gaussian, 0.1, 16.0);
    for (int i = 0; i <= 500; ++i) {
        const double t = p.t_start + (p.t_end - p.t_start) * i / 500.0;
        const auto pp = eval_pulses(p, t);
        const Matrix3c n = total_matrix(pp.J, pp.G2, 0.0, eval_theta_dot(p, t));
        CHECK(std::abs(n(0, 2)) <= 0.1 * (1.0 + 1e-9));
    }
}

TEST_CASE("full STA generator transports the dark state at any speed") {
    // Schroedinger integration of i psi' = (M + i K_full) psi from lambda0(0);
    // the overlap with the instantaneous dark state must stay at unity even
    // far outside the adiabatic regime (T down to 4 time units).
    for (double delta : {0.0, 0.15}) {
        for (auto [family, T] : {std::pair{ProtocolFamily::Gaussian, 4.0},
                                 {ProtocolFamily::Sin4, 20.0},
                                 {ProtocolFamily::Vitanov, 2.0}}) {
            const auto p = with_defaults(family, 0.1, T);
            auto rhs = [&](double t, std::span<const cxd> y, std::span<cxd> dy) {
                const auto pp = eval_pulses(p, t);
                const auto ang = angle_sample(p, t, delta);
                const Matrix3c gen =
                    coupling_matrix(pp.J, pp.G2, delta) +
                    cd_matrix_full(ang.theta_dot, ang.phi_dot, ang.theta);
                std::array<cxd, 3> v{y[0], y[1], y[2]};
                const auto mv = gen.apply(v);
                for (int i = 0; i < 3; ++i) dy[i] = cxd(0.0, -1.0) * mv[i];
            };
            const auto e0 = eigensystem(eval_pulses(p, p.t_start).J,
                                        eval_pulses(p, p.t_start).G2, delta);
            std::vector<cxd> psi{e0.lambda0[0], e0.lambda0[1], e0.lambda0[2]};
            IntegratorOptions opt;
            opt.rtol = 1e-11;
            opt.atol = 1e-14;
            double min_overlap = 1.0;
            auto observer = [&](const StepView& s) {
                const auto pp = eval_pulses(p, s.t1);
                const auto e = eigensystem(pp.J, pp.G2, delta);
                cxd ov(0.0, 0.0);
                for (int i = 0; i < 3; ++i) ov += e.lambda0[i] * s.y1[i];
                min_overlap = std::min(min_overlap, std::abs(ov));
            };
            integrate_adaptive(rhs, psi, p.t_start, p.t_end, opt, observer);
            CAPTURE(family_name(family));
            CAPTURE(delta);
            CHECK(min_overlap >= 1.0 - 1e-6);
        }
    }
}

TEST_CASE("eigenvalues at resonance follow +-g0 along a protocol") {
    const auto p = with_defaults(ProtocolFamily::Vitanov, 0.1, 395.0);
    for (int i = 0; i <= 50; ++i) {
        const double t = p.t_start + (p.t_end - p.t_start) * i / 50.0;
        const auto pp = eval_pulses(p, t);
        const auto e = eigensystem(pp.J, pp.G2, 0.0);
        const double g0 = std::hypot(pp.J, pp.G2);
        CHECK(e.E_plus == doctest::Approx(g0).epsilon(1e-12));
        CHECK(e.E_minus == doctest::Approx(-g0).epsilon(1e-12));
    }
}
