#pragma once

// Instantaneous three-level structure of the loop-coupled system in the basis
// (|a1>, |a2>, |b>): the coupling matrix, its closed-form eigensystem (dark
// state and bright pair), and the counterdiabatic matrices that transport the
// dark state at arbitrary speed.

#include <array>
#include <complex>
#include <cstddef>

#include "stacool/errors.hpp"
#include "stacool/protocols.hpp"

namespace stacool {

struct Matrix3c {
    std::array<cxd, 9> m{};

    cxd& operator()(std::size_t r, std::size_t c) { return m[3 * r + c]; }
    const cxd& operator()(std::size_t r, std::size_t c) const { return m[3 * r + c]; }

    Matrix3c operator+(const Matrix3c& o) const {
        Matrix3c r;
        for (std::size_t i = 0; i < 9; ++i) r.m[i] = m[i] + o.m[i];
        return r;
    }

    std::array<cxd, 3> apply(const std::array<cxd, 3>& v) const {
        std::array<cxd, 3> r{};
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) r[i] += (*this)(i, j) * v[j];
        return r;
    }

    cxd trace() const { return m[0] + m[4] + m[8]; }

    double hermiticity_defect() const {
        double d = 0.0;
        for (std::size_t r = 0; r < 3; ++r)
            for (std::size_t c = 0; c < 3; ++c)
                d = std::max(d, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
        return d;
    }
};

// Bare coupling matrix M(t) = [[0, J, 0], [J, delta, G2], [0, G2, 0]].
Matrix3c coupling_matrix(double J, double G2, double delta);

struct EigenTriple {
    double E0 = 0.0;      // dark-state eigenvalue, identically zero
    double E_plus = 0.0;  // delta/2 + sqrt(delta^2/4 + g0^2)
    double E_minus = 0.0; // delta/2 - sqrt(delta^2/4 + g0^2)
    std::array<double, 3> lambda0{};
    std::array<double, 3> lambda_plus{};
    std::array<double, 3> lambda_minus{};
};

// Closed-form eigensystem built from the mixing angles. The dark state is
// lambda0 = (cos theta, 0, -sin theta); its |b> component is <= 0.
// Throws SingularityError when g0 = 0 (fully degenerate spectrum).
EigenTriple eigensystem(double J, double G2, double delta);

// Full counterdiabatic generator i * K(theta_dot, phi_dot, theta) with
// K = [[0, phidot sin th, thdot], [-phidot sin th, 0, -phidot cos th],
//      [-thdot, phidot cos th, 0]].
Matrix3c cd_matrix_full(double theta_dot, double phi_dot, double theta);

// Reduced counterdiabatic generator coupling only a1 and b:
// i * [[0, 0, thdot], [0, 0, 0], [-thdot, 0, 0]].
Matrix3c cd_matrix_simplified(double theta_dot);

// Combined generator N(t) = M(t) + i * K_simplified: the matrix actually
// realized by the loop coupling, with N(0,2) = i * theta_dot.
Matrix3c total_matrix(double J, double G2, double delta, double theta_dot);

} // namespace stacool
