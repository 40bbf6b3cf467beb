#include "stacool/spectral.hpp"

#include <cmath>

namespace stacool {

Matrix3c coupling_matrix(double J, double G2, double delta) {
    Matrix3c m;
    m(0, 1) = J;
    m(1, 0) = J;
    m(1, 1) = delta;
    m(1, 2) = G2;
    m(2, 1) = G2;
    return m;
}

EigenTriple eigensystem(double J, double G2, double delta) {
    const double g0 = std::hypot(J, G2);
    if (g0 <= 0.0) {
        throw SingularityError("eigensystem: g0 = 0, spectrum fully degenerate");
    }
    const double s = std::sqrt(0.25 * delta * delta + g0 * g0);
    const double theta = std::atan2(J, G2);
    const double phi = 0.5 * std::atan2(2.0 * g0, delta);

    EigenTriple e;
    e.E0 = 0.0;
    e.E_plus = 0.5 * delta + s;
    e.E_minus = 0.5 * delta - s;

    const double st = std::sin(theta), ct = std::cos(theta);
    const double sp = std::sin(phi), cp = std::cos(phi);
    e.lambda0 = {ct, 0.0, -st};
    e.lambda_plus = {st * sp, cp, ct * sp};
    e.lambda_minus = {st * cp, -sp, ct * cp};
    return e;
}

Matrix3c cd_matrix_full(double theta_dot, double phi_dot, double theta) {
    const double st = std::sin(theta), ct = std::cos(theta);
    const cxd i(0.0, 1.0);
    Matrix3c m;
    m(0, 1) = i * (phi_dot * st);
    m(1, 0) = -i * (phi_dot * st);
    m(0, 2) = i * theta_dot;
    m(2, 0) = -i * theta_dot;
    m(1, 2) = -i * (phi_dot * ct);
    m(2, 1) = i * (phi_dot * ct);
    return m;
}

Matrix3c cd_matrix_simplified(double theta_dot) {
    const cxd i(0.0, 1.0);
    Matrix3c m;
    m(0, 2) = i * theta_dot;
    m(2, 0) = -i * theta_dot;
    return m;
}

Matrix3c total_matrix(double J, double G2, double delta, double theta_dot) {
    return coupling_matrix(J, G2, delta) + cd_matrix_simplified(theta_dot);
}

} // namespace stacool
