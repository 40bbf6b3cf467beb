#pragma once

// Adaptive embedded Runge-Kutta integration for complex-valued ODE systems.
// Dormand-Prince 5(4) with FSAL, step-size control, and cubic Hermite dense
// output delivered through a per-step callback.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "stacool/errors.hpp"

namespace stacool {

using cxd = std::complex<double>;

struct IntegratorOptions {
    double rtol = 1e-9;
    double atol = 1e-12;
    double h_init = 0.0;   // 0 -> automatic
    double h_max = 0.0;    // 0 -> whole window
    std::size_t max_steps = 200'000'000;
};

struct IntegrationStats {
    std::size_t n_accepted = 0;
    std::size_t n_rejected = 0;
    std::size_t n_rhs = 0;
};

// One accepted step; spans stay valid only for the duration of the callback.
struct StepView {
    double t0 = 0.0;
    double t1 = 0.0;
    std::span<const cxd> y0;
    std::span<const cxd> y1;
    std::span<const cxd> f0;
    std::span<const cxd> f1;

    double h() const { return t1 - t0; }

    // Cubic Hermite interpolation of component i at time t in [t0, t1].
    cxd eval(std::size_t i, double t) const {
        const double dt = t1 - t0;
        const double s = (t - t0) / dt;
        const double s2 = s * s;
        const double s3 = s2 * s;
        const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        const double h10 = s3 - 2.0 * s2 + s;
        const double h01 = -2.0 * s3 + 3.0 * s2;
        const double h11 = s3 - s2;
        return h00 * y0[i] + (h10 * dt) * f0[i] + h01 * y1[i] + (h11 * dt) * f1[i];
    }

    void eval_all(double t, std::span<cxd> out) const {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = eval(i, t);
    }
};

namespace detail {

inline bool all_finite(std::span<const cxd> v) {
    for (const cxd& x : v) {
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
    }
    return true;
}

} // namespace detail

// Integrates dy/dt = rhs(t, y) from t0 to t1 (t1 > t0), advancing y in place.
// rhs signature: void(double t, std::span<const cxd> y, std::span<cxd> dydt).
// on_step receives every accepted step (pass a no-op lambda when unused).
template <typename RHS, typename OnStep>
IntegrationStats integrate_adaptive(RHS&& rhs, std::vector<cxd>& y, double t0, double t1,
                                    const IntegratorOptions& opt, OnStep&& on_step) {
    // Dormand-Prince 5(4) tableau.
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                     a75 = -2187.0 / 6784, a76 = 11.0 / 84;
    // Error coefficients (5th order minus embedded 4th order).
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    const std::size_t n = y.size();
    const double span_len = t1 - t0;
    if (!(span_len > 0.0)) {
        throw IntegrationError("integrate_adaptive: window must satisfy t_end > t_start");
    }
    const double h_max = (opt.h_max > 0.0) ? opt.h_max : span_len;

    std::vector<cxd> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n);
    IntegrationStats stats;

    double t = t0;
    auto call_rhs = [&](double tt, const std::vector<cxd>& yy, std::vector<cxd>& out) {
        rhs(tt, std::span<const cxd>(yy), std::span<cxd>(out));
        ++stats.n_rhs;
    };

    if (!detail::all_finite(y)) {
        throw IntegrationError("integrate_adaptive: non-finite initial state");
    }
    call_rhs(t, y, k1);
    if (!detail::all_finite(k1)) {
        throw IntegrationError("integrate_adaptive: non-finite derivative at t_start");
    }

    // Initial step size: h such that an Euler step changes y by a small
    // fraction of the tolerance-weighted scale.
    double h = opt.h_init;
    if (h <= 0.0) {
        double dny = 0.0, dnf = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double sc = opt.atol + opt.rtol * std::abs(y[i]);
            const double fy = std::abs(y[i]) / sc;
            const double ff = std::abs(k1[i]) / sc;
            dny += fy * fy;
            dnf += ff * ff;
        }
        if (dnf <= 1e-10 || dny <= 1e-10) {
            h = 1e-6 * span_len;
        } else {
            h = 0.01 * std::sqrt(dny / dnf);
        }
        h = std::min(h, h_max);
    }

    const double safety = 0.9;
    const double fac_min = 0.2;
    const double fac_max = 5.0;
    bool last_rejected = false;

    while (t < t1) {
        if (stats.n_accepted + stats.n_rejected > opt.max_steps) {
            throw IntegrationError("integrate_adaptive: step budget exhausted at t = " +
                                   std::to_string(t));
        }
        if (h < 1e-14 * std::max(1.0, std::abs(t))) {
            throw IntegrationError("integrate_adaptive: step-size underflow (stiffness) at t = " +
                                   std::to_string(t));
        }
        bool last = false;
        if (t + h >= t1) {
            h = t1 - t;
            last = true;
        }

        // Stages (k1 from FSAL).
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a21 * k1[i]);
        call_rhs(t + c2 * h, ytmp, k2);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        call_rhs(t + c3 * h, ytmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        call_rhs(t + c4 * h, ytmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        call_rhs(t + c5 * h, ytmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                  a65 * k5[i]);
        call_rhs(t + h, ytmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] +
                                  a76 * k6[i]);
        call_rhs(t + h, ynew, k7);

        // Weighted RMS error of the embedded pair.
        double err = 0.0;
        bool finite = detail::all_finite(ynew);
        if (finite) {
            for (std::size_t i = 0; i < n; ++i) {
                const cxd ee = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                    e6 * k6[i] + e7 * k7[i]);
                const double sc =
                    opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
                const double w = std::abs(ee) / sc;
                err += w * w;
            }
            err = std::sqrt(err / static_cast<double>(n));
        }

        if (!finite || !std::isfinite(err)) {
            // Retry with a much smaller step; underflow guard above terminates.
            h *= 0.1;
            ++stats.n_rejected;
            last_rejected = true;
            continue;
        }

        double fac = (err > 0.0) ? safety * std::pow(err, -0.2) : fac_max;
        fac = std::clamp(fac, fac_min, fac_max);

        if (err > 1.0) {
            h *= std::min(1.0, fac);
            ++stats.n_rejected;
            last_rejected = true;
            continue;
        }

        // Accepted.
        StepView view;
        view.t0 = t;
        view.t1 = t + h;
        view.y0 = std::span<const cxd>(y);
        view.y1 = std::span<const cxd>(ynew);
        view.f0 = std::span<const cxd>(k1);
        view.f1 = std::span<const cxd>(k7);
        on_step(view);

        t += h;
        y.swap(ynew);
        k1.swap(k7); // FSAL
        ++stats.n_accepted;

        if (last_rejected) fac = std::min(fac, 1.0);
        last_rejected = false;
        h = std::min(h * fac, h_max);
        if (last && t >= t1) break;
    }
    return stats;
}

// Dense solution storage for small systems: accepted nodes plus derivatives,
// evaluable anywhere in [t_start, t_end] by cubic Hermite interpolation.
class DenseSolution {
public:
    void reserve(std::size_t steps, std::size_t dim) {
        dim_ = dim;
        ts_.reserve(steps + 1);
        ys_.reserve((steps + 1) * dim);
        fs_.reserve((steps + 1) * dim);
    }

    void push_initial(double t, std::span<const cxd> y, std::span<const cxd> f) {
        dim_ = y.size();
        ts_.push_back(t);
        ys_.insert(ys_.end(), y.begin(), y.end());
        fs_.insert(fs_.end(), f.begin(), f.end());
    }

    void push_step(const StepView& s) {
        if (ts_.empty()) push_initial(s.t0, s.y0, s.f0);
        ts_.push_back(s.t1);
        ys_.insert(ys_.end(), s.y1.begin(), s.y1.end());
        fs_.insert(fs_.end(), s.f1.begin(), s.f1.end());
    }

    std::size_t dim() const { return dim_; }
    std::size_t nodes() const { return ts_.size(); }
    double t_front() const { return ts_.front(); }
    double t_back() const { return ts_.back(); }

    cxd eval(std::size_t comp, double t) const {
        const std::size_t seg = segment_index(t);
        return segment(seg).eval(comp, t);
    }

    void eval_all(double t, std::span<cxd> out) const {
        const std::size_t seg = segment_index(t);
        segment(seg).eval_all(t, out);
    }

    StepView segment(std::size_t i) const {
        StepView v;
        v.t0 = ts_[i];
        v.t1 = ts_[i + 1];
        v.y0 = std::span<const cxd>(ys_).subspan(i * dim_, dim_);
        v.y1 = std::span<const cxd>(ys_).subspan((i + 1) * dim_, dim_);
        v.f0 = std::span<const cxd>(fs_).subspan(i * dim_, dim_);
        v.f1 = std::span<const cxd>(fs_).subspan((i + 1) * dim_, dim_);
        return v;
    }

private:
    std::size_t segment_index(double t) const {
        auto it = std::upper_bound(ts_.begin(), ts_.end(), t);
        std::size_t i = (it == ts_.begin()) ? 0 : static_cast<std::size_t>(it - ts_.begin() - 1);
        if (i + 1 >= ts_.size()) i = ts_.size() - 2;
        return i;
    }

    std::size_t dim_ = 0;
    std::vector<double> ts_;
    std::vector<cxd> ys_;
    std::vector<cxd> fs_;
};

// Convenience wrapper collecting the full dense solution (small systems only).
template <typename RHS>
DenseSolution solve_dense(RHS&& rhs, std::vector<cxd> y, double t0, double t1,
                          const IntegratorOptions& opt, IntegrationStats* stats_out = nullptr) {
    DenseSolution dense;
    auto stats = integrate_adaptive(rhs, y, t0, t1, opt,
                                    [&dense](const StepView& s) { dense.push_step(s); });
    if (stats_out) *stats_out = stats;
    return dense;
}

// Locates the first down-crossing of observable(y(t)) through `level` inside an
// accepted step, by bisection on the Hermite interpolant. Returns the crossing
// time with absolute tolerance `t_tol`. Caller guarantees a sign change over
// [step.t0, step.t1].
template <typename Observable>
double bisect_crossing(const StepView& step, Observable&& observable, double level,
                       double t_tol) {
    std::vector<cxd> buf(step.y0.size());
    auto value_at = [&](double t) {
        step.eval_all(t, std::span<cxd>(buf));
        return observable(std::span<const cxd>(buf)) - level;
    };
    double lo = step.t0, hi = step.t1;
    double flo = value_at(lo);
    for (int iter = 0; iter < 200 && (hi - lo) > t_tol; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = value_at(mid);
        if ((flo <= 0.0) == (fmid <= 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace stacool
