#include "stacool/fock.hpp"

#include <algorithm>
#include <cmath>

namespace stacool {

namespace {

struct Triplet {
    int r, c;
    double v;
};

// Sparse operator on the product basis index (i1 * d2 + i2) * db + ib.
struct SparseOp {
    int dim = 0;
    std::vector<Triplet> nz;

    SparseOp dagger() const {
        SparseOp d;
        d.dim = dim;
        d.nz.reserve(nz.size());
        for (const auto& t : nz) d.nz.push_back({t.c, t.r, t.v});
        return d;
    }
};

enum class Mode { A1, A2, B };

int index_of(const FockDims& d, int i1, int i2, int ib) { return (i1 * d.d2 + i2) * d.db + ib; }

// Annihilation operator of one mode on the product space.
SparseOp annihilator(const FockDims& d, Mode m) {
    SparseOp op;
    op.dim = d.total();
    for (int i1 = 0; i1 < d.d1; ++i1) {
        for (int i2 = 0; i2 < d.d2; ++i2) {
            for (int ib = 0; ib < d.db; ++ib) {
                int j1 = i1, j2 = i2, jb = ib;
                double amp = 0.0;
                switch (m) {
                case Mode::A1:
                    if (i1 == 0) continue;
                    j1 = i1 - 1;
                    amp = std::sqrt(static_cast<double>(i1));
                    break;
                case Mode::A2:
                    if (i2 == 0) continue;
                    j2 = i2 - 1;
                    amp = std::sqrt(static_cast<double>(i2));
                    break;
                case Mode::B:
                    if (ib == 0) continue;
                    jb = ib - 1;
                    amp = std::sqrt(static_cast<double>(ib));
                    break;
                }
                op.nz.push_back({index_of(d, j1, j2, jb), index_of(d, i1, i2, ib), amp});
            }
        }
    }
    return op;
}

// Product c_m^dagger c_n (or c_m^dagger c_n^dagger when dag_n) as one sparse op.
SparseOp two_mode_op(const FockDims& d, Mode m, Mode n, bool dag_n) {
    const SparseOp am = annihilator(d, m);
    const SparseOp an = annihilator(d, n);
    const SparseOp left = am.dagger();
    const SparseOp right = dag_n ? an.dagger() : an;
    // left * right, exploiting that both have at most one entry per column.
    std::vector<int> col_to_entry(static_cast<std::size_t>(d.total()), -1);
    for (std::size_t k = 0; k < left.nz.size(); ++k) col_to_entry[left.nz[k].c] = static_cast<int>(k);
    SparseOp prod;
    prod.dim = d.total();
    for (const auto& t : right.nz) {
        const int e = col_to_entry[t.r];
        if (e < 0) continue;
        prod.nz.push_back({left.nz[static_cast<std::size_t>(e)].r, t.c,
                           left.nz[static_cast<std::size_t>(e)].v * t.v});
    }
    return prod;
}

// out += scale * (A * rho)
void accum_left(const SparseOp& A, const std::vector<cxd>& rho, std::vector<cxd>& out, cxd scale,
                int dim) {
    for (const auto& t : A.nz) {
        const cxd s = scale * t.v;
        const cxd* src = rho.data() + static_cast<std::size_t>(t.c) * dim;
        cxd* dst = out.data() + static_cast<std::size_t>(t.r) * dim;
        for (int j = 0; j < dim; ++j) dst[j] += s * src[j];
    }
}

// out += scale * (rho * A)
void accum_right(const SparseOp& A, const std::vector<cxd>& rho, std::vector<cxd>& out, cxd scale,
                 int dim) {
    for (const auto& t : A.nz) {
        const cxd s = scale * t.v;
        const cxd* src = rho.data() + t.r;
        cxd* dst = out.data() + t.c;
        for (int i = 0; i < dim; ++i)
            dst[static_cast<std::size_t>(i) * dim] += s * src[static_cast<std::size_t>(i) * dim];
    }
}

// tmp = L * rho; out += scale * tmp * L^dagger
void accum_sandwich(const SparseOp& L, const SparseOp& Ldag, const std::vector<cxd>& rho,
                    std::vector<cxd>& tmp, std::vector<cxd>& out, double scale, int dim) {
    std::fill(tmp.begin(), tmp.end(), cxd(0.0, 0.0));
    accum_left(L, rho, tmp, 1.0, dim);
    accum_right(Ldag, tmp, out, scale, dim);
}

struct Generator {
    FockDims dims;
    int dim = 0;
    SystemParams sys;
    CouplingFns fns;

    SparseOp a1, a2, b, a1d, a2d, bd;
    SparseOp hop;         // a1+ a2
    SparseOp hop_d;       // a2+ a1
    SparseOp a1d_b;       // a1+ b
    SparseOp b_d_a1;      // b+ a1
    SparseOp a2d_b;       // a2+ b
    SparseOp b_d_a2;      // b+ a2
    SparseOp a2d_bd;      // a2+ b+
    SparseOp a2_b;        // a2 b
    std::vector<double> num1, num2, numb; // diagonal number operators
    std::vector<double> numb1;            // b b+ diagonal (n + 1)

    mutable std::vector<cxd> tmp;
    mutable std::vector<cxd> rho_buf;
    mutable std::vector<cxd> out_buf;

    explicit Generator(const FockDims& d, const SystemParams& s, const CouplingFns& f)
        : dims(d), dim(d.total()), sys(s), fns(f) {
        a1 = annihilator(d, Mode::A1);
        a2 = annihilator(d, Mode::A2);
        b = annihilator(d, Mode::B);
        a1d = a1.dagger();
        a2d = a2.dagger();
        bd = b.dagger();
        hop = two_mode_op(d, Mode::A1, Mode::A2, false);
        hop_d = hop.dagger();
        a1d_b = two_mode_op(d, Mode::A1, Mode::B, false);
        b_d_a1 = a1d_b.dagger();
        a2d_b = two_mode_op(d, Mode::A2, Mode::B, false);
        b_d_a2 = a2d_b.dagger();
        a2d_bd = two_mode_op(d, Mode::A2, Mode::B, true);
        a2_b = a2d_bd.dagger();
        num1.resize(dim);
        num2.resize(dim);
        numb.resize(dim);
        numb1.resize(dim);
        for (int i1 = 0; i1 < d.d1; ++i1)
            for (int i2 = 0; i2 < d.d2; ++i2)
                for (int ib = 0; ib < d.db; ++ib) {
                    const int k = index_of(d, i1, i2, ib);
                    num1[k] = i1;
                    num2[k] = i2;
                    numb[k] = ib;
                    numb1[k] = ib + 1.0;
                }
        tmp.resize(static_cast<std::size_t>(dim) * dim);
        rho_buf.resize(static_cast<std::size_t>(dim) * dim);
        out_buf.resize(static_cast<std::size_t>(dim) * dim);
    }

    // Applies H(t)rho into out with weight wl and rho H(t) with weight wr.
    void apply_hamiltonian(double t, const std::vector<cxd>& rho, std::vector<cxd>& out, cxd wl,
                           cxd wr) const {
        const double J = fns.J(t);
        const double G2 = fns.G2(t);
        const cxd G1 = fns.G1(t);
        const cxd G1c = std::conj(G1);

        auto add_term = [&](const SparseOp& op, cxd coeff) {
            if (coeff == cxd(0.0, 0.0)) return;
            accum_left(op, rho, out, wl * coeff, dim);
            accum_right(op, rho, out, wr * coeff, dim);
        };

        add_term(hop, J);
        add_term(hop_d, J);
        add_term(a1d_b, G1);
        add_term(b_d_a1, G1c);
        add_term(a2d_b, G2);
        add_term(b_d_a2, G2);
        if (sys.include_counter_rotating && G2 != 0.0) {
            const double ph = 2.0 * sys.omega_m * t;
            const cxd Ep(std::cos(ph), std::sin(ph));
            add_term(a2d_bd, G2 * Ep);
            add_term(a2_b, G2 * std::conj(Ep));
        }
        // delta * n2 term, diagonal.
        if (sys.delta != 0.0) {
            for (int r = 0; r < dim; ++r) {
                const cxd* src = rho.data() + static_cast<std::size_t>(r) * dim;
                cxd* dst = out.data() + static_cast<std::size_t>(r) * dim;
                for (int c = 0; c < dim; ++c) {
                    dst[c] += sys.delta * (wl * num2[r] + wr * num2[c]) * src[c];
                }
            }
        }
    }

    void operator()(double t, std::span<const cxd> y, std::span<cxd> dy) const {
        std::copy(y.begin(), y.end(), rho_buf.begin());
        const std::vector<cxd>& rho = rho_buf;
        std::vector<cxd>& out = out_buf;
        std::fill(out.begin(), out.end(), cxd(0.0, 0.0));

        // i [rho, H] = i (rho H - H rho)
        apply_hamiltonian(t, rho, out, cxd(0.0, -1.0), cxd(0.0, 1.0));

        // Dissipators: L rho L+ - (1/2){L+L, rho}, with diagonal L+L.
        auto add_dissipator = [&](const SparseOp& L, const SparseOp& Ldag,
                                  const std::vector<double>& ldl_diag, double rate) {
            if (rate <= 0.0) return;
            accum_sandwich(L, Ldag, rho, tmp, out, rate, dim);
            for (int r = 0; r < dim; ++r) {
                const cxd* src = rho.data() + static_cast<std::size_t>(r) * dim;
                cxd* dst = out.data() + static_cast<std::size_t>(r) * dim;
                for (int c = 0; c < dim; ++c) {
                    dst[c] -= 0.5 * rate * (ldl_diag[r] + ldl_diag[c]) * src[c];
                }
            }
        };

        add_dissipator(a1, a1d, num1, sys.kappa1);
        add_dissipator(a2, a2d, num2, sys.kappa2);
        add_dissipator(b, bd, numb, sys.gamma_m * (sys.n_bar + 1.0));
        // Heating channel: L = b+, L+L = b b+ = diag(n + 1).
        add_dissipator(bd, b, numb1, sys.gamma_m * sys.n_bar);
        std::copy(out.begin(), out.end(), dy.begin());
    }
};

} // namespace

FockState FockState::vacuum(FockDims dims) { return fock(dims, 0, 0, 0); }

FockState FockState::fock(FockDims dims, int n1, int n2, int nb) {
    if (n1 < 0 || n1 >= dims.d1 || n2 < 0 || n2 >= dims.d2 || nb < 0 || nb >= dims.db) {
        throw DomainError("FockState::fock: occupation outside truncated basis");
    }
    FockState s;
    s.dims = dims;
    const int dim = dims.total();
    s.rho.assign(static_cast<std::size_t>(dim) * dim, cxd(0.0, 0.0));
    const int k = (n1 * dims.d2 + n2) * dims.db + nb;
    s.rho[static_cast<std::size_t>(k) * dim + k] = 1.0;
    return s;
}

FockState FockState::thermal_b(FockDims dims, double nbar) {
    if (nbar < 0.0) throw DomainError("FockState::thermal_b: nbar must be non-negative");
    FockState s;
    s.dims = dims;
    const int dim = dims.total();
    s.rho.assign(static_cast<std::size_t>(dim) * dim, cxd(0.0, 0.0));
    double norm = 0.0;
    std::vector<double> w(static_cast<std::size_t>(dims.db));
    for (int n = 0; n < dims.db; ++n) {
        w[static_cast<std::size_t>(n)] =
            std::pow(nbar / (nbar + 1.0), n) / (nbar + 1.0);
        norm += w[static_cast<std::size_t>(n)];
    }
    for (int n = 0; n < dims.db; ++n) {
        const int k = n; // (0,0,n)
        s.rho[static_cast<std::size_t>(k) * dim + k] = w[static_cast<std::size_t>(n)] / norm;
    }
    return s;
}

RunResult fock_evolve(const SystemParams& sys, const CouplingFns& fns, const FockState& initial,
                      double t_start, double t_end, const FockRunOptions& opts) {
    const FockDims dims = initial.dims;
    const int dim = dims.total();
    if (static_cast<std::size_t>(dim) * dim != initial.rho.size()) {
        throw DomainError("fock_evolve: density matrix size does not match dims");
    }
    Generator gen(dims, sys, fns);

    const std::size_t n_grid = std::max<std::size_t>(2, opts.grid_points);
    RunResult res;
    res.t_start = t_start;
    res.t_end = t_end;
    res.t.resize(n_grid);
    res.P1.assign(n_grid, 0.0);
    res.P2.assign(n_grid, 0.0);
    res.Pb.assign(n_grid, 0.0);
    for (std::size_t i = 0; i < n_grid; ++i) {
        res.t[i] = t_start + (t_end - t_start) * static_cast<double>(i) /
                                 static_cast<double>(n_grid - 1);
    }

    auto populations = [&](std::span<const cxd> rho, double& P1, double& P2, double& Pb,
                           double& leak) {
        P1 = P2 = Pb = 0.0;
        leak = 0.0;
        for (int i1 = 0; i1 < dims.d1; ++i1)
            for (int i2 = 0; i2 < dims.d2; ++i2)
                for (int ib = 0; ib < dims.db; ++ib) {
                    const int k = index_of(dims, i1, i2, ib);
                    const double pk = rho[static_cast<std::size_t>(k) * dim + k].real();
                    P1 += i1 * pk;
                    P2 += i2 * pk;
                    Pb += ib * pk;
                    if (i1 == dims.d1 - 1 || i2 == dims.d2 - 1 || ib == dims.db - 1) {
                        leak += pk;
                    }
                }
    };

    std::vector<cxd> y = initial.rho;
    double leak = 0.0;
    populations(y, res.P1[0], res.P2[0], res.Pb[0], leak);
    res.pb_min = res.Pb[0];
    if (res.Pb[0] < 1.0) res.t_ground = t_start;

    std::size_t next_sample = 1;
    std::vector<cxd> buf(y.size());
    double max_leak = leak;

    auto on_step = [&](const StepView& s) {
        while (next_sample < n_grid && res.t[next_sample] <= s.t1) {
            s.eval_all(res.t[next_sample], std::span<cxd>(buf));
            double lk = 0.0;
            populations(buf, res.P1[next_sample], res.P2[next_sample], res.Pb[next_sample], lk);
            max_leak = std::max(max_leak, lk);
            res.pb_min = std::min(res.pb_min, res.Pb[next_sample]);
            if (!res.t_ground && res.Pb[next_sample] < 1.0) res.t_ground = res.t[next_sample];
            ++next_sample;
        }
    };

    res.stats = integrate_adaptive(gen, y, t_start, t_end, opts.ode, on_step);

    double lk = 0.0;
    populations(y, res.P1[n_grid - 1], res.P2[n_grid - 1], res.Pb[n_grid - 1], lk);
    max_leak = std::max(max_leak, lk);
    res.pb_final = res.Pb[n_grid - 1];
    res.pb_min = std::min(res.pb_min, res.pb_final);
    if (max_leak > opts.leakage_tol) {
        throw TruncationError("fock_evolve: truncation leakage " + std::to_string(max_leak) +
                              " exceeds tolerance");
    }
    return res;
}

RunResult fock_oracle(const SystemParams& sys, const CouplingSchedule& sched, FockDims dims,
                      const FockState& initial, const FockRunOptions& opts) {
    if (initial.dims.d1 != dims.d1 || initial.dims.d2 != dims.d2 || initial.dims.db != dims.db) {
        throw DomainError("fock_oracle: initial state dims mismatch");
    }
    return fock_evolve(sys, CouplingFns::from_schedule(sched), initial, sched.protocol.t_start,
                       sched.protocol.t_end, opts);
}

} // namespace stacool
