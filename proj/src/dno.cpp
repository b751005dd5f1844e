#include "wavelab/dno.hpp"

#include <cmath>

#include "wavelab/fft_internal.hpp"

namespace wavelab {

Field StripField::level_field(int j) const {
    std::vector<cplx> v(level(j), level(j) + level_size());
    return Field::from_values(grid, std::move(v));
}

void StripField::set_level(int j, const Field& f) {
    const auto& v = f.values();
    std::copy(v.begin(), v.end(), level(j));
}

StripField dz(const StripField& v) {
    const ChebGrid& cz = ChebGrid::get(v.nz);
    StripField out(v.grid, v.nz);
    using Mat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<const Mat> V(v.values.data(), v.nz, Eigen::Index(v.level_size()));
    Eigen::Map<Mat> O(out.values.data(), v.nz, Eigen::Index(v.level_size()));
    O = cz.D.cast<cplx>() * V;
    return out;
}

StripField dx(const StripField& v, int axis) {
    StripField out(v.grid, v.nz);
    for (int j = 0; j < v.nz; ++j) out.set_level(j, derivative(v.level_field(j), axis));
    return out;
}

double default_delta(const Field& eta, double h, double s) {
    return 0.1 * h / (1.0 + sobolev_norm(eta, s + 0.5));
}

namespace {

// Smoothing weight of the straightening multipliers; vanishes at xi = 0 so
// constants are invariant, behaves like |xi| at high frequency.
inline double smooth_weight(double xi_bracket) { return xi_bracket - 1.0; }

struct LevelFields {
    std::vector<double> A, WA, W2A, LA;
    std::vector<std::vector<double>> GA, GWA;
};

LevelFields level_multipliers(const Field& eta, double delta, double z) {
    const GridSpec& g = eta.grid();
    const Lattice& lat = Lattice::get(g);
    const auto& ec = eta.coeffs();
    const std::size_t N = g.size();

    auto make = [&](auto weight) {
        std::vector<cplx> c(N), v(N);
        for (std::size_t i = 0; i < N; ++i) c[i] = weight(i) * ec[i];
        fft::inverse(g, c.data(), v.data());
        std::vector<double> out(N);
        for (std::size_t i = 0; i < N; ++i) out[i] = v[i].real();
        return out;
    };

    LevelFields lf;
    auto e1 = [&](std::size_t i) { return std::exp(delta * z * smooth_weight(lat.xi_bracket[i])); };
    auto w = [&](std::size_t i) { return smooth_weight(lat.xi_bracket[i]); };

    lf.A = make([&](std::size_t i) { return cplx(e1(i)); });
    lf.WA = make([&](std::size_t i) { return cplx(w(i) * e1(i)); });
    lf.W2A = make([&](std::size_t i) { return cplx(w(i) * w(i) * e1(i)); });
    lf.LA = make([&](std::size_t i) { return cplx(-lat.xi_abs[i] * lat.xi_abs[i] * e1(i)); });
    lf.GA.resize(g.d);
    lf.GWA.resize(g.d);
    for (int ax = 0; ax < g.d; ++ax) {
        lf.GA[ax] = make([&](std::size_t i) { return cplx(0.0, lat.xi[i][ax]) * e1(i); });
        lf.GWA[ax] = make([&](std::size_t i) { return cplx(0.0, lat.xi[i][ax]) * w(i) * e1(i); });
    }
    return lf;
}

}  // namespace

StraighteningMap build_straightening(const Field& eta, double h, double delta, int nz) {
    if (!(h > 0.0)) throw parameter_error("build_straightening: h must be positive");
    if (!(delta > 0.0)) throw parameter_error("build_straightening: delta must be positive");
    if (!eta.finite()) throw parameter_error("build_straightening: eta is not finite");
    const GridSpec& g = eta.grid();
    const ChebGrid& cz = ChebGrid::get(nz);
    const std::size_t N = g.size();

    StraighteningMap m;
    m.grid = g;
    m.nz = nz;
    m.h = h;
    m.delta = delta;
    const std::size_t total = N * std::size_t(nz);
    m.rho.resize(total);
    m.dz_rho.resize(total);
    m.dzz_rho.resize(total);
    m.lap_rho.resize(total);
    m.grad_rho.assign(g.d, std::vector<double>(total));
    m.grad_dz_rho.assign(g.d, std::vector<double>(total));

    // Fixed flat bottom at y = -h: rho(x,z) = (1+z) e^{delta z w(D)} eta + z h,
    // so z = 0 maps to the surface and z = -1 to the horizontal floor. The
    // surface-smoothing multiplier keeps the map Lipschitz for rough eta.
    double min_dz = std::numeric_limits<double>::infinity();
    for (int j = 0; j < nz; ++j) {
        const double z = cz.z[j];
        LevelFields lf = level_multipliers(eta, delta, z);
        const std::size_t off = std::size_t(j) * N;
        const double d1 = delta, d2 = delta * delta;
        for (std::size_t i = 0; i < N; ++i) {
            m.rho[off + i] = (1.0 + z) * lf.A[i] + z * h;
            m.dz_rho[off + i] = lf.A[i] + (1.0 + z) * d1 * lf.WA[i] + h;
            m.dzz_rho[off + i] = 2.0 * d1 * lf.WA[i] + (1.0 + z) * d2 * lf.W2A[i];
            m.lap_rho[off + i] = (1.0 + z) * lf.LA[i];
            min_dz = std::min(min_dz, m.dz_rho[off + i]);
        }
        for (int ax = 0; ax < g.d; ++ax) {
            for (std::size_t i = 0; i < N; ++i) {
                m.grad_rho[ax][off + i] = (1.0 + z) * lf.GA[ax][i];
                m.grad_dz_rho[ax][off + i] = lf.GA[ax][i] + (1.0 + z) * d1 * lf.GWA[ax][i];
            }
        }
    }
    m.min_dz_rho = min_dz;
    if (!(min_dz > 0.0))
        throw diffeo_error("build_straightening: dz_rho reaches " + std::to_string(min_dz) +
                               "; shrink the amplitude or increase h",
                           min_dz);
    return m;
}

EllipticCoeffs elliptic_coeffs(const StraighteningMap& m) {
    EllipticCoeffs c;
    c.grid = m.grid;
    c.nz = m.nz;
    c.h = m.h;
    const std::size_t total = m.rho.size();
    c.alpha.resize(total);
    c.gamma.resize(total);
    c.beta.assign(m.grid.d, std::vector<double>(total));
    c.zeta1.resize(total);
    c.zeta2.assign(m.grid.d, std::vector<double>(total));

    for (std::size_t i = 0; i < total; ++i) {
        double g2 = 0.0;
        for (int ax = 0; ax < m.grid.d; ++ax) g2 += m.grad_rho[ax][i] * m.grad_rho[ax][i];
        const double dzr = m.dz_rho[i];
        const double denom = 1.0 + g2;
        c.alpha[i] = dzr * dzr / denom;
        double beta_dot_graddz = 0.0;
        for (int ax = 0; ax < m.grid.d; ++ax) {
            c.beta[ax][i] = -2.0 * dzr * m.grad_rho[ax][i] / denom;
            beta_dot_graddz += c.beta[ax][i] * m.grad_dz_rho[ax][i];
        }
        c.gamma[i] = (m.dzz_rho[i] + c.alpha[i] * m.lap_rho[i] + beta_dot_graddz) / dzr;
        c.zeta1[i] = denom / dzr;
        for (int ax = 0; ax < m.grid.d; ++ax) c.zeta2[ax][i] = m.grad_rho[ax][i];
    }
    return c;
}

// --- solver ---------------------------------------------------------------------

namespace {

double nrm2(const std::vector<cplx>& v) {
    double s = 0.0;
    for (const cplx& x : v) s += std::norm(x);
    return std::sqrt(s);
}

cplx dotc(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

}  // namespace

StripSolver::StripSolver(const GridSpec& g, double h, int nz) : grid_(g), h_(h), nz_(nz) {
    if (!(h > 0.0)) throw parameter_error("StripSolver: h must be positive");
    const ChebGrid& cz = ChebGrid::get(nz);
    Dz_ = cz.D.cast<cplx>();
    Dzz_ = cz.D2.cast<cplx>();

    // One LU per lattice frequency: rows are [Dirichlet; D2 - (h|xi|)^2;
    // (1/h) D bottom row].
    const Lattice& lat = Lattice::get(g);
    mode_lu_.reserve(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        Eigen::MatrixXd M = cz.D2;
        const double k2 = h * h * lat.xi_abs[i] * lat.xi_abs[i];
        for (int r = 0; r < nz; ++r) M(r, r) -= k2;
        M.row(0).setZero();
        M(0, 0) = 1.0;
        M.row(nz - 1) = (1.0 / h) * cz.D.row(nz - 1);
        mode_lu_.emplace_back(M);
    }
}

void StripSolver::apply_operator(const EllipticCoeffs& c, const std::vector<cplx>& v, std::vector<cplx>& out) const {
    const std::size_t N = grid_.size();
    using Mat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<const Mat> V(v.data(), nz_, Eigen::Index(N));
    Mat Vz = Dz_ * V;
    Mat Vzz = Dzz_ * V;

    out.assign(v.size(), 0.0);
    const Lattice& lat = Lattice::get(grid_);
    std::vector<cplx> hat(N), lap(N);
    std::vector<std::vector<cplx>> grad(grid_.d, std::vector<cplx>(N));
    std::vector<std::vector<cplx>> gradvz(grid_.d, std::vector<cplx>(N));

    for (int j = 0; j < nz_; ++j) {
        const std::size_t off = std::size_t(j) * N;
        if (j == 0) {
            for (std::size_t i = 0; i < N; ++i) out[off + i] = v[off + i];
            continue;
        }
        const bool bottom = (j == nz_ - 1);
        // Spectral x-derivatives of this level.
        fft::forward(grid_, v.data() + off, hat.data());
        for (int ax = 0; ax < grid_.d; ++ax) {
            std::vector<cplx> tmp(N);
            for (std::size_t i = 0; i < N; ++i) tmp[i] = cplx(0.0, lat.xi[i][ax]) * hat[i];
            fft::inverse(grid_, tmp.data(), grad[ax].data());
        }
        if (!bottom) {
            std::vector<cplx> tmp(N);
            for (std::size_t i = 0; i < N; ++i) tmp[i] = -lat.xi_abs[i] * lat.xi_abs[i] * hat[i];
            fft::inverse(grid_, tmp.data(), lap.data());
            fft::forward(grid_, Vz.data() + off, hat.data());
            for (int ax = 0; ax < grid_.d; ++ax) {
                for (std::size_t i = 0; i < N; ++i) tmp[i] = cplx(0.0, lat.xi[i][ax]) * hat[i];
                fft::inverse(grid_, tmp.data(), gradvz[ax].data());
            }
            for (std::size_t i = 0; i < N; ++i) {
                cplx r = Vzz(j, Eigen::Index(i)) + c.alpha[off + i] * lap[i] - c.gamma[off + i] * Vz(j, Eigen::Index(i));
                for (int ax = 0; ax < grid_.d; ++ax) r += c.beta[ax][off + i] * gradvz[ax][i];
                out[off + i] = r;
            }
        } else {
            // Conormal flux zeta1 dz v - zeta2 . grad v at the bottom.
            for (std::size_t i = 0; i < N; ++i) {
                cplx r = c.zeta1[off + i] * Vz(j, Eigen::Index(i));
                for (int ax = 0; ax < grid_.d; ++ax) r -= c.zeta2[ax][off + i] * grad[ax][i];
                out[off + i] = r;
            }
        }
    }
}

void StripSolver::apply_preconditioner(const std::vector<cplx>& r, std::vector<cplx>& out) const {
    const std::size_t N = grid_.size();
    out.resize(r.size());
    // To frequency space per level.
    std::vector<cplx> hat(r.size());
    for (int j = 0; j < nz_; ++j)
        fft::forward(grid_, r.data() + std::size_t(j) * N, hat.data() + std::size_t(j) * N);
    // Per-mode dense solves (real LU applied to re/im parts).
    Eigen::VectorXd re(nz_), im(nz_);
    for (std::size_t i = 0; i < N; ++i) {
        for (int j = 0; j < nz_; ++j) {
            re(j) = hat[std::size_t(j) * N + i].real();
            im(j) = hat[std::size_t(j) * N + i].imag();
        }
        Eigen::VectorXd sre = mode_lu_[i].solve(re);
        Eigen::VectorXd sim = mode_lu_[i].solve(im);
        for (int j = 0; j < nz_; ++j) hat[std::size_t(j) * N + i] = cplx(sre(j), sim(j));
    }
    for (int j = 0; j < nz_; ++j)
        fft::inverse(grid_, hat.data() + std::size_t(j) * N, out.data() + std::size_t(j) * N);
}

StripField StripSolver::solve(const EllipticCoeffs& c, const Field& f, const StripField* F0, const StripField* warm,
                              const StripSolveOptions& opt, StripSolveInfo* info) const {
    if (!(f.grid() == grid_)) throw grid_mismatch_error("StripSolver::solve: boundary data grid mismatch");
    if (c.nz != nz_ || !(c.grid == grid_)) throw grid_mismatch_error("StripSolver::solve: coefficient grid mismatch");
    const std::size_t N = grid_.size();
    const std::size_t total = N * std::size_t(nz_);

    std::vector<cplx> b(total, 0.0);
    const auto& fv = f.values();
    for (std::size_t i = 0; i < N; ++i) b[i] = fv[i];
    if (F0) {
        for (int j = 1; j < nz_ - 1; ++j)
            for (std::size_t i = 0; i < N; ++i) b[std::size_t(j) * N + i] = F0->values[std::size_t(j) * N + i];
    }

    std::vector<cplx> x(total, 0.0);
    if (warm && warm->values.size() == total) x = warm->values;

    // Left-preconditioned GMRES with restarts.
    std::vector<cplx> Ax(total), r(total), z(total);
    apply_operator(c, x, Ax);
    for (std::size_t i = 0; i < total; ++i) r[i] = b[i] - Ax[i];
    apply_preconditioner(r, z);

    apply_preconditioner(b, Ax);  // reference scale ||M^{-1} b||
    double rho = nrm2(z);
    // Converge relative to the data or to the initial residual, whichever is
    // larger; a warm start against near-zero data must still terminate.
    const double bscale = std::max({nrm2(Ax), rho, 1e-280});
    int total_iters = 0;

    const int m = opt.restart;
    std::vector<std::vector<cplx>> Vk;
    Eigen::MatrixXcd H(m + 1, m);
    std::vector<cplx> cs(m), sn(m), g_rhs(m + 1);

    while (rho / bscale > opt.rtol && rho > 1e-250 && total_iters < opt.maxiter) {
        Vk.assign(1, z);
        for (auto& comp : Vk[0]) comp /= rho;
        H.setZero();
        std::fill(g_rhs.begin(), g_rhs.end(), cplx(0.0));
        g_rhs[0] = rho;
        int k = 0;
        for (; k < m && total_iters < opt.maxiter; ++k, ++total_iters) {
            apply_operator(c, Vk[std::size_t(k)], Ax);
            apply_preconditioner(Ax, z);
            for (int i = 0; i <= k; ++i) {
                cplx hik = dotc(Vk[std::size_t(i)], z);
                H(i, k) = hik;
                for (std::size_t q = 0; q < total; ++q) z[q] -= hik * Vk[std::size_t(i)][q];
            }
            double hnext = nrm2(z);
            H(k + 1, k) = hnext;
            // Lucky breakdown / Krylov degeneration at the fp floor.
            if (hnext < 1e-300 || !std::isfinite(hnext)) {
                ++k;
                break;
            }
            Vk.push_back(z);
            for (auto& comp : Vk.back()) comp /= hnext;
            // Givens rotations.
            for (int i = 0; i < k; ++i) {
                cplx t = std::conj(cs[std::size_t(i)]) * H(i, k) + std::conj(sn[std::size_t(i)]) * H(i + 1, k);
                H(i + 1, k) = -sn[std::size_t(i)] * H(i, k) + cs[std::size_t(i)] * H(i + 1, k);
                H(i, k) = t;
            }
            double denom = std::sqrt(std::norm(H(k, k)) + std::norm(H(k + 1, k)));
            cs[std::size_t(k)] = H(k, k) / denom;
            sn[std::size_t(k)] = H(k + 1, k) / denom;
            H(k, k) = std::conj(cs[std::size_t(k)]) * H(k, k) + std::conj(sn[std::size_t(k)]) * H(k + 1, k);
            H(k + 1, k) = 0.0;
            g_rhs[std::size_t(k + 1)] = -sn[std::size_t(k)] * g_rhs[std::size_t(k)];
            g_rhs[std::size_t(k)] = std::conj(cs[std::size_t(k)]) * g_rhs[std::size_t(k)];
            rho = std::abs(g_rhs[std::size_t(k + 1)]);
            if (rho / bscale <= opt.rtol || rho <= 1e-250) {
                ++k;
                break;
            }
        }
        // Back substitution and update.
        Eigen::VectorXcd y(k);
        for (int i = k - 1; i >= 0; --i) {
            cplx s = g_rhs[std::size_t(i)];
            for (int j = i + 1; j < k; ++j) s -= H(i, j) * y(j);
            y(i) = s / H(i, i);
        }
        for (int i = 0; i < k; ++i)
            for (std::size_t q = 0; q < total; ++q) x[q] += y(i) * Vk[std::size_t(i)][q];
        apply_operator(c, x, Ax);
        for (std::size_t i = 0; i < total; ++i) r[i] = b[i] - Ax[i];
        apply_preconditioner(r, z);
        rho = nrm2(z);
    }

    if (rho / bscale > opt.rtol && rho > 1e-250)
        throw solver_error("StripSolver: GMRES stalled at relative residual " + std::to_string(rho / bscale),
                           total_iters, rho / bscale);

    if (info) {
        info->iterations = total_iters;
        info->residual = rho / bscale;
        // Raw PDE residual on interior rows, relative to the operator scale.
        apply_operator(c, x, Ax);
        double rmax = 0.0, scale = 0.0;
        for (int j = 1; j < nz_ - 1; ++j) {
            for (std::size_t i = 0; i < N; ++i) {
                rmax = std::max(rmax, std::abs(Ax[std::size_t(j) * N + i] - b[std::size_t(j) * N + i]));
                scale = std::max(scale, std::abs(Ax[std::size_t(j) * N + i]));
            }
        }
        info->pde_residual = rmax / std::max({scale, f.linf(), 1e-300});
    }

    StripField out(grid_, nz_);
    out.values = std::move(x);
    return out;
}

// --- Dirichlet-Neumann ------------------------------------------------------------

namespace {

Field trace_flux(const EllipticCoeffs& c, const StripField& v) {
    const GridSpec& g = v.grid;
    const std::size_t N = g.size();
    StripField vz = dz(v);
    Field v0 = v.level_field(0);
    std::vector<cplx> out(N);
    for (std::size_t i = 0; i < N; ++i) out[i] = c.zeta1[i] * vz.values[i];
    for (int ax = 0; ax < g.d; ++ax) {
        Field gax = derivative(v0, ax);
        const auto& gv = gax.values();
        for (std::size_t i = 0; i < N; ++i) out[i] -= c.zeta2[ax][i] * gv[i];
    }
    return Field::from_values(g, std::move(out));
}

}  // namespace

DnoWorkspace::DnoWorkspace(const GridSpec& g, double h, int nz) : solver_(g, h, nz) {}

Field DnoWorkspace::apply(const Field& eta, double delta, const Field& f, StripSolveInfo* info) {
    return apply_full(eta, delta, f, nullptr, nullptr, info);
}

Field DnoWorkspace::apply_full(const Field& eta, double delta, const Field& f, StripField* v_out,
                               EllipticCoeffs* coeffs_out, StripSolveInfo* info) {
    StraighteningMap map = build_straightening(eta, solver_.h(), delta, solver_.nz());
    EllipticCoeffs c = elliptic_coeffs(map);
    StripField v = solver_.solve(c, f, nullptr, last_v_ ? &*last_v_ : nullptr, {}, info);
    Field G = trace_flux(c, v);
    last_v_ = v;
    if (v_out) *v_out = std::move(v);
    if (coeffs_out) *coeffs_out = std::move(c);
    return G;
}

Field dirichlet_neumann(const Field& eta, const Field& f, double h, double delta, int nz) {
    DnoWorkspace ws(eta.grid(), h, nz);
    return ws.apply(eta, delta, f);
}

SymbolFn principal_symbol_lambda(const Field& eta, double rho0) {
    const GridSpec& g = eta.grid();
    if (g.d == 1) {
        // (1 + eta'^2) xi^2 - (eta' xi)^2 = xi^2: lambda = |xi| exactly.
        auto s = SymbolFn::multiplier_only(
            g, [](const std::array<double, 2>& xi) { return cplx(std::abs(xi[0])); }, 1.0);
        s.regularity = 0.5 + rho0;
        return s;
    }
    VecField grad = gradient(eta);
    Field gx = grad[0].real_part(), gy = grad[1].real_part();
    auto eval = [gx, gy](std::size_t x, const std::array<double, 2>& xi) -> cplx {
        double n2 = xi[0] * xi[0] + xi[1] * xi[1];
        if (n2 < 0.25) return 0.0;
        double e0 = gx.values()[x].real(), e1 = gy.values()[x].real();
        double dot = e0 * xi[0] + e1 * xi[1];
        double rad = (1.0 + e0 * e0 + e1 * e1) * n2 - dot * dot;
        return cplx(std::sqrt(std::max(rad, 0.0)));
    };
    return SymbolFn::from_eval(g, eval, 1.0, 0.5 + rho0);
}

Field flat_dno(const Field& f, double h) {
    return fourier_multiplier(f, [h](const std::array<double, 2>& xi) {
        double r = std::hypot(xi[0], xi[1]);
        return cplx(r * std::tanh(h * r));
    });
}

Field dn_remainder(const Field& eta, const Field& f, double h, double delta, int nz) {
    Field G = dirichlet_neumann(eta, f, h, delta, nz);
    return G - paradiff_apply(principal_symbol_lambda(eta), f);
}

SymbolFn lifting_symbol_A(const EllipticCoeffs& c, int level, double rho0) {
    if (level < 0 || level >= c.nz) throw index_error("lifting_symbol_A: level out of range");
    const GridSpec& g = c.grid;
    const std::size_t N = g.size();
    const std::size_t off = std::size_t(level) * N;
    std::vector<double> alpha(c.alpha.begin() + off, c.alpha.begin() + off + N);
    std::vector<std::vector<double>> beta(g.d);
    for (int ax = 0; ax < g.d; ++ax)
        beta[ax].assign(c.beta[ax].begin() + off, c.beta[ax].begin() + off + N);

    // Ellipticity of the radicand over the lattice with |xi| >= 1/2.
    const Lattice& lat = Lattice::get(g);
    double min_rad = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < N; i += std::max<std::size_t>(1, N / 512)) {
        for (std::size_t x = 0; x < N; x += std::max<std::size_t>(1, N / 512)) {
            if (lat.xi_abs[i] < 0.5) continue;
            double bdot = 0.0;
            for (int ax = 0; ax < g.d; ++ax) bdot += beta[ax][x] * lat.xi[i][ax];
            double rad = 4.0 * alpha[x] * lat.xi_bracket[i] * lat.xi_bracket[i] - bdot * bdot;
            min_rad = std::min(min_rad, rad);
        }
    }
    if (!(min_rad > 0.0))
        throw ellipticity_error("lifting_symbol_A: radicand reaches " + std::to_string(min_rad));

    auto eval = [alpha, beta, d = g.d](std::size_t x, const std::array<double, 2>& xi) -> cplx {
        double n2 = xi[0] * xi[0] + xi[1] * xi[1];
        if (n2 < 0.25) return 0.0;
        double bdot = 0.0;
        for (int ax = 0; ax < d; ++ax) bdot += beta[std::size_t(ax)][x] * xi[std::size_t(ax)];
        double br2 = 1.0 + n2;
        double rad = 4.0 * alpha[x] * br2 - bdot * bdot;
        return 0.5 * cplx(std::sqrt(std::max(rad, 0.0)), -bdot);
    };
    return SymbolFn::from_eval(g, eval, 1.0, 0.5 + rho0);
}

StripField good_unknown_w(const StripField& v, const EllipticCoeffs& c, double rho0) {
    StripField w = dz(v);
    for (int j = 0; j < v.nz; ++j) {
        SymbolFn A = lifting_symbol_A(c, j, rho0);
        Field t = paradiff_apply(A, v.level_field(j));
        const auto& tv = t.values();
        cplx* lv = w.level(j);
        for (std::size_t i = 0; i < v.level_size(); ++i) lv[i] -= tv[i];
    }
    return w;
}

}  // namespace wavelab
