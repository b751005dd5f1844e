#include "wavelab/reduction.hpp"

#include <cmath>

namespace wavelab {

namespace {

Field sqrt_field(const Field& a, double floor_value) {
    std::vector<cplx> v(a.size());
    const auto& av = a.values();
    double amin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.size(); ++i) {
        amin = std::min(amin, av[i].real());
        v[i] = std::sqrt(std::max(av[i].real(), 0.0));
    }
    if (!(amin > floor_value))
        throw taylor_sign_error("symmetrizer: Taylor coefficient loses positivity (min a = " + std::to_string(amin) +
                                    ")",
                                0.0, amin);
    return Field::from_values(a.grid(), std::move(v));
}

}  // namespace

SymmetrizerPair build_symmetrizer(const Field& a, const Field& eta, double rho0) {
    const GridSpec& g = a.grid();
    Field ra = sqrt_field(a, 0.0);
    if (g.d == 1) {
        SymbolFn gamma = SymbolFn::separable_sum(
            {{ra, [](const std::array<double, 2>& xi) {
                  double r = std::abs(xi[0]);
                  return r < 0.5 ? cplx(0.0) : cplx(std::sqrt(r));
              }}},
            0.5, 0.5 + rho0);
        SymbolFn q = SymbolFn::separable_sum(
            {{ra, [](const std::array<double, 2>& xi) {
                  double r = std::abs(xi[0]);
                  return r < 0.5 ? cplx(0.0) : cplx(1.0 / std::sqrt(r));
              }}},
            -0.5, 0.5 + rho0);
        return {std::move(gamma), std::move(q)};
    }
    SymbolFn lam = principal_symbol_lambda(eta, rho0);
    auto ge = [lam, ra](std::size_t x, const std::array<double, 2>& xi) -> cplx {
        cplx l = lam.eval(x, xi);
        if (l.real() <= 0.0) return 0.0;
        return ra.values()[x] * std::sqrt(l.real());
    };
    auto qe = [lam, ra](std::size_t x, const std::array<double, 2>& xi) -> cplx {
        cplx l = lam.eval(x, xi);
        if (l.real() <= 0.0) return 0.0;
        return ra.values()[x] / std::sqrt(l.real());
    };
    return {SymbolFn::from_eval(g, ge, 0.5, 0.5 + rho0), SymbolFn::from_eval(g, qe, -0.5, 0.5 + rho0)};
}

SymbolFn inverse_q_symbol(const Field& a, const Field& eta, double rho0) {
    const GridSpec& g = a.grid();
    Field ra = sqrt_field(a, 0.0);
    if (g.d == 1) {
        std::vector<cplx> inv(ra.size());
        for (std::size_t i = 0; i < inv.size(); ++i) inv[i] = 1.0 / ra.values()[i];
        Field ira = Field::from_values(g, std::move(inv));
        return SymbolFn::separable_sum(
            {{ira, [](const std::array<double, 2>& xi) {
                  double r = std::abs(xi[0]);
                  return r < 0.5 ? cplx(0.0) : cplx(std::sqrt(r));
              }}},
            0.5, 0.5 + rho0);
    }
    SymbolFn lam = principal_symbol_lambda(eta, rho0);
    auto e = [lam, ra](std::size_t x, const std::array<double, 2>& xi) -> cplx {
        cplx l = lam.eval(x, xi);
        if (l.real() <= 0.0) return 0.0;
        return std::sqrt(l.real()) / ra.values()[x];
    };
    return SymbolFn::from_eval(g, e, 0.5, 0.5 + rho0);
}

SymbolFn elliptic_e_symbol(const Field& eta, double rho0) {
    const GridSpec& g = eta.grid();
    VecField zeta = gradient(eta);
    std::vector<SymbolTerm> terms;
    if (g.d == 1) {
        terms.push_back({Field::constant(g, -1.0), [](const std::array<double, 2>& xi) {
                             return cplx(std::abs(xi[0]));
                         }});
        terms.push_back({zeta[0].real_part(), [](const std::array<double, 2>& xi) {
                             return cplx(0.0, xi[0]);
                         }});
        return SymbolFn::separable_sum(std::move(terms), 1.0, 0.5 + rho0);
    }
    SymbolFn lam = principal_symbol_lambda(eta, rho0);
    Field z0 = zeta[0].real_part(), z1 = zeta[1].real_part();
    auto e = [lam, z0, z1](std::size_t x, const std::array<double, 2>& xi) -> cplx {
        cplx l = lam.eval(x, xi);
        double dot = z0.values()[x].real() * xi[0] + z1.values()[x].real() * xi[1];
        return -l + cplx(0.0, dot);
    };
    return SymbolFn::from_eval(g, e, 1.0, 0.5 + rho0);
}

SymbolFn inverse_e_symbol(const Field& eta, double rho0) {
    const GridSpec& g = eta.grid();
    SymbolFn e = elliptic_e_symbol(eta, rho0);
    auto inv = [e](std::size_t x, const std::array<double, 2>& xi) -> cplx {
        cplx v = e.eval(x, xi);
        if (std::abs(v) == 0.0) return 0.0;
        return 1.0 / v;
    };
    return SymbolFn::from_eval(g, inv, -1.0, 0.5 + rho0);
}

ReducedState build_reduced(const Field& eta, const Field& B, const VecField& V, const Field& a, double eps, double s,
                           double rho0) {
    ReducedState r;
    r.eps = eps;
    r.s = s;
    VecField zeta = gradient(eta);
    Field Bs = keps2_bessel(B, eps, s);
    SymmetrizerPair sym = build_symmetrizer(a, eta, rho0);
    for (int ax = 0; ax < eta.grid().d; ++ax) {
        Field zax = zeta[std::size_t(ax)].real_part();
        r.zeta_s.push_back(keps2_bessel(zax, eps, s));
        r.W_s.push_back(keps2_bessel(V[std::size_t(ax)], eps, s) + paraproduct(zax, Bs));
        r.theta_s.push_back(paradiff_apply(sym.q, r.zeta_s.back()));
    }
    return r;
}

double l2_norm_vec(const VecField& v) {
    double acc = 0.0;
    for (const Field& f : v) acc += l2_norm(f) * l2_norm(f);
    return std::sqrt(acc);
}

double reduced_norm(const ReducedState& r) {
    double w = l2_norm_vec(r.W_s), t = l2_norm_vec(r.theta_s);
    return std::sqrt(w * w + t * t);
}

VecField gamma_defect(const Snapshot& prev, const Snapshot& mid, const Snapshot& next, double delta,
                      DnoWorkspace& ws) {
    if (prev.B.empty() || mid.B.empty() || next.B.empty())
        throw sampling_error("gamma_defect: snapshots must carry trace fields");
    const GridSpec& g = mid.eta.grid();
    const double dtp = next.t - mid.t, dtm = mid.t - prev.t;
    if (!(dtp > 0.0) || !(dtm > 0.0)) throw sampling_error("gamma_defect: snapshots are not time-ordered");

    VecField zeta_prev = gradient(prev.eta);
    VecField zeta_mid = gradient(mid.eta);
    VecField zeta_next = gradient(next.eta);

    Field GB = ws.apply(mid.eta, delta, mid.B).real_part();
    VecField out;
    for (int ax = 0; ax < g.d; ++ax) {
        Field dzeta = (1.0 / (dtp + dtm)) * (zeta_next[std::size_t(ax)] - zeta_prev[std::size_t(ax)]);
        Field transport = Field::zero(g);
        for (int bx = 0; bx < g.d; ++bx)
            transport = transport + mid.V[std::size_t(bx)] * derivative(zeta_mid[std::size_t(ax)], bx);
        Field GV = ws.apply(mid.eta, delta, mid.V[std::size_t(ax)]).real_part();
        out.push_back((dzeta + transport - GV - zeta_mid[std::size_t(ax)].real_part() * GB).real_part());
    }
    return out;
}

std::vector<ResidualSample> symmetrized_residuals(const Trajectory& traj, double eps, double s, double rho0,
                                                  int integrator_stride) {
    std::vector<ResidualSample> out;
    if (traj.samples.size() < 3) throw sampling_error("symmetrized_residuals: need at least 3 snapshots");

    auto reduced_at = [&](const Snapshot& sn) {
        if (sn.B.empty() || sn.a.empty())
            throw sampling_error("symmetrized_residuals: snapshots must carry traces and the Taylor field");
        return build_reduced(sn.eta, sn.B, sn.V, sn.a, eps, s, rho0);
    };

    for (std::size_t i = 1; i + 1 < traj.samples.size(); ++i) {
        const Snapshot& sm = traj.samples[i - 1];
        const Snapshot& sc = traj.samples[i];
        const Snapshot& sp = traj.samples[i + 1];
        ReducedState rm = reduced_at(sm), rc = reduced_at(sc), rp = reduced_at(sp);
        SymmetrizerPair sym = build_symmetrizer(sc.a, sc.eta, rho0);
        const double span = sp.t - sm.t;

        double f1sq = 0.0, f2sq = 0.0;
        const GridSpec& g = sc.eta.grid();
        for (int ax = 0; ax < g.d; ++ax) {
            Field dW = (1.0 / span) * (rp.W_s[std::size_t(ax)] - rm.W_s[std::size_t(ax)]);
            Field dTh = (1.0 / span) * (rp.theta_s[std::size_t(ax)] - rm.theta_s[std::size_t(ax)]);
            Field F1 = dW + para_transport(sc.V, rc.W_s[std::size_t(ax)]) +
                       paradiff_apply(sym.gamma, rc.theta_s[std::size_t(ax)]);
            Field F2 = dTh + para_transport(sc.V, rc.theta_s[std::size_t(ax)]) -
                       paradiff_apply(sym.gamma, rc.W_s[std::size_t(ax)]);
            f1sq += l2_norm(F1) * l2_norm(F1);
            f2sq += l2_norm(F2) * l2_norm(F2);
        }

        ResidualSample rs;
        rs.t = sc.t;
        rs.f1_norm = std::sqrt(f1sq);
        rs.f2_norm = std::sqrt(f2sq);
        rs.reduced = reduced_norm(rc);
        Field keta = mollify_high(sc.eta, eps), kpsi = mollify_high(sc.psi, eps), kB = mollify_high(sc.B, eps);
        VecField kV;
        for (const Field& v : sc.V) kV.push_back(mollify_high(v, eps));
        rs.keps_zs = zs_norm(keta, kpsi, kB, kV, s);
        rs.stride_warning = (span > 8.0 * traj.dt * integrator_stride);
        out.push_back(std::move(rs));
    }
    return out;
}

EnergyRateReport l2_energy_rate(const std::vector<ResidualSample>& series, double o1) {
    EnergyRateReport rep;
    if (series.size() < 3) throw sampling_error("l2_energy_rate: need at least 3 residual samples");
    double kmax = 0.0;
    for (const auto& s : series) kmax = std::max(kmax, s.keps_zs);
    rep.alpha = o1 + kmax;

    for (const auto& s : series) {
        rep.times.push_back(s.t);
        rep.norm.push_back(s.reduced);
    }
    // Fit C: d/dt y^2 <= C (alpha + y) y.
    double C = 0.0;
    for (std::size_t i = 1; i + 1 < series.size(); ++i) {
        double span = series[i + 1].t - series[i - 1].t;
        double rate = (series[i + 1].reduced * series[i + 1].reduced -
                       series[i - 1].reduced * series[i - 1].reduced) /
                      span;
        double shape = (rep.alpha + series[i].reduced) * series[i].reduced;
        if (shape > 1e-300) C = std::max(C, rate / shape);
    }
    rep.fitted_C = C;
    // Envelope y(t) <= e^{C t / 2} (y0 + alpha) - alpha.
    const double y0 = series.front().reduced;
    const double t0 = series.front().t;
    for (std::size_t i = 0; i < series.size(); ++i) {
        double e = std::exp(0.5 * C * (series[i].t - t0)) * (y0 + rep.alpha) - rep.alpha;
        rep.envelope.push_back(e);
        if (series[i].reduced > e * (1.0 + 1e-9) + 1e-300) rep.envelope_ok = false;
    }
    return rep;
}

RecoveryReport recover_unknowns(const Field& eta, const Field& psi, const Field& B, const VecField& V, const Field& a,
                                double eps, double s, double o1, double rho0) {
    const GridSpec& g = eta.grid();
    RecoveryReport rep;
    ReducedState red = build_reduced(eta, B, V, a, eps, s, rho0);
    rep.rhs_reduced = reduced_norm(red);

    auto k2 = [&](const Field& u) { return keps2_bessel(u, eps, 0.0); };
    Field keta = k2(eta), kpsi = k2(psi), kB = k2(B);
    VecField kV;
    for (const Field& v : V) kV.push_back(k2(v));
    rep.lhs_zs = zs_norm(keta, kpsi, kB, kV, s);
    rep.control_ratio = rep.rhs_reduced / std::max(rep.lhs_zs, 1e-300);
    rep.recovery_ratio = rep.lhs_zs / std::max(o1 + rep.rhs_reduced, 1e-300);

    // eta path: zeta_s ~ T_{1/q} theta_s modulo an order -(1/2+rho0) remainder.
    SymbolFn iq = inverse_q_symbol(a, eta, rho0);
    double dn = 0.0, dd = 0.0;
    for (int ax = 0; ax < g.d; ++ax) {
        Field rec = paradiff_apply(iq, red.theta_s[std::size_t(ax)]);
        dn += std::pow(sobolev_norm(red.zeta_s[std::size_t(ax)] - rec, -0.5), 2);
        dd += std::pow(sobolev_norm(red.zeta_s[std::size_t(ax)], -0.5), 2);
    }
    rep.eta_defect = std::sqrt(dn) / std::max(std::sqrt(dd), 1e-300);

    // B path: Bs ~ T_{1/e} div W_s modulo half-derivative-smoother terms.
    Field Bs = keps2_bessel(B, eps, s);
    Field divW = Field::zero(g);
    for (int ax = 0; ax < g.d; ++ax) divW = divW + derivative(red.W_s[std::size_t(ax)], ax);
    Field brec = paradiff_apply(inverse_e_symbol(eta, rho0), divW);
    rep.b_defect = l2_norm(Bs - brec) / std::max(l2_norm(Bs), 1e-300);

    // psi path via the gradient identity grad psi = V + B grad eta.
    double pn = 0.0;
    for (int ax = 0; ax < g.d; ++ax) pn += std::pow(sobolev_norm(k2(derivative(psi, ax)), s - 0.5), 2);
    rep.psi_norm = std::sqrt(pn);
    return rep;
}

}  // namespace wavelab
