#include "wavelab/waterwave.hpp"

#include <cmath>

namespace wavelab {

SurfaceState::SurfaceState(double t_, Field eta_, Field psi_, WaveParams p) : t(t_), eta(std::move(eta_)), psi(std::move(psi_)), params(p) {
    check_same_grid(eta, psi);
    if (!eta.finite() || !psi.finite()) throw parameter_error("SurfaceState: non-finite data");
    if (params.delta <= 0.0) params.delta = default_delta(eta, params.h, params.s_ref);
    // Strip condition (H2) holds discretely iff the straightening succeeds.
    build_straightening(eta, params.h, params.delta, params.nz);
}

TraceState trace_fields(const SurfaceState& st, DnoWorkspace& ws) {
    const GridSpec& g = st.eta.grid();
    Field Gpsi = ws.apply(st.eta, st.params.delta, st.psi).real_part();
    VecField geta = gradient(st.eta);
    VecField gpsi = gradient(st.psi);

    std::vector<cplx> num(g.size()), den(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        cplx dot = 0.0, g2 = 0.0;
        for (int ax = 0; ax < g.d; ++ax) {
            dot += geta[std::size_t(ax)].values()[i] * gpsi[std::size_t(ax)].values()[i];
            g2 += geta[std::size_t(ax)].values()[i] * geta[std::size_t(ax)].values()[i];
        }
        num[i] = dot + Gpsi.values()[i];
        den[i] = 1.0 + g2;
    }
    std::vector<cplx> Bv(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) Bv[i] = num[i] / den[i];
    Field B = Field::from_values(g, std::move(Bv)).real_part();

    TraceState tr;
    tr.B = B;
    for (int ax = 0; ax < g.d; ++ax)
        tr.V.push_back((gpsi[std::size_t(ax)] - B * geta[std::size_t(ax)]).real_part());
    return tr;
}

RhsEval zakharov_rhs(const SurfaceState& st, DnoWorkspace& ws, const RhsOptions& opt) {
    const GridSpec& g = st.eta.grid();
    RhsEval r;
    r.Gpsi = ws.apply(st.eta, st.params.delta, st.psi).real_part();

    VecField geta = gradient(st.eta);
    VecField gpsi = gradient(st.psi);
    std::vector<cplx> Bv(g.size()), psidot(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        cplx dot = 0.0, g2 = 0.0, p2 = 0.0;
        for (int ax = 0; ax < g.d; ++ax) {
            cplx ge = geta[std::size_t(ax)].values()[i];
            cplx gp = gpsi[std::size_t(ax)].values()[i];
            dot += ge * gp;
            g2 += ge * ge;
            p2 += gp * gp;
        }
        cplx den = 1.0 + g2;
        cplx B = (dot + r.Gpsi.values()[i]) / den;
        Bv[i] = B;
        psidot[i] = -0.5 * p2 + 0.5 * B * B * den - st.params.g * st.eta.values()[i];
    }
    r.B = Field::from_values(g, std::move(Bv)).real_part();
    for (int ax = 0; ax < g.d; ++ax)
        r.V.push_back((gpsi[std::size_t(ax)] - r.B * geta[std::size_t(ax)]).real_part());
    r.eta_dot = r.Gpsi;
    r.psi_dot = Field::from_values(g, std::move(psidot)).real_part();
    if (opt.dealias) {
        r.eta_dot = dealias(r.eta_dot);
        r.psi_dot = dealias(r.psi_dot);
    }
    return r;
}

namespace {

Field trace_B(const Field& eta, const Field& psi, double delta, DnoWorkspace& ws) {
    const GridSpec& g = eta.grid();
    Field Gpsi = ws.apply(eta, delta, psi);
    VecField geta = gradient(eta);
    VecField gpsi = gradient(psi);
    std::vector<cplx> Bv(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        cplx dot = 0.0, g2 = 0.0;
        for (int ax = 0; ax < g.d; ++ax) {
            dot += geta[std::size_t(ax)].values()[i] * gpsi[std::size_t(ax)].values()[i];
            g2 += geta[std::size_t(ax)].values()[i] * geta[std::size_t(ax)].values()[i];
        }
        Bv[i] = (dot + Gpsi.values()[i]) / (1.0 + g2);
    }
    return Field::from_values(g, std::move(Bv)).real_part();
}

}  // namespace

Field taylor_coefficient(const SurfaceState& st, const TraceState& tr, DnoWorkspace& ws, const TaylorOptions& opt) {
    const GridSpec& g = st.eta.grid();
    RhsEval rhs = zakharov_rhs(st, ws);

    const double scale = (1.0 + st.eta.linf() + st.psi.linf()) /
                         (1.0 + rhs.eta_dot.linf() + rhs.psi_dot.linf());
    const double tau = opt.step_scale * scale;

    auto directional = [&](double t) {
        Field Bp = trace_B(st.eta + t * rhs.eta_dot, st.psi + t * rhs.psi_dot, st.params.delta, ws);
        Field Bm = trace_B(st.eta - t * rhs.eta_dot, st.psi - t * rhs.psi_dot, st.params.delta, ws);
        return (1.0 / (2.0 * t)) * (Bp - Bm);
    };

    Field dtB = directional(tau);
    if (opt.richardson) {
        Field half = directional(0.5 * tau);
        dtB = (4.0 / 3.0) * half - (1.0 / 3.0) * dtB;
    }

    Field a = Field::constant(g, st.params.g) + dtB;
    for (int ax = 0; ax < g.d; ++ax) a = a + tr.V[std::size_t(ax)] * derivative(tr.B, ax);
    a = a.real_part();

    double amin = std::numeric_limits<double>::infinity();
    for (const cplx& v : a.values()) amin = std::min(amin, v.real());
    if (!(amin > 0.0))
        throw taylor_sign_error("taylor_coefficient: Taylor sign condition fails (min a = " +
                                    std::to_string(amin) + ")",
                                st.t, amin);
    return a;
}

double cfl_limit(const GridSpec& g, double grav, double h) {
    const double xm = g.xi_max();
    return 1.0 / std::sqrt(grav * xm * std::tanh(xm * h));
}

namespace {

Field exp_filter_apply(const Field& u) {
    const GridSpec& g = u.grid();
    const double jmax = double(g.n / 2);
    return fourier_multiplier(u, [&](const std::array<double, 2>& xi) {
        double r = std::hypot(xi[0], xi[1]) / (g.dxi() * jmax);
        return cplx(std::exp(-36.0 * std::pow(r, 36)));
    });
}

Snapshot make_snapshot(const SurfaceState& st, DnoWorkspace& ws, bool traces) {
    Snapshot s;
    s.t = st.t;
    s.eta = st.eta;
    s.psi = st.psi;
    RhsEval r = zakharov_rhs(st, ws, {.dealias = false});
    s.Gpsi = r.Gpsi;
    if (traces) {
        s.B = r.B;
        s.V = r.V;
        TraceState tr{r.B, r.V, Field()};
        s.a = taylor_coefficient(st, tr, ws);
        double amin = std::numeric_limits<double>::infinity();
        for (const cplx& v : s.a.values()) amin = std::min(amin, v.real());
        s.a_min = amin;
    }
    s.hamiltonian = 0.5 * phys_inner(st.psi, r.Gpsi).real() +
                    0.5 * st.params.g * phys_inner(st.eta, st.eta).real();
    s.mass = phys_integral(st.eta).real();
    for (int ax = 0; ax < st.eta.grid().d; ++ax)
        s.momentum[std::size_t(ax)] = phys_integral(st.eta * derivative(st.psi, ax)).real();
    return s;
}

}  // namespace

SurfaceState step(const SurfaceState& st, double dt, DnoWorkspace& ws, const IntegrateOptions& opt) {
    if (!(dt > 0.0)) throw parameter_error("step: dt must be positive");
    if (dt > cfl_limit(st.eta.grid(), st.params.g, st.params.h) * (1.0 + 1e-12))
        throw parameter_error("step: dt violates the CFL bound");

    RhsOptions ro{.dealias = opt.dealias};
    auto at = [&](const Field& e, const Field& p) {
        SurfaceState s;
        s.t = st.t;
        s.eta = e;
        s.psi = p;
        s.params = st.params;
        return s;
    };

    RhsEval k1 = zakharov_rhs(st, ws, ro);
    RhsEval k2 = zakharov_rhs(at(st.eta + (0.5 * dt) * k1.eta_dot, st.psi + (0.5 * dt) * k1.psi_dot), ws, ro);
    RhsEval k3 = zakharov_rhs(at(st.eta + (0.5 * dt) * k2.eta_dot, st.psi + (0.5 * dt) * k2.psi_dot), ws, ro);
    RhsEval k4 = zakharov_rhs(at(st.eta + dt * k3.eta_dot, st.psi + dt * k3.psi_dot), ws, ro);

    const double w = dt / 6.0;
    Field eta1 = st.eta + w * (k1.eta_dot + 2.0 * k2.eta_dot + 2.0 * k3.eta_dot + k4.eta_dot);
    Field psi1 = st.psi + w * (k1.psi_dot + 2.0 * k2.psi_dot + 2.0 * k3.psi_dot + k4.psi_dot);
    if (opt.exp_filter) {
        eta1 = exp_filter_apply(eta1);
        psi1 = exp_filter_apply(psi1);
    }
    if (!eta1.finite() || !psi1.finite())
        throw blowup_error("step: non-finite state after RK4 update", st.t);
    if (eta1.linf() > 1e50 || psi1.linf() > 1e50)
        throw blowup_error("step: state overflow after RK4 update", st.t);

    SurfaceState out;
    out.t = st.t + dt;
    out.eta = eta1;
    out.psi = psi1;
    out.params = st.params;

    if (opt.taylor_monitor) {
        // Cheap positivity monitor: single central difference, no Richardson.
        RhsEval r1 = zakharov_rhs(out, ws, {.dealias = false});
        TraceState tr{r1.B, r1.V, Field()};
        taylor_coefficient(out, tr, ws, {.step_scale = 1e-4, .richardson = false});
    }
    return out;
}

Trajectory integrate(const SurfaceState& st0, double T, double dt, DnoWorkspace& ws, const IntegrateOptions& opt) {
    Trajectory traj;
    traj.dt = dt;
    SurfaceState st = st0;
    traj.samples.push_back(make_snapshot(st, ws, opt.trace_samples));
    const int nsteps = int(std::llround(T / dt));
    try {
        for (int k = 1; k <= nsteps; ++k) {
            st = step(st, dt, ws, opt);
            ++traj.steps;
            if (k % opt.sample_stride == 0 || k == nsteps)
                traj.samples.push_back(make_snapshot(st, ws, opt.trace_samples));
        }
    } catch (const blowup_error& e) {
        traj.halted = true;
        traj.halt_reason = std::string("blowup: ") + e.what();
        traj.halt_time = st.t;
    } catch (const taylor_sign_error& e) {
        traj.halted = true;
        traj.halt_reason = std::string("taylor-sign: ") + e.what();
        traj.halt_time = st.t;
    } catch (const diffeo_error& e) {
        traj.halted = true;
        traj.halt_reason = std::string("straightening: ") + e.what();
        traj.halt_time = st.t;
    } catch (const solver_error& e) {
        traj.halted = true;
        traj.halt_reason = std::string("solver: ") + e.what();
        traj.halt_time = st.t;
    }
    return traj;
}

Conserved conserved_quantities(const SurfaceState& st, DnoWorkspace& ws) {
    Conserved c;
    Field Gpsi = ws.apply(st.eta, st.params.delta, st.psi).real_part();
    c.hamiltonian = 0.5 * phys_inner(st.psi, Gpsi).real() + 0.5 * st.params.g * phys_inner(st.eta, st.eta).real();
    c.mass = phys_integral(st.eta).real();
    for (int ax = 0; ax < st.eta.grid().d; ++ax)
        c.momentum[std::size_t(ax)] = phys_integral(st.eta * derivative(st.psi, ax)).real();
    return c;
}

double zs_norm(const Field& eta, const Field& psi, const Field& B, const VecField& V, double s) {
    double acc = 0.0;
    auto sq = [](double x) { return x * x; };
    acc += sq(sobolev_norm(eta, s + 0.5));
    acc += sq(sobolev_norm(psi, s + 0.5));
    acc += sq(sobolev_norm(B, s));
    for (const Field& v : V) acc += sq(sobolev_norm(v, s));
    return std::sqrt(acc);
}

}  // namespace wavelab
