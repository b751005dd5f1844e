#include <doctest.h>

#include <cmath>

#include "wavelab/fit.hpp"
#include "wavelab/reduction.hpp"

using namespace wavelab;

namespace {
const GridSpec gr(1, 128, 2.0 * pi);
const double S = 2.5;
const double RHO0 = 0.4 * std::min(1.0, S - 1.5);

WaveParams params(double g = 1.0, double h = 1.0) {
    WaveParams p;
    p.g = g;
    p.h = h;
    p.nz = 32;
    return p;
}

Field coskx(double amp, int k) {
    return Field::sample(gr, [&](std::array<double, 2> p) { return cplx(amp * std::cos(k * p[0])); });
}
Field sinkx(double amp, int k) {
    return Field::sample(gr, [&](std::array<double, 2> p) { return cplx(amp * std::sin(k * p[0])); });
}

SurfaceState wave_state(double amp, int k) {
    double disp = k * std::tanh(double(k));
    double omega = std::sqrt(disp);
    return SurfaceState(0.0, coskx(amp, k), sinkx(amp * omega / disp, k), params());
}

TraceState full_traces(const SurfaceState& st, DnoWorkspace& ws) {
    TraceState tr = trace_fields(st, ws);
    tr.a = taylor_coefficient(st, tr, ws);
    return tr;
}
}  // namespace

TEST_CASE("reduced state: rest gives zeros") {
    SurfaceState st(0.0, Field::zero(gr), Field::zero(gr), params());
    DnoWorkspace ws(gr, 1.0, 32);
    TraceState tr = full_traces(st, ws);
    ReducedState r = build_reduced(st.eta, tr.B, tr.V, tr.a, 0.125, S, RHO0);
    CHECK(l2_norm_vec(r.W_s) <= 1e-12);
    CHECK(l2_norm_vec(r.theta_s) <= 1e-12);
    CHECK(l2_norm_vec(r.zeta_s) <= 1e-12);
}

TEST_CASE("reduced state: K_eps beyond the lattice annihilates everything") {
    SurfaceState st = wave_state(0.02, 2);
    DnoWorkspace ws(gr, 1.0, 32);
    TraceState tr = full_traces(st, ws);
    // 1/eps >= xi_max: K_eps vanishes identically on the grid.
    double eps = 0.5 / gr.xi_max();
    ReducedState r = build_reduced(st.eta, tr.B, tr.V, tr.a, eps, S, RHO0);
    CHECK(reduced_norm(r) == 0.0);
    CHECK(l2_norm_vec(r.zeta_s) == 0.0);
}

TEST_CASE("reduced state: two-path W_s with the commutator correction") {
    // W_s = K^2 <D>^s (V + T_zeta B) - [K^2 <D>^s, T_zeta] B exactly, and the
    // commutator term is half-derivative smoother, hence small. A broadband
    // state keeps genuine content above the mollifier band.
    const double p = S + 1.3;
    Field eta = 0.02 * random_real_field(gr, 41, [p](double r) { return std::pow(1.0 + r * r, -0.5 * p); });
    Field psi = 0.02 * random_real_field(gr, 42, [p](double r) { return std::pow(1.0 + r * r, -0.5 * p); });
    SurfaceState st(0.0, eta, psi, params());
    DnoWorkspace ws(gr, 1.0, 32);
    TraceState tr = full_traces(st, ws);
    const double eps = 0.125;
    ReducedState r = build_reduced(st.eta, tr.B, tr.V, tr.a, eps, S, RHO0);

    Field zeta = derivative(st.eta, 0).real_part();
    Field W = tr.V[0] + paraproduct(zeta, tr.B);
    SymbolFn zsym = SymbolFn::x_only(zeta, 0.5 + RHO0);
    Field comm = commutator_mollifier(zsym, tr.B, eps, true, S);
    Field two_path = keps2_bessel(W, eps, S) - comm;
    CHECK(l2_norm(two_path - r.W_s[0]) <= 1e-11 * std::max(sobolev_norm(W, S), 1.0));
    CHECK(l2_norm(comm) <= 0.5 * l2_norm(r.W_s[0]));
}

TEST_CASE("symmetrizer identity gamma q = a on the evaluation domain") {
    SurfaceState st = wave_state(0.05, 1);
    DnoWorkspace ws(gr, 1.0, 32);
    TraceState tr = full_traces(st, ws);
    SymmetrizerPair sym = build_symmetrizer(tr.a, st.eta, RHO0);
    const Lattice& lat = Lattice::get(gr);
    double amax = tr.a.linf(), worst = 0.0;
    for (std::size_t x = 0; x < gr.size(); x += 7) {
        for (std::size_t i = 0; i < gr.size(); i += 11) {
            if (lat.xi_abs[i] < 0.5) continue;
            cplx prod = sym.gamma.eval(x, lat.xi[i]) * sym.q.eval(x, lat.xi[i]);
            worst = std::max(worst, std::abs(prod - tr.a.values()[x]));
        }
    }
    CHECK(worst <= 1e-8 * amax);
    CHECK(sym.gamma.order == doctest::Approx(0.5));
    CHECK(sym.q.order == doctest::Approx(-0.5));
}

TEST_CASE("symmetrizer requires a positive Taylor field") {
    Field bad = coskx(2.0, 1);  // dips negative
    CHECK_THROWS_AS(build_symmetrizer(bad, Field::zero(gr), RHO0), taylor_sign_error);
}

TEST_CASE("gamma defect: rest vanishes") {
    SurfaceState st(0.0, Field::zero(gr), Field::zero(gr), params());
    DnoWorkspace ws(gr, 1.0, 32);
    IntegrateOptions opt;
    opt.sample_stride = 1;
    Trajectory tr = integrate(st, 0.06, 0.02, ws, opt);
    REQUIRE(tr.samples.size() >= 3);
    VecField gd = gamma_defect(tr.samples[0], tr.samples[1], tr.samples[2], st.params.delta, ws);
    CHECK(l2_norm_vec(gd) <= 1e-11);
}

TEST_CASE("gamma defect: quadratic in amplitude") {
    DnoWorkspace ws(gr, 1.0, 32);
    std::vector<double> amps{0.005, 0.01, 0.02, 0.04}, defs;
    for (double amp : amps) {
        SurfaceState st = wave_state(amp, 1);
        IntegrateOptions opt;
        opt.sample_stride = 1;
        Trajectory tr = integrate(st, 3 * 0.004, 0.004, ws, opt);
        REQUIRE_FALSE(tr.halted);
        VecField gd = gamma_defect(tr.samples[0], tr.samples[1], tr.samples[2], st.params.delta, ws);
        defs.push_back(l2_norm_vec(gd));
    }
    LineFit f = fit_loglog(amps, defs);
    CHECK(f.slope == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("gamma defect: decreases toward the deep-water limit") {
    std::vector<double> hs{1.0, 2.0, 4.0, 8.0}, defs;
    for (double h : hs) {
        WaveParams p = params(1.0, h);
        double disp = std::tanh(h);
        Field eta = coskx(0.05, 1);
        Field psi = sinkx(0.05 * std::sqrt(disp) / disp, 1);
        SurfaceState st(0.0, eta, psi, p);
        DnoWorkspace ws(gr, h, 32);
        IntegrateOptions opt;
        opt.sample_stride = 1;
        Trajectory tr = integrate(st, 3 * 0.004, 0.004, ws, opt);
        REQUIRE_FALSE(tr.halted);
        VecField gd = gamma_defect(tr.samples[0], tr.samples[1], tr.samples[2], st.params.delta, ws);
        defs.push_back(l2_norm_vec(gd));
    }
    for (std::size_t i = 1; i < defs.size(); ++i) CHECK(defs[i] < defs[i - 1]);
}

TEST_CASE("gamma defect: requires trace snapshots") {
    SurfaceState st = wave_state(0.02, 1);
    DnoWorkspace ws(gr, 1.0, 32);
    IntegrateOptions opt;
    opt.sample_stride = 1;
    opt.trace_samples = false;
    Trajectory tr = integrate(st, 0.06, 0.02, ws, opt);
    CHECK_THROWS_AS(gamma_defect(tr.samples[0], tr.samples[1], tr.samples[2], st.params.delta, ws),
                    sampling_error);
}

TEST_CASE("symmetrized residuals: rest vanishes") {
    SurfaceState st(0.0, Field::zero(gr), Field::zero(gr), params());
    DnoWorkspace ws(gr, 1.0, 32);
    IntegrateOptions opt;
    opt.sample_stride = 1;
    Trajectory tr = integrate(st, 0.08, 0.02, ws, opt);
    auto series = symmetrized_residuals(tr, 0.125, S, RHO0);
    for (const auto& r : series) {
        CHECK(r.f1_norm <= 1e-12);
        CHECK(r.f2_norm <= 1e-12);
    }
}

TEST_CASE("symmetrized residuals: band-limited data decays in eps") {
    SurfaceState st(0.0, coskx(0.05, 2) + coskx(0.02, 3), sinkx(0.05, 2), params());
    DnoWorkspace ws(gr, 1.0, 32);
    IntegrateOptions opt;
    opt.sample_stride = 2;
    double dt = 0.5 * cfl_limit(gr, 1.0, 1.0);
    Trajectory tr = integrate(st, 60 * dt, dt, ws, opt);
    REQUIRE_FALSE(tr.halted);
    std::vector<double> eps{0.25, 0.125, 0.0625}, sups;
    for (double e : eps) {
        auto series = symmetrized_residuals(tr, e, S, RHO0, opt.sample_stride);
        double sup = 0.0;
        for (const auto& r : series) sup = std::max(sup, r.f1_norm + r.f2_norm);
        sups.push_back(sup);
    }
    LineFit f = fit_loglog(eps, sups);
    CHECK(f.ok);
    CHECK(f.slope > 0.0);
}

TEST_CASE("symmetrized residuals: sample-spacing refinement converges at second order") {
    SurfaceState st = wave_state(0.04, 1);
    DnoWorkspace ws(gr, 1.0, 32);
    IntegrateOptions opt;
    opt.sample_stride = 1;
    double dt = 0.25 * cfl_limit(gr, 1.0, 1.0);
    Trajectory tr = integrate(st, 16 * dt, dt, ws, opt);
    REQUIRE_FALSE(tr.halted);

    // Rebuild coarser snapshot sequences from the stride-1 trajectory; the
    // centered difference error scales with the sample spacing squared.
    auto thin = [&](int stride) {
        Trajectory t2;
        t2.dt = tr.dt;
        for (std::size_t i = 0; i < tr.samples.size(); i += std::size_t(stride)) t2.samples.push_back(tr.samples[i]);
        return t2;
    };
    const double eps = 0.25;
    auto mid_f1 = [&](const Trajectory& t2, double t_center) {
        auto series = symmetrized_residuals(t2, eps, S, RHO0);
        for (const auto& r : series)
            if (std::abs(r.t - t_center) < 1e-12) return r.f1_norm;
        REQUIRE(false);
        return 0.0;
    };
    double t_center = tr.samples[8].t;
    double f4 = mid_f1(thin(4), t_center);
    double f2 = mid_f1(thin(2), t_center);
    double f1 = mid_f1(thin(1), t_center);
    // Richardson: |f(2h) - f(h)| shrinks by ~4 per refinement.
    double r21 = std::abs(f4 - f2), r10 = std::abs(f2 - f1);
    CHECK(r10 <= 0.5 * r21);
    // The residual itself converges to a dt-independent value.
    CHECK(std::abs(f1 - f2) <= 0.35 * std::max(f1, 1e-30));
}

TEST_CASE("l2 energy rate: envelope bounds the trajectory") {
    SurfaceState st(0.0, coskx(0.05, 2), sinkx(0.05, 2), params());
    DnoWorkspace ws(gr, 1.0, 32);
    IntegrateOptions opt;
    opt.sample_stride = 2;
    double dt = 0.5 * cfl_limit(gr, 1.0, 1.0);
    Trajectory tr = integrate(st, 40 * dt, dt, ws, opt);
    REQUIRE_FALSE(tr.halted);
    for (double eps : {0.25, 0.125}) {
        auto series = symmetrized_residuals(tr, eps, S, RHO0, opt.sample_stride);
        EnergyRateReport rep = l2_energy_rate(series, std::pow(eps, RHO0));
        CHECK(rep.envelope_ok);
        CHECK(std::isfinite(rep.fitted_C));
    }
}

TEST_CASE("l2 energy rate: linear waves nearly conserve the reduced norm") {
    // Mode 8 sits above the eps = 1/4 mollifier band, so the reduced
    // variables carry the linear wave itself.
    SurfaceState st = wave_state(1e-4, 8);
    DnoWorkspace ws(gr, 1.0, 32);
    IntegrateOptions opt;
    opt.sample_stride = 2;
    double dt = 0.5 * cfl_limit(gr, 1.0, 1.0);
    Trajectory tr = integrate(st, 40 * dt, dt, ws, opt);
    REQUIRE_FALSE(tr.halted);
    auto series = symmetrized_residuals(tr, 0.25, S, RHO0, opt.sample_stride);
    double ymax = 0.0, ymin = 1e300;
    for (const auto& r : series) {
        ymax = std::max(ymax, r.reduced);
        ymin = std::min(ymin, r.reduced);
    }
    CHECK(ymax > 1e-6);  // genuine linear content, not fp residue
    CHECK((ymax - ymin) <= 0.05 * ymax);
}

TEST_CASE("recovery: rest gives zero norms") {
    SurfaceState st(0.0, Field::zero(gr), Field::zero(gr), params());
    DnoWorkspace ws(gr, 1.0, 32);
    TraceState tr = full_traces(st, ws);
    RecoveryReport rep = recover_unknowns(st.eta, st.psi, tr.B, tr.V, tr.a, 0.125, S, 0.1, RHO0);
    CHECK(rep.lhs_zs <= 1e-12);
    CHECK(rep.rhs_reduced <= 1e-12);
}

TEST_CASE("recovery: composition with 1/q gains half a derivative plus rho0") {
    SurfaceState st = wave_state(0.3, 1);  // visibly x-dependent Taylor field
    DnoWorkspace ws(gr, 1.0, 32);
    TraceState tr = full_traces(st, ws);
    SymmetrizerPair sym = build_symmetrizer(tr.a, st.eta, RHO0);
    SymbolFn iq = inverse_q_symbol(tr.a, st.eta, RHO0);
    const double mu = 1.0;
    std::vector<double> Ns{8, 16, 32}, defect;
    for (double Nd : Ns) {
        int N = int(Nd);
        Field b = Field::sample(gr, [&](std::array<double, 2> p) {
            return cplx(std::exp(4.0 * (std::cos(p[0]) - 1.0)) * std::cos(N * p[0]));
        });
        Field uN = (1.0 / sobolev_norm(b, mu)) * b;
        Field r = paradiff_apply(iq, paradiff_apply(sym.q, uN)) - apply_mask(uN, DyadicLadder::get(gr).psi_mask());
        defect.push_back(sobolev_norm(r, mu + 0.5 + RHO0));
    }
    LineFit f = fit_loglog(Ns, defect);
    CHECK(f.slope <= 0.2);
}

TEST_CASE("recovery: fitted constants stable over states and eps") {
    DnoWorkspace ws(gr, 1.0, 32);
    std::vector<double> r49, r53;
    for (int i = 0; i < 6; ++i) {
        const double p = S + 0.5 + 0.5 + 0.3;
        Field eta = 0.02 * random_real_field(gr, 100 + 10 * std::uint64_t(i),
                                             [p](double r) { return std::pow(1.0 + r * r, -0.5 * p); });
        Field psi = 0.02 * random_real_field(gr, 105 + 10 * std::uint64_t(i),
                                             [p](double r) { return std::pow(1.0 + r * r, -0.5 * p); });
        SurfaceState st(0.0, eta, psi, params());
        TraceState tr = full_traces(st, ws);
        for (double e : {0.125, 0.0625, 0.03125}) {
            RecoveryReport rep =
                recover_unknowns(st.eta, st.psi, tr.B, tr.V, tr.a, e, S, std::pow(e, RHO0), RHO0);
            r49.push_back(rep.control_ratio);
            r53.push_back(rep.recovery_ratio);
            CHECK(rep.eta_defect <= 0.5);
        }
    }
    auto spread = [](const std::vector<double>& v) {
        return *std::max_element(v.begin(), v.end()) / *std::min_element(v.begin(), v.end());
    };
    CHECK(spread(r49) <= 2.0);
    CHECK(spread(r53) <= 2.0);
}
