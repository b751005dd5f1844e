#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "wavelab/fit.hpp"
#include "wavelab/io.hpp"

using namespace wavelab;

namespace {
const GridSpec gw(1, 128, 2.0 * pi);

WaveParams params(double g = 1.0, double h = 1.0, int nz = 32) {
    WaveParams p;
    p.g = g;
    p.h = h;
    p.nz = nz;
    return p;
}

Field coskx(double amp, int k) {
    return Field::sample(gw, [&](std::array<double, 2> p) { return cplx(amp * std::cos(k * p[0])); });
}
Field sinkx(double amp, int k) {
    return Field::sample(gw, [&](std::array<double, 2> p) { return cplx(amp * std::sin(k * p[0])); });
}

/// eta = amp cos(kx), psi = amp omega/(k tanh(kh)) sin(kx): the linear
/// progressive wave pair.
SurfaceState wave_state(double amp, int k, double g = 1.0, double h = 1.0) {
    double disp = k * std::tanh(k * h);
    double omega = std::sqrt(g * disp);
    return SurfaceState(0.0, coskx(amp, k), sinkx(amp * omega / disp, k), params(g, h));
}
}  // namespace

TEST_CASE("traces: rest state") {
    SurfaceState st(0.0, Field::zero(gw), Field::zero(gw), params());
    DnoWorkspace ws(gw, 1.0, 32);
    TraceState tr = trace_fields(st, ws);
    CHECK(l2_norm(tr.B) <= 1e-13);
    CHECK(l2_norm(tr.V[0]) <= 1e-13);
}

TEST_CASE("traces: flat-surface oracle") {
    const int k = 3;
    SurfaceState st(0.0, Field::zero(gw), coskx(1.0, k), params());
    DnoWorkspace ws(gw, 1.0, 32);
    TraceState tr = trace_fields(st, ws);
    Field Bexp = coskx(k * std::tanh(double(k)), k);
    Field Vexp = sinkx(-double(k), k);
    CHECK(l2_norm(tr.B - Bexp) <= 1e-8 * l2_norm(Bexp));
    CHECK(l2_norm(tr.V[0] - Vexp) <= 1e-10 * l2_norm(Vexp));
}

TEST_CASE("traces: gradient identity") {
    SurfaceState st = wave_state(0.03, 2);
    DnoWorkspace ws(gw, 1.0, 32);
    TraceState tr = trace_fields(st, ws);
    Field lhs = derivative(st.psi, 0);
    Field rhs = tr.V[0] + tr.B * derivative(st.eta, 0);
    CHECK((lhs - rhs).linf() <= 1e-8 * std::max(1.0, lhs.linf()));
}

TEST_CASE("zakharov rhs: rest state is a fixed point") {
    SurfaceState st(0.0, Field::zero(gw), Field::zero(gw), params());
    DnoWorkspace ws(gw, 1.0, 32);
    RhsEval r = zakharov_rhs(st, ws);
    CHECK(l2_norm(r.eta_dot) <= 1e-13);
    CHECK(l2_norm(r.psi_dot) <= 1e-13);
}

TEST_CASE("zakharov rhs: linearization about rest") {
    const int k = 4;
    const double eps = 1e-6;
    SurfaceState st(0.0, Field::zero(gw), coskx(eps, k), params());
    DnoWorkspace ws(gw, 1.0, 32);
    RhsEval r = zakharov_rhs(st, ws);
    Field expect = coskx(eps * k * std::tanh(double(k)), k);
    CHECK(l2_norm(r.eta_dot - expect) <= 1e-7 * l2_norm(expect));
    // psi_dot = -g eta + O(eps^2) = O(eps^2) here.
    CHECK(l2_norm(r.psi_dot) <= 10.0 * eps * eps);
}

TEST_CASE("zakharov rhs: hamiltonian flux vanishes along the flow") {
    SurfaceState st = wave_state(0.02, 1);
    DnoWorkspace ws(gw, 1.0, 32);
    RhsEval r = zakharov_rhs(st, ws, {.dealias = false});
    const double tau = 1e-3;
    auto ham = [&](double sgn) {
        SurfaceState p(st.t, st.eta + (sgn * tau) * r.eta_dot, st.psi + (sgn * tau) * r.psi_dot, st.params);
        return conserved_quantities(p, ws).hamiltonian;
    };
    double h0 = conserved_quantities(st, ws).hamiltonian;
    double flux = (ham(1.0) - ham(-1.0)) / (2.0 * tau);
    CHECK(std::abs(flux) <= 1e-8 * std::abs(h0));
}

TEST_CASE("taylor coefficient: rest state gives exactly g") {
    SurfaceState st(0.0, Field::zero(gw), Field::zero(gw), params(1.7));
    DnoWorkspace ws(gw, 1.0, 32);
    TraceState tr = trace_fields(st, ws);
    Field a = taylor_coefficient(st, tr, ws);
    CHECK((a - Field::constant(gw, 1.7)).linf() <= 1e-10);
}

TEST_CASE("taylor coefficient: deviation scales with amplitude") {
    DnoWorkspace ws(gw, 1.0, 32);
    std::vector<double> amps{0.005, 0.01, 0.02, 0.04}, devs;
    for (double amp : amps) {
        SurfaceState st = wave_state(amp, 1);
        TraceState tr = trace_fields(st, ws);
        Field a = taylor_coefficient(st, tr, ws);
        devs.push_back((a - Field::constant(gw, 1.0)).linf());
    }
    LineFit f = fit_loglog(amps, devs);
    CHECK(f.slope == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("taylor coefficient: two-path agreement") {
    DnoWorkspace ws(gw, 1.0, 32);
    SurfaceState st = wave_state(0.02, 1);
    const double dt = 0.01;
    IntegrateOptions opt;
    opt.taylor_monitor = false;
    SurfaceState s1 = step(st, dt, ws, opt);
    SurfaceState s2 = step(s1, dt, ws, opt);

    TraceState t0 = trace_fields(st, ws);
    TraceState t1 = trace_fields(s1, ws);
    TraceState t2 = trace_fields(s2, ws);
    // Path 1: directional derivative at the middle state.
    Field a1 = taylor_coefficient(s1, t1, ws);
    // Path 2: centered difference of B across the two micro-steps.
    Field dtB = (1.0 / (2.0 * dt)) * (t2.B - t0.B);
    Field a2 = Field::constant(gw, 1.0) + dtB + t1.V[0] * derivative(t1.B, 0);
    CHECK((a1 - a2).linf() <= 1e-4 * a1.linf());
}

TEST_CASE("taylor positivity holds on steep flat-bottom states") {
    // On a fixed flat bottom the Taylor coefficient of smooth graph data
    // stays positive (steep resting crests approach 0 from above); the a <= 0
    // halt fires only on discrete breakdown, exercised in the integrate test.
    DnoWorkspace ws(gw, 1.0, 32);
    for (double amp : {0.25, 0.45}) {
        SurfaceState st(0.0, coskx(amp, 4), Field::zero(gw), params());
        TraceState tr = trace_fields(st, ws);
        Field a = taylor_coefficient(st, tr, ws);
        double amin = std::numeric_limits<double>::infinity();
        for (const cplx& v : a.values()) amin = std::min(amin, v.real());
        CHECK(amin > 0.0);
        CHECK(amin < 1.0);  // well below the rest value g
    }
}

TEST_CASE("cfl guard") {
    DnoWorkspace ws(gw, 1.0, 32);
    SurfaceState st = wave_state(0.01, 1);
    CHECK_THROWS_AS(step(st, 10.0 * cfl_limit(gw, 1.0, 1.0), ws), parameter_error);
    CHECK_THROWS_AS(step(st, -0.1, ws), parameter_error);
}

TEST_CASE("integrate: rest state stays at rest") {
    SurfaceState st(0.0, Field::zero(gw), Field::zero(gw), params());
    DnoWorkspace ws(gw, 1.0, 32);
    Trajectory tr = integrate(st, 0.5, 0.05, ws);
    CHECK_FALSE(tr.halted);
    CHECK(tr.samples.back().eta.linf() <= 1e-12);
    CHECK(tr.samples.back().psi.linf() <= 1e-12);
}

TEST_CASE("integrate: linear dispersion of a single mode") {
    const int k = 2;
    const double amp = 1e-4;
    SurfaceState st = wave_state(amp, k);
    DnoWorkspace ws(gw, 1.0, 32);
    const double om_th = std::sqrt(k * std::tanh(k * 1.0));
    const double dt = 0.5 * cfl_limit(gw, 1.0, 1.0);
    IntegrateOptions opt;
    opt.sample_stride = 4;
    Trajectory tr = integrate(st, 2.0 * pi / om_th, dt, ws, opt);
    REQUIRE_FALSE(tr.halted);

    std::vector<double> times, phases;
    double prev = 0.0, offset = 0.0;
    for (const auto& sn : tr.samples) {
        double ph = std::arg(sn.eta.coeffs()[k]);
        if (!times.empty()) {
            while (ph + offset - prev > pi) offset -= 2.0 * pi;
            while (ph + offset - prev < -pi) offset += 2.0 * pi;
        }
        prev = ph + offset;
        times.push_back(sn.t);
        phases.push_back(prev);
    }
    LineFit f = fit_line(times, phases);
    CHECK(std::abs(-f.slope - om_th) <= 1e-4 * om_th);
}

TEST_CASE("integrate: time reversal") {
    SurfaceState st = wave_state(0.02, 1);
    DnoWorkspace ws(gw, 1.0, 32);
    const double dt = 0.5 * cfl_limit(gw, 1.0, 1.0);
    const double T = 128 * dt;
    IntegrateOptions opt;
    opt.taylor_monitor = false;  // speed; positivity is re-checked forward
    Trajectory fwd = integrate(st, T, dt, ws, opt);
    REQUIRE_FALSE(fwd.halted);
    const Snapshot& end = fwd.samples.back();
    SurfaceState back(0.0, end.eta, -1.0 * end.psi, st.params);
    Trajectory bwd = integrate(back, T, dt, ws, opt);
    REQUIRE_FALSE(bwd.halted);
    Field eta_back = bwd.samples.back().eta;
    Field psi_back = -1.0 * bwd.samples.back().psi;
    CHECK((eta_back - st.eta).linf() <= 1e-6);
    CHECK((psi_back - st.psi).linf() <= 1e-6);
}

TEST_CASE("integrate: conservation over one period") {
    SurfaceState st = wave_state(0.02, 1);
    DnoWorkspace ws(gw, 1.0, 32);
    const double om = std::sqrt(std::tanh(1.0));
    const double dt = 0.5 * cfl_limit(gw, 1.0, 1.0);
    Trajectory tr = integrate(st, 2.0 * pi / om, dt, ws);
    REQUIRE_FALSE(tr.halted);
    double H0 = tr.samples.front().hamiltonian;
    for (const auto& sn : tr.samples) {
        CHECK(std::abs(sn.hamiltonian - H0) <= 1e-6 * std::abs(H0));
        CHECK(std::abs(sn.mass) <= 1e-10);
        CHECK(sn.a_min > 0.0);
    }
}

TEST_CASE("integrate: blow-up halts with the last valid state") {
    DnoWorkspace ws(gw, 1.0, 32);
    SurfaceState st(0.0, Field::zero(gw), coskx(1e8, 1), params());
    IntegrateOptions opt;
    opt.taylor_monitor = false;
    opt.trace_samples = false;
    opt.sample_stride = 1;
    Trajectory tr = integrate(st, 1.0, 0.01, ws, opt);
    CHECK(tr.halted);
    CHECK(!tr.halt_reason.empty());
    CHECK(tr.samples.back().eta.finite());
}

TEST_CASE("integrate: degenerate data halts with a diagnostic") {
    DnoWorkspace ws(gw, 1.0, 32);
    SurfaceState st(0.0, Field::zero(gw), coskx(30.0, 1), params());
    Trajectory tr = integrate(st, 1.0, 0.02, ws);
    CHECK(tr.halted);
    CHECK(!tr.halt_reason.empty());
    CHECK(tr.samples.back().eta.finite());
}

TEST_CASE("conserved quantities: rest and single mode") {
    DnoWorkspace ws(gw, 1.0, 32);
    SurfaceState rest(0.0, Field::zero(gw), Field::zero(gw), params());
    Conserved c0 = conserved_quantities(rest, ws);
    CHECK(c0.hamiltonian == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(c0.mass == doctest::Approx(0.0).epsilon(1e-14));

    // eta = 0, psi = cos(kx): H = (1/2) (L/2) k tanh(kh).
    const int k = 4;
    SurfaceState st(0.0, Field::zero(gw), coskx(1.0, k), params());
    Conserved c = conserved_quantities(st, ws);
    double expect = 0.5 * (gw.period / 2.0) * k * std::tanh(double(k));
    CHECK(c.hamiltonian == doctest::Approx(expect).epsilon(1e-8));
}

TEST_CASE("trajectory persistence") {
    SurfaceState st = wave_state(0.02, 1);
    DnoWorkspace ws(gw, 1.0, 32);
    Trajectory tr = integrate(st, 0.2, 0.05, ws);
    auto dir = std::filesystem::temp_directory_path() / "wavelab_traj_test";
    std::filesystem::remove_all(dir);
    write_trajectory(tr, st.params, 2.5, dir);
    CHECK(trajectory_complete(dir));
    Field eta0 = read_field(dir / "fields" / "eta_0000.bin");
    CHECK(l2_norm(eta0 - st.eta.real_part()) <= 1e-15);
    std::filesystem::remove_all(dir);
}
