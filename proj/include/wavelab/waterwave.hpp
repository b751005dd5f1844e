#ifndef WAVELAB_WATERWAVE_HPP
#define WAVELAB_WATERWAVE_HPP

#include "wavelab/dno.hpp"

namespace wavelab {

struct WaveParams {
    double g = 1.0;
    double h = 1.0;
    double delta = 0.0;  // 0: use default_delta at construction
    int nz = 48;
    double s_ref = 2.5;  // Sobolev index used by the delta heuristic
};

/// The evolving Zakharov unknowns (eta, psi) at time t.
struct SurfaceState {
    double t = 0.0;
    Field eta, psi;
    WaveParams params;

    SurfaceState() = default;
    /// Validates the strip condition (straightening must succeed) and
    /// finiteness; fills in the delta default when params.delta == 0.
    SurfaceState(double t, Field eta, Field psi, WaveParams p);
};

struct TraceState {
    Field B;
    VecField V;
    Field a;  // Taylor coefficient; empty until computed
};

struct RhsEval {
    Field eta_dot, psi_dot;
    Field Gpsi;
    Field B;
    VecField V;
};

/// B = (grad eta . grad psi + G(eta) psi)/(1+|grad eta|^2), V = grad psi - B grad eta.
TraceState trace_fields(const SurfaceState& st, DnoWorkspace& ws);

struct RhsOptions {
    bool dealias = true;
};

/// Right-hand side of the Zakharov/Craig-Sulem system.
RhsEval zakharov_rhs(const SurfaceState& st, DnoWorkspace& ws, const RhsOptions& opt = {});

struct TaylorOptions {
    double step_scale = 1e-6;   // directional-derivative step, relative
    bool richardson = true;
};

/// Taylor coefficient a = g + (d_t + V.grad) B, with d_t B evaluated as a
/// directional derivative of the trace map along the Zakharov right-hand
/// side. Throws taylor_sign_error if a <= 0 anywhere.
Field taylor_coefficient(const SurfaceState& st, const TraceState& tr, DnoWorkspace& ws,
                         const TaylorOptions& opt = {});

/// Largest stable time step scale: 1/sqrt(g xi_max tanh(xi_max h)).
double cfl_limit(const GridSpec& g, double grav, double h);

struct IntegrateOptions {
    bool dealias = true;
    bool exp_filter = false;      // optional high-frequency filter for long runs
    int sample_stride = 8;
    bool taylor_monitor = true;   // check a > 0 every step
    bool trace_samples = true;    // store B, V, a at sample times
};

struct Snapshot {
    double t = 0.0;
    Field eta, psi;
    Field Gpsi;
    Field B;
    VecField V;
    Field a;
    double a_min = 0.0;
    double hamiltonian = 0.0;
    double mass = 0.0;
    std::array<double, 2> momentum{0.0, 0.0};
};

struct Trajectory {
    std::vector<Snapshot> samples;
    double dt = 0.0;
    int steps = 0;
    bool halted = false;
    std::string halt_reason;
    double halt_time = 0.0;
};

/// One classical RK4 step (2/3-dealiased right-hand sides). Throws on CFL
/// violation, NaN, or Taylor-sign failure.
SurfaceState step(const SurfaceState& st, double dt, DnoWorkspace& ws, const IntegrateOptions& opt = {});

/// Integrates to time T with fixed dt, sampling every opt.sample_stride
/// steps. A halt (blow-up or Taylor sign) is recorded on the trajectory; the
/// samples collected so far, including the last valid state, are kept.
Trajectory integrate(const SurfaceState& st0, double T, double dt, DnoWorkspace& ws,
                     const IntegrateOptions& opt = {});

struct Conserved {
    double hamiltonian = 0.0;
    double mass = 0.0;
    std::array<double, 2> momentum{0.0, 0.0};
};

/// H = (1/2) <psi, G(eta) psi> + (g/2) int eta^2; mass = int eta;
/// momentum = int eta grad psi.
Conserved conserved_quantities(const SurfaceState& st, DnoWorkspace& ws);

/// Z^s norm of (eta, psi, B, V): H^{s+1/2} x H^{s+1/2} x H^s x H^s.
double zs_norm(const Field& eta, const Field& psi, const Field& B, const VecField& V, double s);

}  // namespace wavelab

#endif
