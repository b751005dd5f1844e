#ifndef WAVELAB_DNO_HPP
#define WAVELAB_DNO_HPP

#include <Eigen/Dense>
#include <memory>
#include <optional>

#include "wavelab/chebyshev.hpp"
#include "wavelab/paradiff.hpp"

namespace wavelab {

/// A function v(x, z) on the straightened strip: Fourier in x, Chebyshev
/// collocation in z in [-1, 0]. Storage is level-major (level j contiguous).
struct StripField {
    GridSpec grid;
    int nz = 0;
    std::vector<cplx> values;

    StripField() = default;
    StripField(const GridSpec& g, int nz_) : grid(g), nz(nz_), values(g.size() * std::size_t(nz_), 0.0) {}

    std::size_t level_size() const { return grid.size(); }
    cplx* level(int j) { return values.data() + std::size_t(j) * level_size(); }
    const cplx* level(int j) const { return values.data() + std::size_t(j) * level_size(); }
    Field level_field(int j) const;
    void set_level(int j, const Field& f);
};

/// d/dz by Chebyshev differentiation (exact for polynomials of degree < nz).
StripField dz(const StripField& v);
/// d/dx_axis by spectral differentiation per level.
StripField dx(const StripField& v, int axis);

/// The straightening diffeomorphism rho(x,z) of the strip, its derivatives,
/// and the trace coefficients zeta1 = (1+|grad rho|^2)/dz_rho, zeta2 = grad rho.
/// The smoothing multipliers use the weight <xi> - 1, which vanishes at
/// xi = 0 so that constant eta stays exactly multiplier-invariant.
struct StraighteningMap {
    GridSpec grid;
    int nz = 0;
    double h = 0.0;
    double delta = 0.0;
    double min_dz_rho = 0.0;  // reported ellipticity constant c0

    // Flat real arrays, level-major, one entry per (z-level, x-point).
    std::vector<double> rho, dz_rho, dzz_rho, lap_rho;
    std::vector<std::vector<double>> grad_rho;     // per axis
    std::vector<std::vector<double>> grad_dz_rho;  // per axis
};

/// Coefficients of the transformed Laplace equation
/// (dz^2 + alpha Lap_x + beta . grad_x dz - gamma dz) v = 0 and the trace
/// weights zeta1, zeta2.
struct EllipticCoeffs {
    GridSpec grid;
    int nz = 0;
    double h = 0.0;
    std::vector<double> alpha, gamma;
    std::vector<std::vector<double>> beta;   // per axis
    std::vector<double> zeta1;
    std::vector<std::vector<double>> zeta2;  // per axis
};

/// delta heuristic: 0.1 h / (1 + ||eta||_{H^{s+1/2}}).
double default_delta(const Field& eta, double h, double s = 2.5);

/// Builds the map; throws diffeo_error when min dz_rho <= 0.
StraighteningMap build_straightening(const Field& eta, double h, double delta, int nz = 48);

EllipticCoeffs elliptic_coeffs(const StraighteningMap& map);

struct StripSolveOptions {
    double rtol = 1e-12;
    int restart = 40;
    int maxiter = 400;
};

struct StripSolveInfo {
    int iterations = 0;
    double residual = 0.0;       // preconditioned relative residual
    double pde_residual = 0.0;   // raw interior PDE residual, relative
};

/// Elliptic strip solver with the flat-surface operator (diagonal per x
/// frequency) as preconditioner. The context is immutable after construction
/// and shareable between threads.
class StripSolver {
  public:
    StripSolver(const GridSpec& g, double h, int nz);

    /// Solves (dz^2 + alpha Lap + beta.grad dz - gamma dz) v = F0 with
    /// v = f at z=0 and vanishing conormal flux zeta1 dz v - zeta2.grad v at
    /// z=-1 (the variational bottom condition; equals dz v = 0 for flat
    /// surfaces). warm, when given, seeds the Krylov iteration.
    StripField solve(const EllipticCoeffs& c, const Field& f, const StripField* F0 = nullptr,
                     const StripField* warm = nullptr, const StripSolveOptions& opt = {},
                     StripSolveInfo* info = nullptr) const;

    const GridSpec& grid() const { return grid_; }
    double h() const { return h_; }
    int nz() const { return nz_; }

  private:
    GridSpec grid_;
    double h_;
    int nz_;
    Eigen::MatrixXcd Dz_, Dzz_;
    std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> mode_lu_;

    void apply_operator(const EllipticCoeffs& c, const std::vector<cplx>& v, std::vector<cplx>& out) const;
    void apply_preconditioner(const std::vector<cplx>& r, std::vector<cplx>& out) const;
};

/// G(eta) f = [zeta1 dz v - zeta2 . grad_x v]|_{z=0}.
Field dirichlet_neumann(const Field& eta, const Field& f, double h, double delta, int nz = 48);

/// Persistent workspace: shares the preconditioner and warm-starts the
/// Krylov solve from the previous field. One instance per thread.
class DnoWorkspace {
  public:
    DnoWorkspace(const GridSpec& g, double h, int nz = 48);
    Field apply(const Field& eta, double delta, const Field& f, StripSolveInfo* info = nullptr);
    /// Same, but also exposes the strip solution and coefficients.
    Field apply_full(const Field& eta, double delta, const Field& f, StripField* v_out,
                     EllipticCoeffs* coeffs_out = nullptr, StripSolveInfo* info = nullptr);
    const StripSolver& solver() const { return solver_; }

  private:
    StripSolver solver_;
    std::optional<StripField> last_v_;
};

/// Principal symbol lambda(x,xi) = sqrt((1+|grad eta|^2)|xi|^2 - (grad eta.xi)^2).
/// In d=1 this is exactly |xi| for every eta.
SymbolFn principal_symbol_lambda(const Field& eta, double rho0 = 0.4);

/// Flat-strip multiplier G(0) = |D| tanh(h |D|); the separation-of-variables
/// oracle for eta == 0.
Field flat_dno(const Field& f, double h);

/// R(eta) f = G(eta) f - T_lambda f.
Field dn_remainder(const Field& eta, const Field& f, double h, double delta, int nz = 48);

/// Lifting symbol A = (1/2)(-i beta.xi + sqrt(4 alpha <xi>^2 - (beta.xi)^2))
/// at z-level `level`. Throws ellipticity_error if the radicand is negative
/// somewhere on the lattice.
SymbolFn lifting_symbol_A(const EllipticCoeffs& c, int level, double rho0 = 0.4);

/// Good unknown w = (dz - T_A) v with A built per z-level.
StripField good_unknown_w(const StripField& v, const EllipticCoeffs& c, double rho0 = 0.4);

}  // namespace wavelab

#endif
