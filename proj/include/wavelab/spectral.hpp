#ifndef WAVELAB_SPECTRAL_HPP
#define WAVELAB_SPECTRAL_HPP

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "wavelab/field.hpp"

namespace wavelab {

using MultiplierFn = std::function<cplx(const std::array<double, 2>& xi)>;

/// Pointwise multiplication of the Fourier coefficients by m(xi). Throws
/// invalid_multiplier_error if m is not finite somewhere on the lattice.
Field fourier_multiplier(const Field& u, const MultiplierFn& m);

/// Same, with a precomputed real mask over the lattice.
Field apply_mask(const Field& u, const std::vector<double>& mask);

/// <D>^s u.
Field bessel_power(const Field& u, double s);

/// d/dx_axis by spectral differentiation.
Field derivative(const Field& u, int axis);
Field laplacian(const Field& u);
VecField gradient(const Field& u);
double divergence_free_mean(const Field& u);  // helper: mean value

// --- smooth cutoff profiles -------------------------------------------------

/// C^inf transition, 0 for t<=0 and 1 for t>=1.
double smooth_step(double t);
/// Littlewood-Paley profile: 1 for |r|<=1.1, 0 for |r|>=1.9.
double kappa_profile(double r);
/// Mollifier profile jhat: 1 for |r|<=1, 0 for |r|>=2, even.
double jhat_profile(double r);
/// Paradifferential low-frequency cutoff: 0 for |r|<=1/5, 1 for |r|>=1/4.
double psi_profile(double r);

// --- Littlewood-Paley ladder -------------------------------------------------

/// Dyadic blocks S_k = kappa_k(D), Delta_0 = S_0, Delta_k = S_k - S_{k-1}.
/// k_max is chosen so kappa_{k_max} == 1 on the whole lattice, which makes
/// sum_k Delta_k u = u exact.
class DyadicLadder {
  public:
    static const DyadicLadder& get(const GridSpec& g);

    int kmax() const { return kmax_; }
    const GridSpec& grid() const { return grid_; }

    /// Delta_k u. k must lie in [0, kmax].
    Field block(const Field& u, int k) const;
    /// S_k u = kappa_k(D) u. Accepts any k >= -40 (kappa_k ~ delta_0 below).
    Field running(const Field& u, int k) const;

    /// phi_k evaluated at a scalar frequency magnitude.
    double phi_at(int k, double r) const;

    const std::vector<double>& phi_mask(int k) const;
    /// kappa_j mask for j in [-3, kmax].
    const std::vector<double>& kappa_mask(int j) const;
    const std::vector<double>& psi_mask() const;

  private:
    explicit DyadicLadder(const GridSpec& g);
    GridSpec grid_;
    int kmax_ = 0;
    std::vector<std::vector<double>> phi_;    // k = 0..kmax
    std::vector<std::vector<double>> kappa_;  // j = -3..kmax, index j+3
    std::vector<double> psi_;
};

// --- norms --------------------------------------------------------------------

/// Discrete Sobolev norm (sum <xi>^{2s} |uhat|^2)^{1/2}; equals the L2 norm
/// under the normalized measure dx/L^d at s = 0.
double sobolev_norm(const Field& u, double s);
double l2_norm(const Field& u);

/// Zygmund norm sup_q 2^{qs} ||Delta_q u||_{L^inf}.
double zygmund_norm(const Field& u, double s);

// --- Friedrichs mollifiers -----------------------------------------------------

/// J_eps = jhat(eps D), K_eps = I - J_eps. Requires eps in (0,1).
std::pair<Field, Field> mollify(const Field& u, double eps);
Field mollify_low(const Field& u, double eps);   // J_eps u
Field mollify_high(const Field& u, double eps);  // K_eps u
/// K_eps^2 <D>^s u (the operator L of the reduction).
Field keps2_bessel(const Field& u, double eps, double s);
/// The scalar symbol k_eps(xi) = 1 - jhat(eps |xi|).
double keps_symbol(double eps, double xi_abs);

// --- misc -----------------------------------------------------------------------

/// Zero all modes with |j| > floor(n/3) on any axis (2/3-rule dealiasing).
Field dealias(const Field& u);

/// Random real field with spectrum profile(|xi|) and phases drawn from the
/// given seed; conjugate symmetry is enforced so the samples are real.
Field random_real_field(const GridSpec& g, std::uint64_t seed, const std::function<double(double)>& profile);

/// Per-block energies ||Delta_k u||_{L2}, as (k, energy) rows.
std::vector<std::pair<int, double>> block_energies(const Field& u);

}  // namespace wavelab

#endif
