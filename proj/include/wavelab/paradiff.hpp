#ifndef WAVELAB_PARADIFF_HPP
#define WAVELAB_PARADIFF_HPP

#include "wavelab/symbol.hpp"
#include "wavelab/spectral.hpp"

namespace wavelab {

/// T_a u for an x-only coefficient a: sum_k S_{k-3}(a) Delta_k psi(D) u.
Field paraproduct(const Field& a, const Field& u);

/// T_a u for a genuine (x,xi) symbol. Separable symbols run blockwise in
/// O(K N log N); generic symbols are quantized exactly per lattice frequency.
Field paradiff_apply(const SymbolFn& a, const Field& u);

/// (T_a)^* u, the L2 adjoint: sum_k psi(D) Delta_k (S_{k-3}(conj a) u) for
/// x-only symbols (general symbols via the per-frequency matrix transpose).
Field paradiff_apply_adjoint(const SymbolFn& a, const Field& u);

/// Reference evaluation of the defining double sum
///   (T_a u)^(xi) = sum_eta chi(xi-eta,eta) ahat(xi-eta;eta) psi(eta) uhat(eta)
/// on the lattice. O(N^2); used as the quantization oracle.
Field paradiff_direct(const SymbolFn& a, const Field& u);

/// Bony remainder R(a,u) = a u - T_a u - T_u a (grid pointwise product).
Field bony_remainder(const Field& a, const Field& u);

/// a#b = sum_{|alpha|<rho} ((-i)^alpha/alpha!) d_xi^alpha a d_x^alpha b for
/// rho <= 2 (alpha in {0,1}). xi-derivatives are centered differences at the
/// lattice step, x-derivatives spectral.
SymbolFn compose_symbols(const SymbolFn& a, const SymbolFn& b, double rho);

/// [K_eps, T_a] u, or [K_eps^2 <D>^s, T_a] u when square is set.
Field commutator_mollifier(const SymbolFn& a, const Field& u, double eps, bool square = false, double s = 0.0);

/// T_{V}.grad u = sum_j T_{V_j} d_j u.
Field para_transport(const VecField& V, const Field& u);

/// Writes per-block energies ||Delta_k u|| as CSV rows "k,energy".
void dump_block_energies(const Field& u, const std::string& path);

}  // namespace wavelab

#endif
