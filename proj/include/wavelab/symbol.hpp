#ifndef WAVELAB_SYMBOL_HPP
#define WAVELAB_SYMBOL_HPP

#include <functional>
#include <string>
#include <vector>

#include "wavelab/spectral.hpp"

namespace wavelab {

/// One separable term c(x) * w(xi) of a symbol.
struct SymbolTerm {
    Field coef;
    MultiplierFn mult;
};

/// An (x,xi)-symbol with declared order m and regularity rho. A symbol is
/// either an exact sum of separable terms (the quantizer's fast path) or a
/// generic pointwise evaluator a(x_index, xi). Symbols with a |xi|
/// singularity at 0 are evaluated as 0 below |xi| = 1/2; the psi cutoff of
/// the quantization makes that region irrelevant.
class SymbolFn {
  public:
    double order = 0.0;
    double regularity = 0.0;
    bool radial_xi = false;  // metadata for fast paths

    std::vector<SymbolTerm> terms;
    std::function<cplx(std::size_t xidx, const std::array<double, 2>& xi)> generic;

    bool separable() const { return !terms.empty(); }
    bool x_independent() const;

    cplx eval(std::size_t xidx, const std::array<double, 2>& xi) const;

    /// a(x, xi) = a(x): a paraproduct coefficient.
    static SymbolFn x_only(Field a, double rho = 0.0);
    /// a(x, xi) = w(xi): a Fourier multiplier restricted by the psi cutoff.
    static SymbolFn multiplier_only(const GridSpec& g, MultiplierFn w, double order, bool radial = true);
    static SymbolFn separable_sum(std::vector<SymbolTerm> terms, double order, double rho);
    static SymbolFn from_eval(const GridSpec& g,
                              std::function<cplx(std::size_t, const std::array<double, 2>&)> eval, double order,
                              double rho);

    const GridSpec& grid() const { return grid_; }

  private:
    GridSpec grid_;
};

/// Report from the discrete seminorm surrogate M^m_rho(a).
struct SeminormReport {
    double value = 0.0;
    bool regularity_ok = true;
    std::string note;
};

struct SeminormOptions {
    int alpha_cap = 6;       // truncation of the |alpha| range (flagged surrogate)
    int xi_samples = 0;      // 0: automatic subsample of the lattice
    bool full_lattice = false;
};

/// Discrete surrogate of the symbol seminorm: sup over |alpha| <= min(2(d+2)+
/// ceil(rho), alpha_cap) and lattice |xi| >= 1/2 of
/// <xi>^{|alpha|-m} ||d_xi^alpha a(.,xi)||_{W^{rho,inf}}. xi-derivatives are
/// centered differences at the lattice spacing; the Hoelder quotient for the
/// fractional part of rho is taken over grid point pairs.
SeminormReport estimate_seminorm(const SymbolFn& a, double m, double rho, const SeminormOptions& opt = {});

}  // namespace wavelab

#endif
