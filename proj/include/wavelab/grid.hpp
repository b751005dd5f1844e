#ifndef WAVELAB_GRID_HPP
#define WAVELAB_GRID_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "wavelab/errors.hpp"

namespace wavelab {

inline constexpr double pi = std::numbers::pi;

/// Periodic spatial discretization: d in {1,2}, n points per axis (power of
/// two, >= 16), period L per axis. The frequency lattice is xi_j = 2 pi j / L
/// for j in [-n/2, n/2).
struct GridSpec {
    int d = 1;
    int n = 0;
    double period = 2.0 * pi;

    GridSpec() = default;
    GridSpec(int d_, int n_, double period_) : d(d_), n(n_), period(period_) { validate(); }

    void validate() const {
        if (d != 1 && d != 2) throw parameter_error("GridSpec: d must be 1 or 2");
        if (n < 16 || (n & (n - 1)) != 0) throw parameter_error("GridSpec: n must be a power of two >= 16");
        if (!(period > 0.0) || !std::isfinite(period)) throw parameter_error("GridSpec: period must be positive");
    }

    std::size_t size() const { return d == 1 ? std::size_t(n) : std::size_t(n) * std::size_t(n); }
    double dx() const { return period / n; }
    /// Spacing of the frequency lattice.
    double dxi() const { return 2.0 * pi / period; }
    /// Largest |xi| on the lattice (corner frequency in 2-d).
    double xi_max() const {
        const double ax = dxi() * (n / 2);
        return d == 1 ? ax : ax * std::sqrt(2.0);
    }

    /// Signed mode number of FFT index k along one axis.
    int mode_of(int k) const { return k < n / 2 ? k : k - n; }

    /// Physical x-coordinates of flat index (row-major, axis 0 slowest).
    std::array<double, 2> point(std::size_t idx) const {
        if (d == 1) return {double(idx) * dx(), 0.0};
        return {double(idx / std::size_t(n)) * dx(), double(idx % std::size_t(n)) * dx()};
    }

    bool operator==(const GridSpec&) const = default;
};

/// Cached per-grid frequency tables.
struct Lattice {
    std::vector<std::array<double, 2>> xi;  // frequency components per flat index
    std::vector<double> xi_abs;             // |xi|
    std::vector<double> xi_bracket;         // <xi> = sqrt(1+|xi|^2)

    static const Lattice& get(const GridSpec& g);
};

}  // namespace wavelab

#endif
