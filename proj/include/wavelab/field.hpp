#ifndef WAVELAB_FIELD_HPP
#define WAVELAB_FIELD_HPP

#include <complex>
#include <functional>
#include <mutex>
#include <vector>

#include "wavelab/grid.hpp"

namespace wavelab {

using cplx = std::complex<double>;

/// A grid function: real-space samples plus lazily cached Fourier amplitudes.
/// The amplitude convention is u(x) = sum_xi uhat(xi) e^{i xi.x}, so a single
/// mode e^{iNx} has unit coefficient. Fields are immutable after construction
/// and safe to share across threads; the representation caches are populated
/// on first use behind a mutex.
class Field {
  public:
    Field() = default;
    static Field zero(const GridSpec& g);
    static Field constant(const GridSpec& g, cplx c);
    static Field from_values(const GridSpec& g, std::vector<cplx> vals);
    static Field from_coeffs(const GridSpec& g, std::vector<cplx> coefs);
    static Field from_real(const GridSpec& g, const std::vector<double>& vals);
    /// u(x) = f(x) sampled on the grid (d=1 uses x[0]).
    static Field sample(const GridSpec& g, const std::function<cplx(std::array<double, 2>)>& f);
    /// Single lattice mode e^{i xi.x} with the given per-axis mode numbers.
    static Field mode(const GridSpec& g, int j0, int j1 = 0, cplx amplitude = 1.0);

    Field(const Field& o);
    Field& operator=(const Field& o);
    Field(Field&&) noexcept = default;
    Field& operator=(Field&&) noexcept = default;

    const GridSpec& grid() const { return grid_; }
    bool empty() const { return grid_.n == 0; }
    std::size_t size() const { return grid_.size(); }

    const std::vector<cplx>& values() const;
    const std::vector<cplx>& coeffs() const;

    double linf() const;
    double max_imag() const;
    bool finite() const;
    /// Field of real parts.
    Field real_part() const;
    std::vector<double> real_values() const;

    Field conj() const;

    friend Field operator+(const Field& a, const Field& b);
    friend Field operator-(const Field& a, const Field& b);
    friend Field operator*(cplx s, const Field& a);
    friend Field operator*(double s, const Field& a);
    /// Pointwise product of real-space samples.
    friend Field operator*(const Field& a, const Field& b);

  private:
    GridSpec grid_;
    mutable std::vector<cplx> vals_, coefs_;
    mutable bool have_vals_ = false, have_coefs_ = false;
    mutable std::mutex mu_;

    void ensure_values() const;
    void ensure_coeffs() const;
};

using VecField = std::vector<Field>;  // one Field per axis

void check_same_grid(const Field& a, const Field& b);

/// L2 inner product with the physical measure (L/n)^d Sum. Conjugates the
/// first argument.
cplx phys_inner(const Field& a, const Field& b);
/// Integral with the physical measure.
cplx phys_integral(const Field& a);

}  // namespace wavelab

#endif
