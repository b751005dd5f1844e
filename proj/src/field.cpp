#include "wavelab/field.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "wavelab/fft_internal.hpp"

namespace wavelab {

const Lattice& Lattice::get(const GridSpec& g) {
    static std::mutex mu;
    static std::map<std::tuple<int, int, double>, Lattice> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(g.d, g.n, g.period);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    Lattice lat;
    const std::size_t sz = g.size();
    lat.xi.resize(sz);
    lat.xi_abs.resize(sz);
    lat.xi_bracket.resize(sz);
    const double du = g.dxi();
    for (std::size_t i = 0; i < sz; ++i) {
        double x0, x1 = 0.0;
        if (g.d == 1) {
            x0 = du * g.mode_of(int(i));
        } else {
            x0 = du * g.mode_of(int(i / std::size_t(g.n)));
            x1 = du * g.mode_of(int(i % std::size_t(g.n)));
        }
        lat.xi[i] = {x0, x1};
        lat.xi_abs[i] = std::hypot(x0, x1);
        lat.xi_bracket[i] = std::sqrt(1.0 + x0 * x0 + x1 * x1);
    }
    return cache.emplace(key, std::move(lat)).first->second;
}

Field Field::zero(const GridSpec& g) { return constant(g, 0.0); }

Field Field::constant(const GridSpec& g, cplx c) {
    Field f;
    f.grid_ = g;
    f.vals_.assign(g.size(), c);
    f.have_vals_ = true;
    f.coefs_.assign(g.size(), 0.0);
    f.coefs_[0] = c;
    f.have_coefs_ = true;
    return f;
}

Field Field::from_values(const GridSpec& g, std::vector<cplx> vals) {
    if (vals.size() != g.size()) throw grid_mismatch_error("Field::from_values: size mismatch");
    Field f;
    f.grid_ = g;
    f.vals_ = std::move(vals);
    f.have_vals_ = true;
    return f;
}

Field Field::from_coeffs(const GridSpec& g, std::vector<cplx> coefs) {
    if (coefs.size() != g.size()) throw grid_mismatch_error("Field::from_coeffs: size mismatch");
    Field f;
    f.grid_ = g;
    f.coefs_ = std::move(coefs);
    f.have_coefs_ = true;
    return f;
}

Field Field::from_real(const GridSpec& g, const std::vector<double>& vals) {
    std::vector<cplx> v(vals.begin(), vals.end());
    return from_values(g, std::move(v));
}

Field Field::sample(const GridSpec& g, const std::function<cplx(std::array<double, 2>)>& f) {
    std::vector<cplx> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = f(g.point(i));
    return from_values(g, std::move(v));
}

Field Field::mode(const GridSpec& g, int j0, int j1, cplx amplitude) {
    if (std::abs(j0) > g.n / 2 || (g.d == 2 && std::abs(j1) > g.n / 2))
        throw index_error("Field::mode: mode number beyond lattice");
    std::vector<cplx> c(g.size(), 0.0);
    auto wrap = [&](int j) { return std::size_t((j % g.n + g.n) % g.n); };
    std::size_t idx = g.d == 1 ? wrap(j0) : wrap(j0) * std::size_t(g.n) + wrap(j1);
    c[idx] = amplitude;
    return from_coeffs(g, std::move(c));
}

Field::Field(const Field& o) {
    std::lock_guard<std::mutex> lock(o.mu_);
    grid_ = o.grid_;
    vals_ = o.vals_;
    coefs_ = o.coefs_;
    have_vals_ = o.have_vals_;
    have_coefs_ = o.have_coefs_;
}

Field& Field::operator=(const Field& o) {
    if (this == &o) return *this;
    Field tmp(o);
    grid_ = tmp.grid_;
    vals_ = std::move(tmp.vals_);
    coefs_ = std::move(tmp.coefs_);
    have_vals_ = tmp.have_vals_;
    have_coefs_ = tmp.have_coefs_;
    return *this;
}

void Field::ensure_values() const {
    if (have_vals_) return;
    std::lock_guard<std::mutex> lock(mu_);
    if (have_vals_) return;
    vals_.resize(grid_.size());
    fft::inverse(grid_, coefs_.data(), vals_.data());
    have_vals_ = true;
}

void Field::ensure_coeffs() const {
    if (have_coefs_) return;
    std::lock_guard<std::mutex> lock(mu_);
    if (have_coefs_) return;
    coefs_.resize(grid_.size());
    fft::forward(grid_, vals_.data(), coefs_.data());
    have_coefs_ = true;
}

const std::vector<cplx>& Field::values() const {
    ensure_values();
    return vals_;
}

const std::vector<cplx>& Field::coeffs() const {
    ensure_coeffs();
    return coefs_;
}

double Field::linf() const {
    double m = 0.0;
    for (const cplx& v : values()) m = std::max(m, std::abs(v));
    return m;
}

double Field::max_imag() const {
    double m = 0.0;
    for (const cplx& v : values()) m = std::max(m, std::abs(v.imag()));
    return m;
}

bool Field::finite() const {
    for (const cplx& v : values())
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

Field Field::real_part() const {
    std::vector<cplx> v(size());
    const auto& val = values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = val[i].real();
    return from_values(grid_, std::move(v));
}

std::vector<double> Field::real_values() const {
    const auto& val = values();
    std::vector<double> v(val.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = val[i].real();
    return v;
}

Field Field::conj() const {
    std::vector<cplx> v(size());
    const auto& val = values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::conj(val[i]);
    return from_values(grid_, std::move(v));
}

void check_same_grid(const Field& a, const Field& b) {
    if (!(a.grid() == b.grid())) throw grid_mismatch_error("fields live on different grids");
}

Field operator+(const Field& a, const Field& b) {
    check_same_grid(a, b);
    std::vector<cplx> v(a.size());
    const auto& va = a.values();
    const auto& vb = b.values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = va[i] + vb[i];
    return Field::from_values(a.grid(), std::move(v));
}

Field operator-(const Field& a, const Field& b) {
    check_same_grid(a, b);
    std::vector<cplx> v(a.size());
    const auto& va = a.values();
    const auto& vb = b.values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = va[i] - vb[i];
    return Field::from_values(a.grid(), std::move(v));
}

Field operator*(cplx s, const Field& a) {
    std::vector<cplx> v(a.size());
    const auto& va = a.values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = s * va[i];
    return Field::from_values(a.grid(), std::move(v));
}

Field operator*(double s, const Field& a) { return cplx(s, 0.0) * a; }

Field operator*(const Field& a, const Field& b) {
    check_same_grid(a, b);
    std::vector<cplx> v(a.size());
    const auto& va = a.values();
    const auto& vb = b.values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = va[i] * vb[i];
    return Field::from_values(a.grid(), std::move(v));
}

cplx phys_inner(const Field& a, const Field& b) {
    check_same_grid(a, b);
    const auto& va = a.values();
    const auto& vb = b.values();
    cplx s = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i) s += std::conj(va[i]) * vb[i];
    double meas = std::pow(a.grid().dx(), a.grid().d);
    return s * meas;
}

cplx phys_integral(const Field& a) {
    const auto& va = a.values();
    cplx s = 0.0;
    for (const cplx& v : va) s += v;
    return s * std::pow(a.grid().dx(), a.grid().d);
}

}  // namespace wavelab
