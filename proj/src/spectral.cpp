#include "wavelab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <random>

namespace wavelab {

Field fourier_multiplier(const Field& u, const MultiplierFn& m) {
    const Lattice& lat = Lattice::get(u.grid());
    const auto& c = u.coeffs();
    std::vector<cplx> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        cplx mv = m(lat.xi[i]);
        if (!std::isfinite(mv.real()) || !std::isfinite(mv.imag()))
            throw invalid_multiplier_error("fourier_multiplier: non-finite multiplier on the lattice");
        out[i] = mv * c[i];
    }
    return Field::from_coeffs(u.grid(), std::move(out));
}

Field apply_mask(const Field& u, const std::vector<double>& mask) {
    const auto& c = u.coeffs();
    std::vector<cplx> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) out[i] = mask[i] * c[i];
    return Field::from_coeffs(u.grid(), std::move(out));
}

Field bessel_power(const Field& u, double s) {
    const Lattice& lat = Lattice::get(u.grid());
    const auto& c = u.coeffs();
    std::vector<cplx> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) out[i] = std::pow(lat.xi_bracket[i], s) * c[i];
    return Field::from_coeffs(u.grid(), std::move(out));
}

Field derivative(const Field& u, int axis) {
    if (axis < 0 || axis >= u.grid().d) throw index_error("derivative: axis out of range");
    const Lattice& lat = Lattice::get(u.grid());
    const auto& c = u.coeffs();
    std::vector<cplx> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) out[i] = cplx(0.0, lat.xi[i][axis]) * c[i];
    return Field::from_coeffs(u.grid(), std::move(out));
}

Field laplacian(const Field& u) {
    const Lattice& lat = Lattice::get(u.grid());
    const auto& c = u.coeffs();
    std::vector<cplx> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) out[i] = -lat.xi_abs[i] * lat.xi_abs[i] * c[i];
    return Field::from_coeffs(u.grid(), std::move(out));
}

VecField gradient(const Field& u) {
    VecField g;
    for (int a = 0; a < u.grid().d; ++a) g.push_back(derivative(u, a));
    return g;
}

double divergence_free_mean(const Field& u) { return std::abs(u.coeffs()[0]); }

// --- profiles -----------------------------------------------------------------

double smooth_step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

double kappa_profile(double r) { return 1.0 - smooth_step((std::abs(r) - 1.1) / 0.8); }

double jhat_profile(double r) { return 1.0 - smooth_step(std::abs(r) - 1.0); }

double psi_profile(double r) { return smooth_step((std::abs(r) - 0.2) / 0.05); }

// --- ladder -------------------------------------------------------------------

DyadicLadder::DyadicLadder(const GridSpec& g) : grid_(g) {
    const Lattice& lat = Lattice::get(g);
    kmax_ = std::max(1, int(std::ceil(std::log2(g.xi_max() / 1.1))) + 1);

    const std::size_t sz = g.size();
    kappa_.resize(std::size_t(kmax_) + 4);
    for (int j = -3; j <= kmax_; ++j) {
        std::vector<double> mask(sz);
        const double scale = std::pow(2.0, -double(j));
        for (std::size_t i = 0; i < sz; ++i) mask[i] = kappa_profile(scale * lat.xi_abs[i]);
        kappa_[std::size_t(j + 3)] = std::move(mask);
    }
    phi_.resize(std::size_t(kmax_) + 1);
    phi_[0] = kappa_mask(0);
    for (int k = 1; k <= kmax_; ++k) {
        std::vector<double> mask(sz);
        const auto& hi = kappa_mask(k);
        const auto& lo = kappa_mask(k - 1);
        for (std::size_t i = 0; i < sz; ++i) mask[i] = hi[i] - lo[i];
        phi_[std::size_t(k)] = std::move(mask);
    }
    psi_.resize(sz);
    for (std::size_t i = 0; i < sz; ++i) psi_[i] = psi_profile(lat.xi_abs[i]);
}

const DyadicLadder& DyadicLadder::get(const GridSpec& g) {
    static std::mutex mu;
    static std::map<std::tuple<int, int, double>, DyadicLadder> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(g.d, g.n, g.period);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    return cache.emplace(key, DyadicLadder(g)).first->second;
}

const std::vector<double>& DyadicLadder::phi_mask(int k) const {
    if (k < 0 || k > kmax_) throw index_error("DyadicLadder: block index out of range");
    return phi_[std::size_t(k)];
}

const std::vector<double>& DyadicLadder::kappa_mask(int j) const {
    if (j < -3 || j > kmax_) throw index_error("DyadicLadder: kappa index out of range");
    return kappa_[std::size_t(j + 3)];
}

const std::vector<double>& DyadicLadder::psi_mask() const { return psi_; }

double DyadicLadder::phi_at(int k, double r) const {
    if (k < 0) return 0.0;
    if (k == 0) return kappa_profile(r);
    return kappa_profile(std::pow(2.0, -double(k)) * r) - kappa_profile(std::pow(2.0, -double(k - 1)) * r);
}

Field DyadicLadder::block(const Field& u, int k) const { return apply_mask(u, phi_mask(k)); }

Field DyadicLadder::running(const Field& u, int k) const {
    if (k >= -3 && k <= kmax_) return apply_mask(u, kappa_mask(k));
    // Outside the cached range: kappa_k on the lattice is either a pure
    // mean-mode mask (very negative k) or identically 1 (k > kmax).
    if (k > kmax_) return u;
    const Lattice& lat = Lattice::get(u.grid());
    const double scale = std::pow(2.0, -double(k));
    std::vector<double> mask(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) mask[i] = kappa_profile(scale * lat.xi_abs[i]);
    return apply_mask(u, mask);
}

// --- norms --------------------------------------------------------------------

double sobolev_norm(const Field& u, double s) {
    const Lattice& lat = Lattice::get(u.grid());
    const auto& c = u.coeffs();
    double acc = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        double w = std::pow(lat.xi_bracket[i], 2.0 * s);
        acc += w * std::norm(c[i]);
    }
    return std::sqrt(acc);
}

double l2_norm(const Field& u) { return sobolev_norm(u, 0.0); }

double zygmund_norm(const Field& u, double s) {
    const DyadicLadder& lad = DyadicLadder::get(u.grid());
    double best = 0.0;
    for (int k = 0; k <= lad.kmax(); ++k) {
        double v = std::pow(2.0, double(k) * s) * lad.block(u, k).linf();
        best = std::max(best, v);
    }
    return best;
}

// --- mollifiers -----------------------------------------------------------------

namespace {
void check_eps(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw parameter_error("mollify: eps must lie in (0,1)");
}
}  // namespace

double keps_symbol(double eps, double xi_abs) { return 1.0 - jhat_profile(eps * xi_abs); }

Field mollify_low(const Field& u, double eps) {
    check_eps(eps);
    const Lattice& lat = Lattice::get(u.grid());
    const auto& c = u.coeffs();
    std::vector<cplx> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) out[i] = jhat_profile(eps * lat.xi_abs[i]) * c[i];
    return Field::from_coeffs(u.grid(), std::move(out));
}

Field mollify_high(const Field& u, double eps) {
    check_eps(eps);
    const Lattice& lat = Lattice::get(u.grid());
    const auto& c = u.coeffs();
    std::vector<cplx> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) out[i] = keps_symbol(eps, lat.xi_abs[i]) * c[i];
    return Field::from_coeffs(u.grid(), std::move(out));
}

std::pair<Field, Field> mollify(const Field& u, double eps) {
    return {mollify_low(u, eps), mollify_high(u, eps)};
}

Field keps2_bessel(const Field& u, double eps, double s) {
    check_eps(eps);
    const Lattice& lat = Lattice::get(u.grid());
    const auto& c = u.coeffs();
    std::vector<cplx> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        double k = keps_symbol(eps, lat.xi_abs[i]);
        out[i] = k * k * std::pow(lat.xi_bracket[i], s) * c[i];
    }
    return Field::from_coeffs(u.grid(), std::move(out));
}

// --- misc ------------------------------------------------------------------------

Field dealias(const Field& u) {
    const GridSpec& g = u.grid();
    const int cut = g.n / 3;
    const auto& c = u.coeffs();
    std::vector<cplx> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        int j0, j1 = 0;
        if (g.d == 1) {
            j0 = g.mode_of(int(i));
        } else {
            j0 = g.mode_of(int(i / std::size_t(g.n)));
            j1 = g.mode_of(int(i % std::size_t(g.n)));
        }
        out[i] = (std::abs(j0) > cut || std::abs(j1) > cut) ? cplx(0.0) : c[i];
    }
    return Field::from_coeffs(g, std::move(out));
}

Field random_real_field(const GridSpec& g, std::uint64_t seed, const std::function<double(double)>& profile) {
    const Lattice& lat = Lattice::get(g);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ph(0.0, 2.0 * pi);
    std::vector<cplx> c(g.size(), 0.0);
    // Assign a random phase to each mode, then symmetrize.
    for (std::size_t i = 0; i < c.size(); ++i) {
        double amp = profile(lat.xi_abs[i]);
        double phase = ph(rng);
        c[i] = amp * cplx(std::cos(phase), std::sin(phase));
    }
    auto conj_index = [&](std::size_t i) -> std::size_t {
        if (g.d == 1) return std::size_t((g.n - int(i)) % g.n);
        int a = int(i / std::size_t(g.n)), b = int(i % std::size_t(g.n));
        return std::size_t((g.n - a) % g.n) * std::size_t(g.n) + std::size_t((g.n - b) % g.n);
    };
    std::vector<cplx> sym(g.size());
    for (std::size_t i = 0; i < c.size(); ++i) sym[i] = 0.5 * (c[i] + std::conj(c[conj_index(i)]));
    sym[0] = sym[0].real();
    return Field::from_coeffs(g, std::move(sym));
}

std::vector<std::pair<int, double>> block_energies(const Field& u) {
    const DyadicLadder& lad = DyadicLadder::get(u.grid());
    std::vector<std::pair<int, double>> rows;
    for (int k = 0; k <= lad.kmax(); ++k) rows.emplace_back(k, l2_norm(lad.block(u, k)));
    return rows;
}

}  // namespace wavelab
