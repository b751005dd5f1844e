#include "wavelab/paradiff.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <memory>

#include "wavelab/fft_internal.hpp"

namespace wavelab {

namespace {

// Delta_k psi(D) u masks combined.
Field block_with_psi(const DyadicLadder& lad, const Field& u, int k) {
    const auto& phi = lad.phi_mask(k);
    const auto& psi = lad.psi_mask();
    const auto& c = u.coeffs();
    std::vector<cplx> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) out[i] = phi[i] * psi[i] * c[i];
    return Field::from_coeffs(u.grid(), std::move(out));
}

bool block_empty(const Field& u, const std::vector<double>& phi, const std::vector<double>& psi) {
    const auto& c = u.coeffs();
    for (std::size_t i = 0; i < c.size(); ++i)
        if (phi[i] != 0.0 && psi[i] != 0.0 && std::abs(c[i]) != 0.0) return false;
    return true;
}

}  // namespace

Field paraproduct(const Field& a, const Field& u) {
    check_same_grid(a, u);
    const DyadicLadder& lad = DyadicLadder::get(u.grid());
    std::vector<cplx> acc(u.size(), 0.0);
    for (int k = 0; k <= lad.kmax(); ++k) {
        if (block_empty(u, lad.phi_mask(k), lad.psi_mask())) continue;
        Field ak = lad.running(a, k - 3);
        Field uk = block_with_psi(lad, u, k);
        const auto& av = ak.values();
        const auto& uv = uk.values();
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += av[i] * uv[i];
    }
    return Field::from_values(u.grid(), std::move(acc));
}

Field paradiff_apply(const SymbolFn& a, const Field& u) {
    if (!(a.grid() == u.grid())) throw grid_mismatch_error("paradiff_apply: symbol and field grids differ");
    const GridSpec& g = u.grid();
    if (a.separable()) {
        Field acc = Field::zero(g);
        for (const auto& term : a.terms) {
            Field wu = fourier_multiplier(u, term.mult);
            acc = acc + paraproduct(term.coef, wu);
        }
        return acc;
    }

    // Exact per-frequency quantization: for every lattice eta with
    // psi(eta) uhat(eta) != 0, smooth the symbol column a(., eta) in x with
    // the chi(., eta) mask and accumulate its product with the eta mode.
    const DyadicLadder& lad = DyadicLadder::get(g);
    const Lattice& lat = Lattice::get(g);
    const auto& uc = u.coeffs();
    const auto& psi = lad.psi_mask();
    std::vector<cplx> acc(g.size(), 0.0);
    std::vector<cplx> col(g.size()), colhat(g.size());
    for (std::size_t e = 0; e < g.size(); ++e) {
        const cplx amp = psi[e] * uc[e];
        if (std::abs(amp) == 0.0) continue;
        // Active blocks of eta (at most two adjacent ones).
        double chi_weight_any = 0.0;
        for (int k = 0; k <= lad.kmax(); ++k) chi_weight_any += std::abs(lad.phi_mask(k)[e]);
        if (chi_weight_any == 0.0) continue;

        for (std::size_t x = 0; x < g.size(); ++x) col[x] = a.eval(x, lat.xi[e]);
        fft::forward(g, col.data(), colhat.data());
        // chi(theta, eta) = sum_k kappa_{k-3}(theta) phi_k(eta).
        for (std::size_t t = 0; t < g.size(); ++t) {
            double mask = 0.0;
            for (int k = 0; k <= lad.kmax(); ++k) {
                double pk = lad.phi_mask(k)[e];
                if (pk != 0.0) mask += pk * lad.kappa_mask(k - 3)[t];
            }
            colhat[t] *= mask;
        }
        fft::inverse(g, colhat.data(), col.data());
        // Multiply by the eta mode and accumulate.
        const auto xi = lat.xi[e];
        for (std::size_t x = 0; x < g.size(); ++x) {
            auto p = g.point(x);
            double phase = xi[0] * p[0] + xi[1] * p[1];
            acc[x] += col[x] * amp * cplx(std::cos(phase), std::sin(phase));
        }
    }
    return Field::from_values(g, std::move(acc));
}

Field paradiff_apply_adjoint(const SymbolFn& a, const Field& u) {
    if (!(a.grid() == u.grid())) throw grid_mismatch_error("paradiff_apply_adjoint: grids differ");
    const GridSpec& g = u.grid();
    const DyadicLadder& lad = DyadicLadder::get(g);
    if (a.separable()) {
        Field acc = Field::zero(g);
        for (const auto& term : a.terms) {
            // (T_{c w})^* u = conj(w)(D) sum_k psi Delta_k (S_{k-3}(conj c) u).
            Field inner = Field::zero(g);
            for (int k = 0; k <= lad.kmax(); ++k) {
                Field ck = lad.running(term.coef.conj(), k - 3);
                inner = inner + block_with_psi(lad, ck * u, k);
            }
            auto wbar = [mult = term.mult](const std::array<double, 2>& xi) { return std::conj(mult(xi)); };
            acc = acc + fourier_multiplier(inner, wbar);
        }
        return acc;
    }
    // Generic: adjoint of the per-frequency matrix, ((T_a)^* u)^(xi) =
    // psi(xi) sum_k phi_k(xi) ( S_{k-3}(conj a(., xi)) u )^(xi).
    const Lattice& lat = Lattice::get(g);
    std::vector<cplx> out(g.size(), 0.0);
    std::vector<cplx> col(g.size()), colhat(g.size()), prod(g.size());
    const auto& psi = lad.psi_mask();
    for (std::size_t e = 0; e < g.size(); ++e) {
        if (psi[e] == 0.0) continue;
        double chi_any = 0.0;
        for (int k = 0; k <= lad.kmax(); ++k) chi_any += std::abs(lad.phi_mask(k)[e]);
        if (chi_any == 0.0) continue;
        for (std::size_t x = 0; x < g.size(); ++x) col[x] = std::conj(a.eval(x, lat.xi[e]));
        fft::forward(g, col.data(), colhat.data());
        cplx acc = 0.0;
        for (int k = 0; k <= lad.kmax(); ++k) {
            double pk = lad.phi_mask(k)[e];
            if (pk == 0.0) continue;
            std::vector<cplx> smooth(g.size());
            const auto& km = lad.kappa_mask(k - 3);
            for (std::size_t t = 0; t < g.size(); ++t) smooth[t] = km[t] * colhat[t];
            fft::inverse(g, smooth.data(), prod.data());
            const auto& uv = u.values();
            for (std::size_t x = 0; x < g.size(); ++x) prod[x] *= uv[x];
            fft::forward(g, prod.data(), smooth.data());
            acc += pk * smooth[e];
        }
        out[e] = psi[e] * acc;
    }
    return Field::from_coeffs(g, std::move(out));
}

Field paradiff_direct(const SymbolFn& a, const Field& u) {
    if (!(a.grid() == u.grid())) throw grid_mismatch_error("paradiff_direct: grids differ");
    const GridSpec& g = u.grid();
    const DyadicLadder& lad = DyadicLadder::get(g);
    const Lattice& lat = Lattice::get(g);
    const auto& uc = u.coeffs();
    const auto& psi = lad.psi_mask();

    auto chi = [&](double theta_abs, std::size_t eta_idx) {
        double s = 0.0;
        for (int k = 0; k <= lad.kmax(); ++k) {
            double pk = lad.phi_mask(k)[eta_idx];
            if (pk == 0.0) continue;
            s += kappa_profile(std::pow(2.0, -double(k - 3)) * theta_abs) * pk;
        }
        return s;
    };

    std::vector<cplx> acc(g.size(), 0.0);
    std::vector<cplx> col(g.size()), colhat(g.size());
    for (std::size_t e = 0; e < g.size(); ++e) {
        const cplx amp = psi[e] * uc[e];
        if (std::abs(amp) == 0.0) continue;
        for (std::size_t x = 0; x < g.size(); ++x) col[x] = a.eval(x, lat.xi[e]);
        fft::forward(g, col.data(), colhat.data());
        // Literal double sum over theta: e^{i(theta+eta)x} sampled on the grid.
        for (std::size_t t = 0; t < g.size(); ++t) {
            cplx w = chi(lat.xi_abs[t], e) * colhat[t] * amp;
            if (std::abs(w) == 0.0) continue;
            const double k0 = lat.xi[t][0] + lat.xi[e][0];
            const double k1 = lat.xi[t][1] + lat.xi[e][1];
            for (std::size_t x = 0; x < g.size(); ++x) {
                auto p = g.point(x);
                double phase = k0 * p[0] + k1 * p[1];
                acc[x] += w * cplx(std::cos(phase), std::sin(phase));
            }
        }
    }
    return Field::from_values(g, std::move(acc));
}

Field bony_remainder(const Field& a, const Field& u) {
    check_same_grid(a, u);
    return a * u - paraproduct(a, u) - paraproduct(u, a);
}

SymbolFn compose_symbols(const SymbolFn& a, const SymbolFn& b, double rho) {
    if (rho > 2.0) throw parameter_error("compose_symbols: only |alpha| <= 1 supported (rho <= 2)");
    if (!(a.grid() == b.grid())) throw grid_mismatch_error("compose_symbols: grids differ");
    const GridSpec& g = a.grid();
    const double h = g.dxi();
    const double order = a.order + b.order;
    const double reg = std::min(a.regularity, rho > 1.0 ? std::max(b.regularity - 1.0, 0.0) : b.regularity);

    if (a.separable() && b.separable()) {
        std::vector<SymbolTerm> terms;
        for (const auto& ta : a.terms) {
            for (const auto& tb : b.terms) {
                terms.push_back({ta.coef * tb.coef, [wa = ta.mult, wb = tb.mult](const std::array<double, 2>& xi) {
                                     return wa(xi) * wb(xi);
                                 }});
                if (rho > 1.0) {
                    for (int ax = 0; ax < g.d; ++ax) {
                        Field dxb = derivative(tb.coef, ax);
                        auto dwa_wb = [wa = ta.mult, wb = tb.mult, h, ax](std::array<double, 2> xi) {
                            auto hi = xi, lo = xi;
                            hi[ax] += h;
                            lo[ax] -= h;
                            return (wa(hi) - wa(lo)) / (2.0 * h) * wb(xi);
                        };
                        terms.push_back({cplx(0.0, -1.0) * (ta.coef * dxb), dwa_wb});
                    }
                }
            }
        }
        return SymbolFn::separable_sum(std::move(terms), order, reg);
    }

    // Generic fallback backed by lazily cached symbol columns.
    struct Cache {
        std::map<std::pair<long long, long long>, Field> cols_a, cols_b, dxb;
        std::mutex mu;
    };
    auto cache = std::make_shared<Cache>();
    auto key_of = [h](const std::array<double, 2>& xi) {
        return std::make_pair((long long)std::llround(xi[0] / h * 4.0), (long long)std::llround(xi[1] / h * 4.0));
    };
    auto column = [g](const SymbolFn& s, const std::array<double, 2>& xi) {
        std::vector<cplx> col(g.size());
        for (std::size_t x = 0; x < g.size(); ++x) col[x] = s.eval(x, xi);
        return Field::from_values(g, std::move(col));
    };
    auto eval = [=](std::size_t xidx, const std::array<double, 2>& xi) -> cplx {
        cplx v = a.eval(xidx, xi) * b.eval(xidx, xi);
        if (rho > 1.0) {
            std::lock_guard<std::mutex> lock(cache->mu);
            for (int ax = 0; ax < g.d; ++ax) {
                auto hi = xi, lo = xi;
                hi[ax] += h;
                lo[ax] -= h;
                cplx da = (a.eval(xidx, hi) - a.eval(xidx, lo)) / (2.0 * h);
                auto key = key_of(xi);
                auto keyax = std::make_pair(key.first * 2 + ax, key.second);
                auto it = cache->dxb.find(keyax);
                if (it == cache->dxb.end()) {
                    Field col = column(b, xi);
                    it = cache->dxb.emplace(keyax, derivative(col, ax)).first;
                }
                v += cplx(0.0, -1.0) * da * it->second.values()[xidx];
            }
        }
        return v;
    };
    return SymbolFn::from_eval(g, eval, order, reg);
}

Field commutator_mollifier(const SymbolFn& a, const Field& u, double eps, bool square, double s) {
    if (!(eps > 0.0 && eps < 1.0)) throw parameter_error("commutator_mollifier: eps must lie in (0,1)");
    const Lattice& lat = Lattice::get(u.grid());
    auto mult = [&](const Field& v) {
        const auto& c = v.coeffs();
        std::vector<cplx> out(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) {
            double k = keps_symbol(eps, lat.xi_abs[i]);
            out[i] = (square ? k * k * std::pow(lat.xi_bracket[i], s) : k) * c[i];
        }
        return Field::from_coeffs(v.grid(), std::move(out));
    };
    return mult(paradiff_apply(a, u)) - paradiff_apply(a, mult(u));
}

Field para_transport(const VecField& V, const Field& u) {
    Field acc = Field::zero(u.grid());
    for (std::size_t ax = 0; ax < V.size(); ++ax) acc = acc + paraproduct(V[ax], derivative(u, int(ax)));
    return acc;
}

void dump_block_energies(const Field& u, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("dump_block_energies: cannot open " + path);
    out << "k,energy\n";
    for (auto [k, e] : block_energies(u)) out << k << "," << e << "\n";
}

}  // namespace wavelab
