#include "wavelab/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "wavelab/spectral.hpp"

namespace wavelab {

bool SymbolFn::x_independent() const {
    if (!separable()) return false;
    for (const auto& t : terms) {
        const auto& c = t.coef.coeffs();
        for (std::size_t i = 1; i < c.size(); ++i)
            if (std::abs(c[i]) > 1e-14 * (1.0 + std::abs(c[0]))) return false;
    }
    return true;
}

cplx SymbolFn::eval(std::size_t xidx, const std::array<double, 2>& xi) const {
    if (separable()) {
        cplx acc = 0.0;
        for (const auto& t : terms) acc += t.coef.values()[xidx] * t.mult(xi);
        return acc;
    }
    return generic(xidx, xi);
}

SymbolFn SymbolFn::x_only(Field a, double rho) {
    SymbolFn s;
    s.grid_ = a.grid();
    s.order = 0.0;
    s.regularity = rho;
    s.radial_xi = true;
    s.terms.push_back({std::move(a), [](const std::array<double, 2>&) { return cplx(1.0); }});
    return s;
}

SymbolFn SymbolFn::multiplier_only(const GridSpec& g, MultiplierFn w, double order, bool radial) {
    SymbolFn s;
    s.grid_ = g;
    s.order = order;
    s.regularity = 1e9;  // smooth coefficient
    s.radial_xi = radial;
    s.terms.push_back({Field::constant(g, 1.0), std::move(w)});
    return s;
}

SymbolFn SymbolFn::separable_sum(std::vector<SymbolTerm> terms, double order, double rho) {
    if (terms.empty()) throw parameter_error("SymbolFn::separable_sum: no terms");
    SymbolFn s;
    s.grid_ = terms.front().coef.grid();
    for (const auto& t : terms) check_same_grid(t.coef, terms.front().coef);
    s.order = order;
    s.regularity = rho;
    s.terms = std::move(terms);
    return s;
}

SymbolFn SymbolFn::from_eval(const GridSpec& g, std::function<cplx(std::size_t, const std::array<double, 2>&)> eval,
                             double order, double rho) {
    SymbolFn s;
    s.grid_ = g;
    s.order = order;
    s.regularity = rho;
    s.generic = std::move(eval);
    return s;
}

namespace {

// Stencil of the p-th centered difference, offsets in units of the step.
struct Stencil {
    std::vector<int> offsets;
    std::vector<double> weights;  // including the 1/h^p factor
};

Stencil centered_stencil(int p, double h) {
    std::map<int, double> cur{{0, 1.0}};
    for (int it = 0; it < p; ++it) {
        std::map<int, double> next;
        for (auto [o, w] : cur) {
            next[o + 1] += w / (2.0 * h);
            next[o - 1] -= w / (2.0 * h);
        }
        cur = std::move(next);
    }
    Stencil s;
    for (auto [o, w] : cur) {
        s.offsets.push_back(o);
        s.weights.push_back(w);
    }
    return s;
}

// ||f||_{W^{rho,inf}} for a grid column, with spectral x-derivatives and a
// discrete Hoelder quotient over log-spaced periodic offsets.
double holder_norm(const Field& f, double rho, bool& finite_ok) {
    const GridSpec& g = f.grid();
    int k = int(std::floor(rho));
    double sigma = rho - k;
    if (sigma < 1e-12) sigma = 0.0;

    double best = 0.0;
    std::vector<Field> top_derivs;  // all |beta| = k derivatives
    std::vector<Field> level{f};
    for (int j = 0; j <= k; ++j) {
        for (const Field& d : level) best = std::max(best, d.linf());
        if (j == k) {
            top_derivs = level;
            break;
        }
        std::vector<Field> next;
        for (const Field& d : level)
            for (int ax = 0; ax < g.d; ++ax) next.push_back(derivative(d, ax));
        level = std::move(next);
    }
    if (!std::isfinite(best)) finite_ok = false;
    if (sigma == 0.0) return best;

    // Offsets 1,2,3,4,6,8,... per axis.
    std::vector<int> offs;
    for (int o = 1; o <= g.n / 2; o = (o < 4 ? o + 1 : o + o / 2)) offs.push_back(o);
    double quot = 0.0;
    for (const Field& d : top_derivs) {
        const auto& v = d.values();
        for (int o : offs) {
            const double dist = std::pow(o * g.dx(), sigma);
            if (g.d == 1) {
                for (int i = 0; i < g.n; ++i) {
                    double diff = std::abs(v[std::size_t((i + o) % g.n)] - v[std::size_t(i)]);
                    quot = std::max(quot, diff / dist);
                }
            } else {
                const std::size_t n = std::size_t(g.n);
                for (std::size_t i = 0; i < v.size(); ++i) {
                    std::size_t a = i / n, b = i % n;
                    double d0 = std::abs(v[((a + std::size_t(o)) % n) * n + b] - v[i]);
                    double d1 = std::abs(v[a * n + (b + std::size_t(o)) % n] - v[i]);
                    quot = std::max(quot, std::max(d0, d1) / dist);
                }
            }
        }
    }
    if (!std::isfinite(quot)) finite_ok = false;
    return std::max(best, quot);
}

}  // namespace

SeminormReport estimate_seminorm(const SymbolFn& a, double m, double rho, const SeminormOptions& opt) {
    const GridSpec& g = a.grid();
    const Lattice& lat = Lattice::get(g);
    const double h = g.dxi();
    const int alpha_max = std::min(opt.alpha_cap, 2 * (g.d + 2) + int(std::ceil(rho)));

    // Sample set of lattice xi points: everything small plus dyadic shells.
    std::vector<std::size_t> sample;
    if (opt.full_lattice || g.size() <= 4096) {
        for (std::size_t i = 0; i < g.size(); ++i)
            if (lat.xi_abs[i] >= 0.5) sample.push_back(i);
    } else {
        std::set<std::size_t> sel;
        for (std::size_t i = 0; i < g.size(); ++i)
            if (lat.xi_abs[i] >= 0.5 && lat.xi_abs[i] <= 8.5 * h) sel.insert(i);
        for (double r = 8.0; r <= g.xi_max() / h; r *= 1.4142) {
            for (std::size_t i = 0; i < g.size(); ++i)
                if (std::abs(lat.xi_abs[i] - r * h) < 0.51 * h) sel.insert(i);
        }
        sample.assign(sel.begin(), sel.end());
    }

    // Multi-indices up to alpha_max.
    std::vector<std::array<int, 2>> alphas;
    for (int a0 = 0; a0 <= alpha_max; ++a0) {
        if (g.d == 1) {
            alphas.push_back({a0, 0});
        } else {
            for (int a1 = 0; a0 + a1 <= alpha_max; ++a1) alphas.push_back({a0, a1});
        }
    }

    // Column cache: xi lattice offset -> a(.,xi) as a Field.
    auto column = [&](const std::array<double, 2>& xi) {
        std::vector<cplx> col(g.size());
        for (std::size_t x = 0; x < g.size(); ++x) col[x] = a.eval(x, xi);
        return Field::from_values(g, std::move(col));
    };

    SeminormReport rep;
    for (std::size_t i : sample) {
        const auto xi0 = lat.xi[i];
        for (const auto& al : alphas) {
            const int p = al[0] + al[1];
            // Skip points whose stencil would cross the |xi| < 1/2 ball or
            // the xi = 0 kink of homogeneous symbols.
            if (lat.xi_abs[i] - p * h < 0.5 && p > 0) continue;
            Stencil s0 = centered_stencil(al[0], h);
            Stencil s1 = centered_stencil(al[1], h);
            std::vector<cplx> acc(g.size(), 0.0);
            for (std::size_t u = 0; u < s0.offsets.size(); ++u) {
                for (std::size_t v = 0; v < s1.offsets.size(); ++v) {
                    std::array<double, 2> xi{xi0[0] + s0.offsets[u] * h, xi0[1] + s1.offsets[v] * h};
                    double w = s0.weights[u] * s1.weights[v];
                    Field col = column(xi);
                    const auto& cv = col.values();
                    for (std::size_t x = 0; x < acc.size(); ++x) acc[x] += w * cv[x];
                }
            }
            bool finite_ok = true;
            double wnorm = holder_norm(Field::from_values(g, std::move(acc)), rho, finite_ok);
            if (!finite_ok) {
                rep.regularity_ok = false;
                rep.note = "non-finite Hoelder norm at |alpha|=" + std::to_string(p);
                continue;
            }
            double weight = std::pow(lat.xi_bracket[i], double(p) - m);
            rep.value = std::max(rep.value, weight * wnorm);
        }
    }
    if (!std::isfinite(rep.value)) {
        rep.regularity_ok = false;
        rep.note = "non-finite seminorm value";
    }
    return rep;
}

}  // namespace wavelab
