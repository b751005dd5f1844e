#include "wavelab/chebyshev.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "wavelab/errors.hpp"

namespace wavelab {

namespace {

ChebGrid build(int nz) {
    if (nz < 4) throw parameter_error("ChebGrid: need at least 4 nodes");
    ChebGrid g;
    g.nz = nz;
    const int N = nz - 1;
    const double pi = std::numbers::pi;

    // Standard Gauss-Lobatto nodes t_j = cos(pi j / N) on [-1,1], mapped to
    // z = (t - 1)/2 in [-1, 0]; d/dz = 2 d/dt.
    std::vector<double> t(nz);
    for (int j = 0; j < nz; ++j) t[j] = std::cos(pi * j / N);
    g.z.resize(nz);
    for (int j = 0; j < nz; ++j) g.z[j] = 0.5 * (t[j] - 1.0);
    g.z[0] = 0.0;
    g.z[nz - 1] = -1.0;

    Eigen::MatrixXd Dt(nz, nz);
    auto c = [&](int j) { return (j == 0 || j == N) ? 2.0 : 1.0; };
    for (int i = 0; i < nz; ++i) {
        for (int j = 0; j < nz; ++j) {
            if (i != j) {
                double sgn = ((i + j) % 2 == 0) ? 1.0 : -1.0;
                Dt(i, j) = c(i) / c(j) * sgn / (t[i] - t[j]);
            }
        }
    }
    // Diagonal via negative row sums keeps the matrix exact on constants.
    for (int i = 0; i < nz; ++i) {
        double s = 0.0;
        for (int j = 0; j < nz; ++j)
            if (i != j) s += Dt(i, j);
        Dt(i, i) = -s;
    }
    g.D = 2.0 * Dt;
    g.D2 = g.D * g.D;
    return g;
}

}  // namespace

const ChebGrid& ChebGrid::get(int nz) {
    static std::mutex mu;
    static std::map<int, ChebGrid> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(nz);
    if (it != cache.end()) return it->second;
    return cache.emplace(nz, build(nz)).first->second;
}

}  // namespace wavelab
