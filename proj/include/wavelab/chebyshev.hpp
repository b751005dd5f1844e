#ifndef WAVELAB_CHEBYSHEV_HPP
#define WAVELAB_CHEBYSHEV_HPP

#include <Eigen/Dense>
#include <vector>

namespace wavelab {

/// Chebyshev-Gauss-Lobatto collocation on [-1, 0] with nz nodes; node 0 is
/// the surface z = 0 and node nz-1 the bottom z = -1. D and D2 are the first
/// and second spectral differentiation matrices in the z variable.
struct ChebGrid {
    int nz = 0;
    std::vector<double> z;
    Eigen::MatrixXd D;
    Eigen::MatrixXd D2;

    static const ChebGrid& get(int nz);
};

}  // namespace wavelab

#endif
