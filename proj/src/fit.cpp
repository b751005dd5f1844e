#include "wavelab/fit.hpp"

#include <algorithm>
#include <cmath>

namespace wavelab {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    LineFit f;
    const std::size_t n = std::min(x.size(), y.size());
    if (n < 2) return f;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-300) return f;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    double ymin = y[0], ymax = y[0];
    for (std::size_t i = 0; i < n; ++i) {
        f.max_residual = std::max(f.max_residual, std::abs(y[i] - (f.slope * x[i] + f.intercept)));
        ymin = std::min(ymin, y[i]);
        ymax = std::max(ymax, y[i]);
    }
    f.range = ymax - ymin;
    f.x_min = *std::min_element(x.begin(), x.begin() + long(n));
    f.x_max = *std::max_element(x.begin(), x.begin() + long(n));
    f.points = int(n);
    f.ok = true;
    return f;
}

LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
        if (x[i] > 0.0 && y[i] > 0.0 && std::isfinite(y[i])) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    }
    return fit_line(lx, ly);
}

}  // namespace wavelab
