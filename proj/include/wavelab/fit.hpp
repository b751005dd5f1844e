#ifndef WAVELAB_FIT_HPP
#define WAVELAB_FIT_HPP

#include <vector>

namespace wavelab {

/// Least-squares line fit y = slope x + intercept with regression
/// diagnostics. Every reported fit carries its residual and sweep range.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;  // max |y_i - fit(x_i)|
    double range = 0.0;         // max y - min y
    double x_min = 0.0, x_max = 0.0;
    int points = 0;
    bool ok = false;  // false when fewer than 2 usable points
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Fit of log(y) against log(x); zero/negative y are dropped (reported via
/// `points`).
LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace wavelab

#endif
