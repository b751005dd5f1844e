#ifndef WAVELAB_CONFIG_HPP
#define WAVELAB_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wavelab/grid.hpp"

namespace wavelab {

/// Experiment configuration, parsed from an INI-style file of
/// "[section]" headers and "key = value" lines. Unknown keys are kept and
/// echoed; every threshold a runner checks must be declared here.
struct ExperimentConfig {
    std::string kind;  // flowmap | mollifier | dn | simulate | dispersion |
                       // conservation | reduction | recovery | calculus
    std::string id;

    GridSpec grid{1, 256, 2.0 * pi};
    double g = 1.0;
    double h = 1.0;
    double delta = 0.0;  // 0: heuristic default

    double s = 2.5;
    double rho0 = 0.0;  // 0: 0.4 min(1, s-1-d/2)
    std::vector<double> eps;

    // data family
    std::string family = "amplitude";  // amplitude | frequency | file
    double base_eta_amp = 0.02;
    int base_mode = 1;
    int pert_mode = 16;
    double pert_size = 1.0;
    int n_min = 1;
    int n_max = 6;
    int band_limit = 4;
    double amp = 0.02;
    std::string eta_file, psi_file;

    // integration
    double periods = 2.0;
    double T = 0.0;   // 0: derive from periods
    double cfl = 0.5;
    double dt = 0.0;  // 0: derive from cfl
    int sample_stride = 8;
    int n_z = 48;
    bool dealias_flag = true;
    bool exp_filter = false;  // optional high-frequency filter for long runs

    std::uint64_t seed = 1;
    int threads = 1;

    std::map<std::string, double> thresholds;
    std::string raw_text;

    double rho0_value() const;
    double T_value() const;   // resolved horizon
    double dt_value() const;  // resolved step
    std::uint64_t config_hash() const;

    /// s > 1 + d/2 always; scenarios exercising the reduction need
    /// s > 3/2 + d/2; the eps list must be strictly decreasing in (0,1).
    void validate() const;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

}  // namespace wavelab

#endif
