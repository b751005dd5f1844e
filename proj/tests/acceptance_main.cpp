// Acceptance suite: every criterion is expressed as an experiment config,
// runs through the same machinery as the CLI, and prints one pass/fail line.
// Exit code 0 iff all criteria pass.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "wavelab/experiments.hpp"

using namespace wavelab;

namespace {

struct Criterion {
    const char* tag;
    const char* title;
    const char* config;
};

const std::vector<Criterion> kCriteria = {
    {"C01", "flat-surface DN exactness (k tanh kh, k <= n/3)", R"(
[scenario]
kind = dn
id = acceptance_flat
[grid]
n = 256
[physics]
h = 1.0
[analysis]
s = 2.5
[integration]
n_z = 48
[thresholds]
flat_exactness_max = 1e-6
)"},
    {"C02", "DN structure: symmetry, positivity, constants", R"(
[scenario]
kind = dn
id = acceptance_structure
[grid]
n = 256
[physics]
h = 1.0
[analysis]
s = 2.5
[integration]
n_z = 48
[sweep]
seed = 11
[thresholds]
symmetry_max = 1e-8
positivity_min = -1e-10
gconst_max = 1e-10
)"},
    {"C03", "linear dispersion omega = sqrt(g k tanh kh), k = 1..8", R"(
[scenario]
kind = dispersion
id = acceptance_dispersion
[grid]
n = 256
[physics]
g = 1.0
h = 1.0
[analysis]
s = 2.5
[data]
amp = 1e-4
n_min = 1
n_max = 8
[integration]
cfl = 0.5
sample_stride = 4
n_z = 32
[thresholds]
dispersion_rel_err_max = 1e-3
)"},
    {"C04", "conservation: Hamiltonian and mass over one period", R"(
[scenario]
kind = conservation
id = acceptance_conservation
[grid]
n = 256
[analysis]
s = 2.5
[data]
amp = 0.02
base_mode = 1
[integration]
periods = 1.0
cfl = 0.5
n_z = 32
[thresholds]
hamiltonian_drift_max = 1e-6
mass_drift_max = 1e-10
)"},
    {"C05", "paradifferential suite: partition, quantizer, calculus gains", R"(
[scenario]
kind = calculus
id = acceptance_calculus
[grid]
n = 256
[analysis]
s = 2.5
[sweep]
seed = 5
[thresholds]
partition_max = 1e-10
quantizer_agreement_max = 1e-10
composition_growth_max = 0.15
adjoint_growth_max = 0.15
)"},
    {"C06", "mollifier and commutator rates", R"(
[scenario]
kind = mollifier
id = acceptance_mollifier
[grid]
n = 4096
[analysis]
s = 2.5
eps = 0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625
[sweep]
seed = 6
[thresholds]
keps_rate_t_half_slope_err_max = 0.1
keps_rate_t_one_slope_err_max = 0.1
keps_rate_t_half_residual_max = 0.1
keps_rate_t_one_residual_max = 0.1
comm_plain_xonly_slope_min = 0.001
comm_plain_order_half_slope_min = 0.001
comm_square_smooth_slope_min = 0.001
comm_square_rough_slope_min = 0.3
comm_plain_xonly_residual_max = 0.1
comm_plain_order_half_residual_max = 0.1
comm_square_smooth_residual_max = 0.1
comm_square_rough_residual_max = 0.1
)"},
    {"C07", "remainder smoothing and good-unknown gain", R"(
[scenario]
kind = dn
id = acceptance_smoothing
[grid]
n = 256
[physics]
h = 1.0
[analysis]
s = 2.5
[integration]
n_z = 48
[thresholds]
remainder_growth_max = 0.1
tlambda_growth_min = 0.4
tlambda_growth_max = 0.6
good_unknown_growth_max = 0.1
dzv_growth_min = 0.4
)"},
    {"C08", "symmetrized energy: residual decay and Gronwall envelope", R"(
[scenario]
kind = reduction
id = acceptance_reduction
[grid]
n = 256
[analysis]
s = 2.5
eps = 0.25, 0.125, 0.0625
[data]
amp = 0.05
band_limit = 3
base_mode = 2
[integration]
periods = 1.0
cfl = 0.5
sample_stride = 4
n_z = 32
[thresholds]
residual_decay_slope_min = 0.01
envelopes_hold = 1
)"},
    {"C09", "unknown recovery: fitted constants stable", R"(
[scenario]
kind = recovery
id = acceptance_recovery
[grid]
n = 256
[analysis]
s = 2.5
eps = 0.125, 0.0625, 0.03125, 0.015625
[data]
amp = 0.02
n_max = 20
[integration]
n_z = 32
[sweep]
seed = 9
[thresholds]
control_spread_max = 2.0
recovery_spread_max = 2.0
)"},
    {"C10", "flow-map continuity in the strong topology", R"(
[scenario]
kind = flowmap
id = acceptance_flowmap
[grid]
n = 256
[physics]
g = 1.0
h = 1.0
[analysis]
s = 2.5
eps = 0.125, 0.0625, 0.03125
[data]
family = amplitude
base_eta_amp = 0.02
base_mode = 1
pert_mode = 16
pert_size = 0.05
n_min = 1
n_max = 6
[integration]
periods = 2.0
cfl = 0.5
sample_stride = 8
n_z = 32
[thresholds]
dn_ratio_max = 0.05
monotone_decay = 1
negative_control_floor = 0.025
lipschitz_spread_max = 2.0
decomposition_holds = 1
k2_uniform_decreasing = 1
)"},
};

std::string brief_checks(const nlohmann::ordered_json& summary) {
    std::string out;
    if (!summary.contains("checks")) return out;
    for (const auto& row : summary["checks"]) {
        if (!row.value("declared", false)) continue;
        char buf[160];
        double measured = row["measured"].is_boolean() ? double(row["measured"].get<bool>())
                                                       : row["measured"].get<double>();
        std::snprintf(buf, sizeof(buf), "%s%s=%.3g", out.empty() ? "" : " ", row["name"].get<std::string>().c_str(),
                      measured);
        out += buf;
        if (!row.value("pass", true)) out += "(FAIL)";
    }
    return out;
}

}  // namespace

int main() {
    bool all_pass = true;
    double total = 0.0;
    for (const auto& c : kCriteria) {
        auto start = std::chrono::steady_clock::now();
        bool pass = false;
        std::string detail;
        try {
            ExperimentConfig cfg = parse_config_text(c.config);
            ExperimentResult res = run_experiment(cfg);
            pass = res.pass && res.exit_code == 0;
            detail = brief_checks(res.summary);
        } catch (const error& e) {
            detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        total += secs;
        std::printf("[%s] %s %-52s %s [%.1fs]\n", pass ? "PASS" : "FAIL", c.tag, c.title, detail.c_str(), secs);
        std::fflush(stdout);
        all_pass = all_pass && pass;
    }
    std::printf("%s acceptance suite (%.1fs total)\n", all_pass ? "[PASS]" : "[FAIL]", total);
    return all_pass ? 0 : 1;
}