#ifndef WAVELAB_EXPERIMENTS_HPP
#define WAVELAB_EXPERIMENTS_HPP

#include <filesystem>

#include <json.hpp>

#include "wavelab/config.hpp"
#include "wavelab/reduction.hpp"

namespace wavelab {

/// A completed experiment: the JSON summary (fitted constants with
/// regression diagnostics, check verdicts, provenance), CSV tables, and SVG
/// plot sources. pass reflects every declared threshold.
struct ExperimentResult {
    nlohmann::ordered_json summary;
    std::vector<std::pair<std::string, std::string>> tables;  // name -> csv text
    std::vector<std::pair<std::string, std::string>> plots;   // name -> svg text
    bool pass = true;
    int exit_code = 0;
};

/// Theorem-style flow-map continuity study: integrates the data family on a
/// common horizon, measures D_n = sup_t ||U_n - U_0||_{Z^s} and the Z^{s-1}
/// contraction, and checks the J/K^2 decomposition bound per epsilon.
ExperimentResult run_flowmap_continuity(const ExperimentConfig& cfg,
                                        const std::filesystem::path& outdir = {});

/// Mollifier and commutator rate study (K_eps rates for t in {1/2,1} and the
/// four commutator variants).
ExperimentResult run_mollifier_study(const ExperimentConfig& cfg);

/// Dirichlet-Neumann study: flat exactness marker, amplitude sweep,
/// remainder-smoothing and good-unknown scaling sweeps, high-frequency decay
/// of the remainder on band-limited data.
ExperimentResult run_dn_study(const ExperimentConfig& cfg);

/// Plain trajectory run with declared post-hoc checks (scenario kinds
/// simulate, dispersion, conservation).
ExperimentResult run_simulate(const ExperimentConfig& cfg, const std::filesystem::path& outdir = {});

/// Symmetrized residual/energy study (F1, F2 decay and Gronwall envelope).
ExperimentResult run_reduction_study(const ExperimentConfig& cfg);

/// Recovery-constant stability study over random states and the eps sweep.
ExperimentResult run_recovery_study(const ExperimentConfig& cfg);

/// Paradifferential calculus sweeps: partition of unity, quantizer against
/// the direct double sum, composition/adjoint derivative gains.
ExperimentResult run_calculus_study(const ExperimentConfig& cfg);

/// Dispatch by cfg.kind.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& outdir = {});

/// Writes summary.json, tables/*.csv and plots/*.svg under outdir.
void emit_report(const ExperimentResult& result, const std::filesystem::path& outdir);

/// Re-renders tables and plots from an existing summary.json; returns the
/// recorded exit code.
int report_from_dir(const std::filesystem::path& outdir);

}  // namespace wavelab

#endif
