#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "wavelab/experiments.hpp"

using namespace wavelab;

namespace {

const char* kCalculusCfg = R"(
[scenario]
kind = calculus
id = calculus_tiny
[grid]
d = 1
n = 256
period = 6.283185307179586
[analysis]
s = 2.0
[sweep]
seed = 7
[thresholds]
partition_max = 1e-10
quantizer_agreement_max = 1e-10
composition_growth_max = 0.15
adjoint_growth_max = 0.15
)";

const char* kFlowmapTinyCfg = R"(
[scenario]
kind = flowmap
id = flowmap_tiny
[grid]
d = 1
n = 64
[physics]
g = 1.0
h = 1.0
[analysis]
s = 2.5
eps = 0.25, 0.125
[data]
family = amplitude
base_eta_amp = 0.01
base_mode = 1
pert_mode = 8
pert_size = 0.05
n_min = 1
n_max = 2
[integration]
periods = 0.08
cfl = 0.5
sample_stride = 2
n_z = 16
[thresholds]
decomposition_holds = 1
)";

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("config: parsing and defaults") {
    ExperimentConfig cfg = parse_config_text(kCalculusCfg);
    CHECK(cfg.kind == "calculus");
    CHECK(cfg.grid.n == 256);
    CHECK(cfg.s == doctest::Approx(2.0));
    CHECK(cfg.seed == 7);
    CHECK(cfg.thresholds.at("partition_max") == doctest::Approx(1e-10));
    CHECK(cfg.rho0_value() == doctest::Approx(0.4 * 0.5));
    CHECK(cfg.dt_value() > 0.0);
}

TEST_CASE("config: validation errors") {
    CHECK_THROWS_AS(parse_config_text("[scenario]\nkind = flowmap\n[analysis]\ns = 1.8\n"), config_error);
    CHECK_THROWS_AS(parse_config_text("[scenario]\nkind = mollifier\n[analysis]\neps = 0.1, 0.2\n"), config_error);
    CHECK_THROWS_AS(parse_config_text("[scenario]\nkind = mollifier\n[analysis]\neps = 0.1, 1.5\n"), config_error);
    CHECK_THROWS_AS(parse_config_text("[scenario]\nkind = simulate\n[grid]\nn = 24\n"), config_error);
    CHECK_THROWS_AS(parse_config_text("[scenario]\nkind = simulate\nbogus = 1\n"), config_error);
    CHECK_THROWS_AS(parse_config_text("[scenario]\nkind = simulate\n[physics]\ng = oops\n"), config_error);
    CHECK_THROWS_AS(parse_config_text(""), config_error);
}

TEST_CASE("determinism: identical config and seed give byte-identical summaries") {
    ExperimentConfig cfg = parse_config_text(kCalculusCfg);
    ExperimentResult a = run_calculus_study(cfg);
    ExperimentResult b = run_calculus_study(cfg);
    CHECK(a.summary.dump() == b.summary.dump());
    CHECK(a.pass);
    CHECK(a.exit_code == 0);
}

TEST_CASE("thresholds: only declared checks run; failing one flips the exit code") {
    ExperimentConfig cfg = parse_config_text(kCalculusCfg);
    cfg.thresholds["partition_max"] = 0.0;  // impossible
    ExperimentResult r = run_calculus_study(cfg);
    CHECK_FALSE(r.pass);
    CHECK(r.exit_code == 1);

    cfg.thresholds.clear();
    ExperimentResult r2 = run_calculus_study(cfg);
    CHECK(r2.exit_code == 0);
    CHECK(r2.summary["checks_declared"] == 0);
    CHECK(r2.summary["note"] == "no checks declared");
}

TEST_CASE("emit_report: files, empty-table note, slope annotation consistency") {
    namespace fs = std::filesystem;
    auto dir = fs::temp_directory_path() / "wavelab_report_test";
    fs::remove_all(dir);

    ExperimentResult empty;
    empty.summary["note"] = "no checks declared";
    emit_report(empty, dir);
    CHECK(fs::exists(dir / "summary.json"));
    CHECK(slurp(dir / "tables" / "empty.csv").find("no checks declared") != std::string::npos);

    // A real result: the SVG slope annotation matches the JSON fit to 3
    // decimals.
    ExperimentConfig cfg = parse_config_text(R"(
[scenario]
kind = mollifier
[grid]
n = 1024
[analysis]
s = 2.0
eps = 0.125, 0.0625, 0.03125, 0.015625
[sweep]
seed = 3
)");
    ExperimentResult r = run_mollifier_study(cfg);
    fs::remove_all(dir);
    emit_report(r, dir);
    double slope = r.summary["fits"]["keps_rate_t_half"]["slope"].get<double>();
    char expect[32];
    std::snprintf(expect, sizeof(expect), "slope %.3f", slope);
    std::string svg = slurp(dir / "plots" / "keps_rate_t_half.svg");
    CHECK(svg.find(expect) != std::string::npos);
    CHECK(fs::exists(dir / "tables" / "keps_rate_t_half.csv"));

    int code = report_from_dir(dir);
    CHECK(code == 0);
    CHECK(fs::exists(dir / "tables" / "verdicts.csv"));
    fs::remove_all(dir);
}

TEST_CASE("flowmap: identical data family collapses to zero distance") {
    ExperimentConfig cfg = parse_config_text(kFlowmapTinyCfg);
    cfg.pert_size = 0.0;  // every member equals the base
    ExperimentResult r = run_flowmap_continuity(cfg);
    for (const auto& v : r.summary["amp_family"]["D_n"]) CHECK(v.get<double>() <= 1e-13);
    CHECK(r.summary["decomposition_ok"].get<bool>());
}

TEST_CASE("flowmap: exact decomposition inequality and restartability") {
    namespace fs = std::filesystem;
    auto dir = fs::temp_directory_path() / "wavelab_flowmap_test";
    fs::remove_all(dir);
    ExperimentConfig cfg = parse_config_text(kFlowmapTinyCfg);
    ExperimentResult r1 = run_flowmap_continuity(cfg, dir);
    CHECK(r1.summary["decomposition_ok"].get<bool>());
    CHECK(fs::exists(dir / "trajectories" / "base" / "manifest.json"));

    // Linear-response decay: D_n roughly halves per step.
    double d1 = r1.summary["amp_family"]["D_n"][0].get<double>();
    double d2 = r1.summary["amp_family"]["D_n"][1].get<double>();
    CHECK(d2 / d1 >= 0.35);
    CHECK(d2 / d1 <= 0.65);

    auto mtime = fs::last_write_time(dir / "trajectories" / "base" / "fields" / "eta_0000.bin");
    ExperimentResult r2 = run_flowmap_continuity(cfg, dir);
    CHECK(fs::last_write_time(dir / "trajectories" / "base" / "fields" / "eta_0000.bin") == mtime);
    // The reloaded run reproduces the measured distances.
    for (std::size_t i = 0; i < r1.summary["amp_family"]["D_n"].size(); ++i) {
        double a = r1.summary["amp_family"]["D_n"][i].get<double>();
        double b = r2.summary["amp_family"]["D_n"][i].get<double>();
        CHECK(a == doctest::Approx(b).epsilon(1e-9));
    }
    fs::remove_all(dir);
}

TEST_CASE("flowmap: worker threads do not change the summary") {
    ExperimentConfig cfg = parse_config_text(kFlowmapTinyCfg);
    ExperimentResult serial = run_flowmap_continuity(cfg);
    cfg.threads = 2;
    ExperimentResult threaded = run_flowmap_continuity(cfg);
    CHECK(serial.summary["amp_family"].dump() == threaded.summary["amp_family"].dump());
}

TEST_CASE("flowmap: sup norms stable under stride refinement") {
    ExperimentConfig cfg = parse_config_text(kFlowmapTinyCfg);
    ExperimentResult coarse = run_flowmap_continuity(cfg);
    cfg.sample_stride = 1;
    ExperimentResult fine = run_flowmap_continuity(cfg);
    for (std::size_t i = 0; i < coarse.summary["amp_family"]["D_n"].size(); ++i) {
        double a = coarse.summary["amp_family"]["D_n"][i].get<double>();
        double b = fine.summary["amp_family"]["D_n"][i].get<double>();
        CHECK(a == doctest::Approx(b).epsilon(0.02));
    }
}

TEST_CASE("simulate: conservation scenario with declared checks") {
    ExperimentConfig cfg = parse_config_text(R"(
[scenario]
kind = conservation
[grid]
n = 128
[analysis]
s = 2.5
[data]
amp = 0.02
base_mode = 1
[integration]
periods = 0.25
cfl = 0.5
n_z = 32
[thresholds]
hamiltonian_drift_max = 1e-6
mass_drift_max = 1e-10
taylor_min = 0.5
)");
    ExperimentResult r = run_simulate(cfg);
    CHECK(r.pass);
    CHECK(r.exit_code == 0);
    CHECK(r.summary["checks_declared"] == 3);
}

TEST_CASE("provenance: config hash and version recorded") {
    ExperimentConfig cfg = parse_config_text(kCalculusCfg);
    ExperimentResult r = run_calculus_study(cfg);
    CHECK(r.summary.contains("config_hash"));
    CHECK(r.summary.contains("code_version"));
    CHECK(r.summary["config_hash"].get<std::uint64_t>() == cfg.config_hash());
}
