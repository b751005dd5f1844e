// Command-line front end: batch experiment runs that write summary.json,
// tables/*.csv and plots/*.svg under --out.

#include <CLI11.hpp>

#include <iostream>

#include "wavelab/experiments.hpp"

namespace {

int run(const std::string& config_path, const std::string& out, std::uint64_t seed_override, bool seed_set,
        int threads, const std::vector<std::string>& allowed_kinds) {
    using namespace wavelab;
    try {
        ExperimentConfig cfg = parse_config_file(config_path);
        if (seed_set) cfg.seed = seed_override;
        if (threads > 0) cfg.threads = threads;
        bool ok = false;
        for (const auto& k : allowed_kinds) ok = ok || (cfg.kind == k);
        if (!ok) {
            std::cerr << "error: config scenario kind '" << cfg.kind << "' does not match this subcommand\n";
            return 2;
        }
        ExperimentResult res = run_experiment(cfg, out);
        if (!out.empty()) emit_report(res, out);
        std::cout << (res.pass && res.exit_code == 0 ? "PASS" : "FAIL") << " " << cfg.kind
                  << " (exit " << res.exit_code << ")\n";
        return res.exit_code;
    } catch (const wavelab::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const wavelab::blowup_error& e) {
        std::cerr << "runtime failure: " << e.what() << "\n";
        return 3;
    } catch (const wavelab::taylor_sign_error& e) {
        std::cerr << "runtime failure: " << e.what() << "\n";
        return 3;
    } catch (const wavelab::error& e) {
        std::cerr << "runtime failure: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wavelab: spectral water-wave laboratory"};
    app.require_subcommand(1);

    std::string config_path, out;
    std::uint64_t seed = 0;
    int threads = 0;
    bool seed_set = false;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        if (needs_config) sub->add_option("config", config_path, "experiment config file")->required();
        sub->add_option("--out", out, "output directory");
        sub->add_option("--seed", seed, "seed override")->each([&](const std::string&) { seed_set = true; });
        sub->add_option("--threads", threads, "worker threads");
    };

    auto* flowmap = app.add_subcommand("flowmap", "flow-map continuity study");
    add_common(flowmap, true);
    auto* mollifier = app.add_subcommand("mollifier", "mollifier/commutator rate study");
    add_common(mollifier, true);
    auto* dn = app.add_subcommand("dn", "Dirichlet-Neumann and reduction studies");
    add_common(dn, true);
    auto* simulate = app.add_subcommand("simulate", "integrate a configured scenario");
    add_common(simulate, true);
    auto* report = app.add_subcommand("report", "re-render tables/plots from summary.json");
    report->add_option("--out", out, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    if (flowmap->parsed()) return run(config_path, out, seed, seed_set, threads, {"flowmap"});
    if (mollifier->parsed()) return run(config_path, out, seed, seed_set, threads, {"mollifier", "calculus"});
    if (dn->parsed()) return run(config_path, out, seed, seed_set, threads, {"dn", "reduction", "recovery"});
    if (simulate->parsed()) return run(config_path, out, seed, seed_set, threads, {"simulate", "dispersion", "conservation"});
    if (report->parsed()) {
        try {
            return wavelab::report_from_dir(out);
        } catch (const wavelab::error& e) {
            std::cerr << "report error: " << e.what() << "\n";
            return 2;
        }
    }
    return 2;
}
