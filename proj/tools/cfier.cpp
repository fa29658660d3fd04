// cfier run <config> | convergence <config> | oracle-check
//
// Exit codes: 0 all solves converged, 1 configuration error, 2 some GMRES run
// stopped without converging.

#include <CLI11.hpp>
#include <fmt/format.h>
#include <iostream>

#include "cfier/experiment.hpp"
#include "cfier/oracle.hpp"

namespace {

const char* status_name(cfier::SolveStatus s)
{
    switch (s) {
    case cfier::SolveStatus::converged: return "converged";
    case cfier::SolveStatus::max_iterations: return "maxit";
    default: return "breakdown";
    }
}

int run(const std::string& path, bool convergence)
{
    cfier::ExperimentConfig cfg;
    try {
        cfier::apply_thread_setting();
        cfg = cfier::load_experiment(path);
        if (convergence && cfg.sizes.size() < 3)
            throw cfier::ConfigError(fmt::format(
                "convergence needs at least 3 grid sizes, got {}", cfg.sizes.size()));
    } catch (const cfier::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    }
    const cfier::ExperimentReport report = cfier::run_experiment(cfg);
    cfier::write_report_csv(cfg.csv, report, convergence);
    std::cout << cfier::report_csv(report, convergence);
    for (const cfier::RunRow& r : report.rows)
        if (r.status != cfier::SolveStatus::converged)
            std::cerr << fmt::format("2n={} k={}: GMRES {} after {} iterations\n", r.size, r.k,
                                     status_name(r.status), r.iterations);
    if (report.reference_failures > 0)
        std::cerr << fmt::format("{} reference solve(s) did not converge\n",
                                 report.reference_failures);
    std::cerr << "wrote " << cfg.csv.string() << '\n';
    return report.all_converged() ? 0 : 2;
}

int oracle_check()
{
    bool ok = true;
    for (const cfier::OracleResult& r : cfier::oracle_check(cfier::default_golden_dir())) {
        std::cout << fmt::format("{} {}: {} records, worst {:.3e} (tol {:.0e})\n",
                                 r.pass() ? "PASS" : "FAIL", r.file, r.records, r.worst,
                                 r.tolerance);
        ok = ok && r.pass();
    }
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Regularized combined-field solver for 2D Helmholtz impedance problems"};
    app.require_subcommand(1);
    std::string config;
    auto* run_cmd = app.add_subcommand("run", "run every grid size of an experiment config");
    run_cmd->add_option("config", config, "experiment config file")->required();
    auto* conv_cmd =
        app.add_subcommand("convergence", "run a config and append empirical orders");
    conv_cmd->add_option("config", config, "experiment config file")->required();
    auto* oracle_cmd =
        app.add_subcommand("oracle-check", "re-verify special functions against golden tables");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    try {
        if (*oracle_cmd)
            return oracle_check();
        return run(config, bool(*conv_cmd));
    } catch (const cfier::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
