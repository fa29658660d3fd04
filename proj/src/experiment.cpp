#include "cfier/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fmt/format.h>
#include <fstream>
#include <functional>
#include <map>
#include <omp.h>

#include "cfier/postproc.hpp"

extern "C" void openblas_set_num_threads(int);

namespace cfier {

namespace {

constexpr double kReferenceTol = 1e-12;

bool source_inside(const ExperimentConfig& cfg)
{
    const auto* ps = std::get_if<PointSource>(&cfg.incidence);
    return ps && cfg.problem.geometry.contains(ps->x0);
}

std::string run_tag(const ExperimentConfig& cfg, const RunRow& row)
{
    const bool several_k = std::adjacent_find(cfg.ks.begin(), cfg.ks.end(),
                                              std::not_equal_to<>()) != cfg.ks.end();
    return several_k ? fmt::format("{}_2n{}_k{:g}", cfg.name, row.size, row.k)
                     : fmt::format("{}_2n{}", cfg.name, row.size);
}

int max_iterations(const ExperimentConfig& cfg, int dim)
{
    return cfg.maxit > 0 ? std::min(cfg.maxit, dim) : dim;
}

struct Solved {
    SolveResult result;
    FarField far_field;
    double error = 0.0;
};

// Assembly, solve and error of one problem; the cache is dropped on return.
Solved solve_one(const ExperimentConfig& cfg, const ProblemSpec& p, double tol, ErrorKind kind,
                 const std::filesystem::path& dump)
{
    const GridData grid = build_grid(p.geometry, p.sigmoid, p.n);
    OperatorCache cache(grid);
    LinearSystem sys;
    CVector exact;
    if (kind == ErrorKind::far_field) {
        sys = build_system(p, cfg.incidence, cache);
    } else {
        const auto& src = std::get<PointSource>(cfg.incidence);
        sys.matrix = assemble_cfier(p, cache);
        sys.rhs = p.side == Side::exterior ? manufactured_rhs(p, src, cache)
                                           : build_rhs(p, cfg.incidence, cache);
        exact = manufactured_unknown(p, src, grid);
    }
    if (!dump.empty())
        write_operator(dump, DenseOperator{OperatorKind::composite, sys.matrix});

    Solved s;
    s.result = gmres(sys.matrix, sys.rhs, tol, max_iterations(cfg, grid.size()));
    sys = {};
    if (kind == ErrorKind::far_field)
        s.far_field = scattered_far_field(p, cache, s.result.x);
    else
        s.error = boundary_error(s.result.x, exact);
    return s;
}

void write_history(const std::filesystem::path& path, const std::vector<double>& history)
{
    std::ofstream out(path);
    if (!out)
        throw ConfigError(fmt::format("cannot write {}", path.string()));
    out << "iteration,residual\n";
    for (std::size_t i = 0; i < history.size(); ++i)
        out << fmt::format("{},{:.6e}\n", i + 1, history[i]);
}

void ensure_dir(const std::filesystem::path& dir)
{
    if (!dir.empty())
        std::filesystem::create_directories(dir);
}

} // namespace

bool ExperimentReport::all_converged() const
{
    return reference_failures == 0
           && std::all_of(rows.begin(), rows.end(),
                          [](const RunRow& r) { return r.status == SolveStatus::converged; });
}

ErrorKind error_kind(const ExperimentConfig& cfg)
{
    if (cfg.problem.side == Side::exterior && !source_inside(cfg))
        return ErrorKind::far_field;
    return cfg.problem.weighted ? ErrorKind::weighted_boundary : ErrorKind::boundary;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, bool write_outputs)
{
    ExperimentReport report;
    report.name = cfg.name;
    report.error_kind = error_kind(cfg);
    if (cfg.problem.side == Side::interior && source_inside(cfg))
        throw ConfigError("interior problems need the point source outside the domain");

    if (write_outputs) {
        ensure_dir(cfg.history_dir);
        ensure_dir(cfg.far_field_dir);
        if (cfg.dump_matrices)
            ensure_dir(cfg.csv.parent_path());
    }

    // one reference per wavenumber, refined over its largest grid
    std::map<double, FarField> references;
    if (report.error_kind == ErrorKind::far_field) {
        std::map<double, std::size_t> finest;
        for (std::size_t i = 0; i < cfg.sizes.size(); ++i) {
            auto [it, fresh] = finest.emplace(cfg.ks[i], i);
            if (!fresh && cfg.sizes[i] > cfg.sizes[it->second])
                it->second = i;
        }
        for (const auto& [k, i] : finest) {
            ProblemSpec p = cfg.problem_for(i);
            p.n *= cfg.reference_factor;
            const Solved ref = solve_one(cfg, p, kReferenceTol, ErrorKind::far_field, {});
            if (!ref.result.converged())
                ++report.reference_failures;
            references.emplace(k, ref.far_field);
        }
    }

    for (std::size_t i = 0; i < cfg.sizes.size(); ++i) {
        RunRow row;
        row.size = cfg.sizes[i];
        row.k = cfg.ks[i];
        const std::string tag = run_tag(cfg, row);
        const std::filesystem::path dump = write_outputs && cfg.dump_matrices
                                               ? cfg.csv.parent_path() / (tag + ".bin")
                                               : std::filesystem::path();
        const auto start = std::chrono::steady_clock::now();
        const Solved s = solve_one(cfg, cfg.problem_for(i), cfg.tol, report.error_kind, dump);
        row.error = report.error_kind == ErrorKind::far_field
                        ? far_field_error(s.far_field, references.at(row.k))
                        : s.error;
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        row.iterations = s.result.iterations;
        row.status = s.result.status;
        row.history = s.result.history;
        if (write_outputs && !cfg.history_dir.empty()) {
            row.history_path = cfg.history_dir / (tag + "_history.csv");
            write_history(row.history_path, row.history);
        }
        if (write_outputs && !cfg.far_field_dir.empty() && report.error_kind == ErrorKind::far_field)
            write_far_field(cfg.far_field_dir / (tag + "_far_field.csv"), s.far_field);
        report.rows.push_back(std::move(row));
    }
    return report;
}

std::vector<double> empirical_orders(const std::vector<double>& errors)
{
    if (errors.size() < 3)
        throw ConfigError(
            fmt::format("convergence needs at least 3 grid sizes, got {}", errors.size()));
    std::vector<double> eoc;
    for (std::size_t i = 0; i + 1 < errors.size(); ++i)
        eoc.push_back(std::log2(errors[i] / errors[i + 1]));
    return eoc;
}

std::string report_csv(const ExperimentReport& report, bool with_eoc)
{
    std::vector<double> eoc;
    if (with_eoc) {
        std::vector<double> errors;
        for (const RunRow& r : report.rows)
            errors.push_back(r.error);
        eoc = empirical_orders(errors);
    }
    std::string out = with_eoc ? "2n,iters,error,seconds,eoc\n" : "2n,iters,error,seconds\n";
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const RunRow& r = report.rows[i];
        out += fmt::format("{},{},{:.6e},{:.6e}", r.size, r.iterations, r.error, r.seconds);
        if (with_eoc)
            out += i == 0 ? std::string(",") : fmt::format(",{:.6e}", eoc[i - 1]);
        out += '\n';
    }
    return out;
}

void write_report_csv(const std::filesystem::path& path, const ExperimentReport& report,
                      bool with_eoc)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out)
        throw ConfigError(fmt::format("cannot write {}", path.string()));
    out << report_csv(report, with_eoc);
}

void apply_thread_setting()
{
    const char* env = std::getenv("CFIER_THREADS");
    if (!env || !*env)
        return;
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*end != '\0' || n < 1 || n > 4096)
        throw ConfigError(fmt::format("CFIER_THREADS must be a positive integer, got '{}'", env));
    omp_set_num_threads(int(n));
    openblas_set_num_threads(int(n));
}

} // namespace cfier
