#pragma once

// Experiment runner: grid -> assembly -> GMRES -> error, one row per 2n.
//
// Error functional per problem:
//   interior, or exterior with a point source inside the domain
//       max nodal error of the (weighted, when the problem is) Dirichlet trace
//       against the exact field;
//   exterior scattering
//       max far-field error against the same solver on a grid refined by
//       `reference_factor` over the largest 2n of each wavenumber, tol 1e-12.

#include <filesystem>
#include <string>
#include <vector>

#include "cfier/config.hpp"
#include "cfier/solver.hpp"

namespace cfier {

enum class ErrorKind { boundary, weighted_boundary, far_field };

struct RunRow {
    int size = 0; ///< 2n
    double k = 0.0;
    int iterations = 0;
    double error = 0.0;
    double seconds = 0.0;
    SolveStatus status = SolveStatus::converged;
    std::vector<double> history;
    std::filesystem::path history_path;
};

struct ExperimentReport {
    std::string name;
    ErrorKind error_kind = ErrorKind::boundary;
    std::vector<RunRow> rows;
    int reference_failures = 0; ///< reference solves that did not converge

    bool all_converged() const;
};

ErrorKind error_kind(const ExperimentConfig& cfg);

/// Runs every row; with `write_outputs` the histories, far fields and matrix
/// dumps requested by the config are written (the CSV is written by callers).
ExperimentReport run_experiment(const ExperimentConfig& cfg, bool write_outputs = true);

/// log2(e_i / e_{i+1}) between consecutive rows; needs at least three errors.
std::vector<double> empirical_orders(const std::vector<double>& errors);

/// CSV text with columns 2n,iters,error,seconds (plus eoc), `%.6e` numbers;
/// the first eoc entry is empty.
std::string report_csv(const ExperimentReport& report, bool with_eoc);
void write_report_csv(const std::filesystem::path& path, const ExperimentReport& report,
                      bool with_eoc);

/// Worker count from CFIER_THREADS, when set; throws ConfigError on bad values.
void apply_thread_setting();

} // namespace cfier
