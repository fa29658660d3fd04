#pragma once

// Plain-text experiment configuration: `key = value` entries and nested
// `name { ... }` blocks. Values are numbers, booleans, bare or quoted strings,
// and bracketed lists. Entries are separated by newlines or ';', comments start
// with '#'.
//
//   problem {
//     side = interior
//     k = 2
//     geometry = square4
//     impedance { type = constant; ik = 1 }
//     sizes = [32, 64, 128]
//   }

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cfier/formulations.hpp"

namespace cfier {

struct ConfigNode;
using ConfigList = std::vector<ConfigNode>;
using ConfigBlock = std::map<std::string, ConfigNode>;

struct ConfigNode {
    std::variant<double, bool, std::string, ConfigList, std::shared_ptr<ConfigBlock>> value;
    int line = 0;

    double number(const std::string& what) const;
    int integer(const std::string& what) const;
    bool boolean(const std::string& what) const;
    const std::string& string(const std::string& what) const;
    const ConfigList& list(const std::string& what) const;
    const ConfigBlock& block(const std::string& what) const;
    /// A number or a [re, im] pair.
    cplx complex(const std::string& what) const;
};

/// Throws ConfigError with the line number on syntax errors and duplicate keys.
ConfigBlock parse_config(const std::string& text);

struct ExperimentConfig {
    std::string name;
    ProblemSpec problem;       ///< n is set per run
    std::vector<int> sizes;    ///< 2n per run
    std::vector<double> ks;    ///< one wavenumber per run
    std::optional<cplx> kappa_shift; ///< regularizer kappa = k + shift (default i)
    std::optional<cplx> transmission_shift; ///< transmission kappa = k + shift
    std::vector<double> ik_factors; ///< constant/piecewise Z = i alpha k when set
    IncidenceSpec incidence = PlaneWave{{0.0, -1.0}};
    double tol = 1e-12;
    int maxit = 0; ///< 0: the system dimension
    int reference_factor = 2;
    std::filesystem::path csv;
    std::filesystem::path history_dir;
    std::filesystem::path far_field_dir;
    bool dump_matrices = false;

    /// Problem for run `i` (wavenumber-dependent impedances resolved).
    ProblemSpec problem_for(std::size_t i) const;
};

/// Schema validation: unknown keys, missing keys and inconsistent values are
/// ConfigErrors. Relative output paths are resolved against `base_dir`.
ExperimentConfig load_experiment(const ConfigBlock& root, const std::string& name,
                                 const std::filesystem::path& base_dir);
ExperimentConfig load_experiment(const std::filesystem::path& path);

} // namespace cfier
