#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cfier {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline constexpr double pi = std::numbers::pi;
inline constexpr double euler_gamma = std::numbers::egamma;
inline constexpr cplx I_unit{0.0, 1.0};

/// Argument outside the supported domain of an operation.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Evaluation at a point where the function is singular.
struct SingularityError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Inconsistent problem, grid or file configuration.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

} // namespace cfier
