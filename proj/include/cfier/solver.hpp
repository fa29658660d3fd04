#pragma once

// Unrestarted complex GMRES, zero initial guess.

#include <functional>
#include <vector>

#include "cfier/common.hpp"

namespace cfier {

enum class SolveStatus { converged, max_iterations, breakdown };

struct SolveResult {
    CVector x;
    int iterations = 0;
    std::vector<double> history; ///< relative least-squares residual after each iteration
    double residual = 0.0;       ///< last entry of history (0 for b = 0)
    SolveStatus status = SolveStatus::converged;

    bool converged() const { return status == SolveStatus::converged; }
};

using MatVec = std::function<CVector(const CVector&)>;

/// Modified Gram-Schmidt with one reorthogonalization pass, Givens rotations.
/// Stops at ||b - A x|| <= tol ||b|| (Arnoldi estimate) or after maxit steps.
SolveResult gmres(const MatVec& apply, const CVector& b, double tol, int maxit);

SolveResult gmres(const CMatrix& a, const CVector& b, double tol, int maxit);

} // namespace cfier
