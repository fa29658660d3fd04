#pragma once

// Far fields, near fields and the error functionals of the experiments.
//
// Fields are reconstructed from the Dirichlet trace g and the weighted Neumann
// trace |x'| gamma_N u (normal out of the bounded domain):
//   exterior (radiating part)  u = DL g - SL gamma_N u
//   interior                   u = SL gamma_N u - DL g
// For exterior scattering with the total-trace unknown, gamma_N u = -Z g and
// the reconstruction gives the scattered field.

#include <filesystem>

#include "cfier/formulations.hpp"

namespace cfier {

inline constexpr int kFarFieldDirections = 1024;

struct FarField {
    RVector angle; ///< direction (cos a, sin a)
    CVector value;
};

/// (e^{i pi/4} / sqrt(8 pi k)) times the trapezoid sum of
/// e^{-ik xhat.y} [-|x'| gamma_N u - ik (n.xhat) |x'| g].
FarField far_field(const CVector& trace, const CVector& weighted_neumann, const Wavenumber& k,
                   const GridData& grid, int directions = kFarFieldDirections);

/// Unweighted Dirichlet trace from a solution in the problem's convention.
CVector dirichlet_trace(const ProblemSpec& problem, const GridData& grid, const CVector& solution);

/// |x'| Z g for the problem's impedance (full N_kappa for operator impedances).
CVector weighted_impedance_action(const ProblemSpec& problem, OperatorCache& cache,
                                  const CVector& trace);

/// Far field of an exterior scattering solve.
FarField scattered_far_field(const ProblemSpec& problem, OperatorCache& cache,
                             const CVector& solution, int directions = kFarFieldDirections);

/// Max nodal difference; pass weighted traces for the weighted error.
double boundary_error(const CVector& computed, const CVector& exact);

/// Max difference over directions; the direction sets must agree.
double far_field_error(const FarField& computed, const FarField& reference);

/// Representation formula by the trapezoid rule. Points closer to the curve
/// than 5 h max|x'| are rejected.
CVector near_field(const std::vector<Vec2>& points, Side side, const CVector& trace,
                   const CVector& weighted_neumann, const Wavenumber& k, const GridData& grid);

/// CSV with columns angle, re, im.
void write_far_field(const std::filesystem::path& path, const FarField& ff);

} // namespace cfier
