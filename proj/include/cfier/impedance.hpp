#pragma once

// Impedance operators Z in the boundary condition gamma_N u + Z gamma_D u = f.
//
// Multiplicative impedances act pointwise; the transmission impedance +-2 N_kappa
// is kept symbolic and expanded by the formulations; the blended impedance
// -2 sum_j chi_j N_{kappa_j} chi_j is assembled from full hypersingular matrices.

#include <variant>
#include <vector>

#include "cfier/operators.hpp"

namespace cfier {

enum class Side { exterior, interior };

struct ConstantImpedance {
    cplx zeta;
};

/// One value per curve segment, in segment order.
struct PiecewiseImpedance {
    std::vector<cplx> zeta;
};

/// Z = sign * 2 N_kappa; sign +1 for exterior, -1 for interior problems.
struct TransmissionImpedance {
    int sign;
    Wavenumber kappa;
};

/// Z = -2 sum_j chi_j N_{kappa_j} chi_j over patches of whole segments.
struct BlendedImpedance {
    std::vector<Wavenumber> kappas;
    std::vector<std::vector<int>> patches;
    double overlap = -1.0; ///< collar half-width in parameter units; < 0 picks the default
};

using ImpedanceSpec =
    std::variant<ConstantImpedance, PiecewiseImpedance, TransmissionImpedance, BlendedImpedance>;

/// Throws ConfigError when the impedance does not give a well-posed problem on
/// `side` for a curve with `segments` segments.
void validate_impedance(const ImpedanceSpec& spec, Side side, int segments);

bool is_multiplicative(const ImpedanceSpec& spec);

struct PartitionOfUnity {
    std::vector<RVector> chi; ///< chi_j(t_i)
    std::vector<std::pair<double, double>> intervals; ///< patch [a, b] in parameter units
    double overlap;

    /// chi_j at an arbitrary parameter value, from the closed-form bumps.
    double value(int j, double t) const;
};

/// Collars of half-width `overlap` around each patch boundary; the default is
/// a quarter of the shortest patch.
PartitionOfUnity build_partition(const GridData& grid,
                                 const std::vector<std::vector<int>>& patches,
                                 double overlap = -1.0);

/// Node values of a multiplicative impedance.
CVector impedance_values(const ImpedanceSpec& spec, const GridData& grid);

/// Z as a matrix acting on node values of gamma_D u; transmission impedances
/// are assembled from the full N_kappa here (formulations avoid this).
DenseOperator impedance_operator(const ImpedanceSpec& spec, OperatorCache& cache);

/// |x'| Z: maps unweighted node values to the weighted convention used by
/// the S^{x,w} operators. Not available for transmission impedances.
CMatrix impedance_weighted_action(const ImpedanceSpec& spec, OperatorCache& cache);

} // namespace cfier
