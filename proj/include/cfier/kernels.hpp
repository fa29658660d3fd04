#pragma once

// Kernel splittings I(t,tau) = I1(t,tau) ln(4 sin^2((t-tau)/2)) + I2(t,tau) of
// the parametrized boundary operators, sampled on all node pairs with finite
// diagonal limits.
//
// Variants follow the density convention of the operator: "unweighted"
// operators act on psi = phi o x, "weighted" ones on |x'| psi.
//
//   S  unweighted: int G |x'(tau)| psi        weighted: int G phi
//   K  unweighted: int dG/dn(tau) |x'(tau)|   weighted: |x'(t)| int dG/dn(tau)
//   KT unweighted: |x'(t)| int dG/dn(t) |x'(tau)|   weighted: drops |x'(tau)|
//
// The hypersingular operator only appears as a difference N_{k1} - N_{k2},
// split into a k^2 part acting on the density and a tangential part acting on
// the trigonometric derivative of the density (of density/|x'| when weighted).

#include "cfier/geometry.hpp"
#include "cfier/specfun.hpp"

namespace cfier {

enum class Variant { unweighted, weighted };

enum class KernelKind {
    single_layer,
    double_layer,
    adjoint_double_layer,
    hypersingular_k2,
    hypersingular_tangential,
};

struct KernelSplit {
    KernelKind kind;
    Variant variant;
    cplx k1, k2; ///< k2 only used by the hypersingular parts
    CMatrix i1, i2;

    /// I1 ln(4 sin^2((t_i - t_j)/2)) + I2, off the diagonal.
    cplx reconstruct(const GridData& grid, int i, int j) const;
};

/// Unsplit kernel value at an off-diagonal pair, from the Hankel functions.
cplx direct_kernel(KernelKind kind, const Wavenumber& k1, const Wavenumber& k2,
                   const GridData& grid, Variant variant, int i, int j);

KernelSplit split_single_layer(const Wavenumber& k, const GridData& grid, Variant variant);
KernelSplit split_double_layer(const Wavenumber& k, const GridData& grid, Variant variant);
KernelSplit split_adjoint_double_layer(const Wavenumber& k, const GridData& grid,
                                       Variant variant);

struct HypersingularSplit {
    KernelSplit k2_part;
    KernelSplit tangential_part;
};

/// N_{k1} - N_{k2}; either wavenumber may be Wavenumber::laplace().
HypersingularSplit split_hypersingular_difference(const Wavenumber& k1, const Wavenumber& k2,
                                                  const GridData& grid, Variant variant);

/// All unweighted splits for one wavenumber from a single pass of Bessel
/// evaluations; the hypersingular parts are those of N_k - N_0.
struct KernelFamily {
    KernelSplit single_layer_w; ///< weighted single layer (no Jacobian factor)
    KernelSplit double_layer;
    KernelSplit hyper_k2;
    KernelSplit hyper_tangential;
};

KernelFamily split_family(const Wavenumber& k, const GridData& grid);

} // namespace cfier
