#pragma once

// Complex-argument Bessel functions of orders 0 and 1 and the 2D Helmholtz
// Green's function.
//
// Supported envelope: |z| <= 1e4 and |Im z| <= 64. Inside it J is accurate to
// about 1e-12 relative to max(|J|,|Y|); Y and H need Re z > 0.

#include "cfier/common.hpp"

namespace cfier {

/// Complex wavenumber with Re > 0 and Im >= 0. The Laplace case k = 0 is only
/// reachable through `Wavenumber::laplace()`.
class Wavenumber {
public:
    explicit Wavenumber(cplx value);
    Wavenumber(double value) : Wavenumber(cplx{value, 0.0}) {}

    static Wavenumber laplace() { return Wavenumber{}; }
    /// Skips the sign checks; used by test hooks that need k = kappa formally.
    static Wavenumber unchecked(cplx value);

    cplx value() const { return value_; }
    bool is_laplace() const { return value_ == cplx{}; }

    friend bool operator==(const Wavenumber&, const Wavenumber&) = default;

private:
    Wavenumber() = default;
    cplx value_{};
};

inline constexpr double kEnvelopeModulus = 1e4;
inline constexpr double kEnvelopeImag = 64.0;
/// Below this modulus the ascending series is used, above it the Hankel
/// asymptotic expansion.
inline constexpr double kSeriesRadius = 17.0;

/// J_0, J_1, H0^(1), H1^(1) at one argument.
struct CylinderSet {
    cplx j0, j1, h0, h1;
};

cplx bessel_j(int order, cplx z);
cplx bessel_y(int order, cplx z);
cplx hankel_h1(int order, cplx z);

/// All four functions at once; shares the work between them. Requires
/// Re z > 0 and z inside the envelope.
CylinderSet cylinder_set(cplx z);

/// (i/4) H0^(1)(k r), the outgoing 2D Green's function. Laplace wavenumber gives
/// -(1/2pi) ln r.
cplx green_k(const Wavenumber& k, double r);

} // namespace cfier
