#include "cfier/specfun.hpp"

#include <cmath>
#include <fmt/format.h>

namespace cfier {

namespace {

using ldouble = long double;
using lcplx = std::complex<long double>;

constexpr ldouble kPiL = 3.141592653589793238462643383279502884L;
constexpr ldouble kGammaL = 0.577215664901532860606512090082402431L;

void check_envelope(cplx z)
{
    if (!(std::abs(z) <= kEnvelopeModulus) || !(std::abs(z.imag()) <= kEnvelopeImag))
        throw DomainError(fmt::format("Bessel argument ({}, {}) outside envelope", z.real(),
                                      z.imag()));
}

void check_right_half(cplx z)
{
    if (z == cplx{})
        throw SingularityError("Y/H Bessel functions are singular at z = 0");
    if (!(z.real() > 0.0))
        throw DomainError(fmt::format("Y/H Bessel functions need Re z > 0, got ({}, {})",
                                      z.real(), z.imag()));
}

struct SeriesValues {
    lcplx j0, j1, y0, y1;
};

// Ascending series in extended precision. Y uses the logarithmic series that
// reuses J.
SeriesValues ascending_series(cplx zd, bool with_y)
{
    const lcplx z{zd.real(), zd.imag()};
    const lcplx q = -(z * z) / 4.0L;

    lcplx t0 = 1.0L;         // (-z^2/4)^m / (m!)^2
    lcplx t1 = 1.0L;         // (-z^2/4)^m / (m!(m+1)!)
    lcplx sj0 = t0, sj1 = t1;
    lcplx sy0 = 0.0L;                       // sum_{m>=1} -H_m (-z^2/4)^m/(m!)^2
    lcplx sy1 = 2.0L * (-kGammaL) + 1.0L;   // psi(1)+psi(2) for m = 0
    ldouble harmonic = 0.0L;                // H_m
    for (int m = 1; m < 200; ++m) {
        t0 *= q / (ldouble(m) * ldouble(m));
        t1 *= q / (ldouble(m) * ldouble(m + 1));
        sj0 += t0;
        sj1 += t1;
        harmonic += 1.0L / m;
        if (with_y) {
            sy0 -= harmonic * t0;
            // psi(m+1) + psi(m+2) = -2 gamma + 2 H_m + 1/(m+1)
            sy1 += (-2.0L * kGammaL + 2.0L * harmonic + 1.0L / (m + 1)) * t1;
        }
        const ldouble scale = std::abs(sj0) + std::abs(sj1);
        if (std::abs(t0) + std::abs(t1) < 1e-22L * scale && m > 2)
            break;
    }
    SeriesValues out;
    out.j0 = sj0;
    out.j1 = (z / 2.0L) * sj1;
    if (with_y) {
        const lcplx log_half = std::log(z / 2.0L);
        out.y0 = (2.0L / kPiL) * ((log_half + kGammaL) * out.j0 + sy0);
        out.y1 = (2.0L / kPiL) * log_half * out.j1 - 2.0L / (kPiL * z)
                 - (z / (2.0L * kPiL)) * sy1;
    }
    return out;
}

struct AsymptoticValues {
    cplx p, q; // modulating series P_nu, Q_nu
};

// Hankel asymptotic expansion P_nu(z), Q_nu(z) for |z| large, Re z >= 0.
AsymptoticValues asymptotic_pq(int order, cplx zd)
{
    const lcplx z{zd.real(), zd.imag()};
    const ldouble mu = 4.0L * order * order;
    lcplx p = 1.0L, q = 0.0L;
    lcplx term = 1.0L; // a_k(nu) / z^k
    ldouble prev = 1.0L;
    for (int k = 1; k < 200; ++k) {
        const ldouble odd = 2.0L * k - 1.0L;
        term *= (mu - odd * odd) / (8.0L * k) / z;
        const ldouble mag = std::abs(term);
        if (mag > prev)
            break; // divergent tail
        // i^k pattern: k = 1 -> Q +, 2 -> P -, 3 -> Q -, 4 -> P +
        switch (k % 4) {
        case 0: p += term; break;
        case 1: q += term; break;
        case 2: p -= term; break;
        case 3: q -= term; break;
        }
        if (mag < 1e-20L)
            break;
        prev = mag;
    }
    return {cplx(double(p.real()), double(p.imag())), cplx(double(q.real()), double(q.imag()))};
}

// H0, H1 for arguments in the upper half plane where J + iY cancels badly:
// H0 = -(2i/pi) K0(-iz), H1 = -(2/pi) K1(-iz), with K_nu(w) = int_0^inf e^{-w cosh t}
// cosh(nu t) dt evaluated by the trapezoid rule (exponentially convergent in the
// strip |Im t| < arg z).
std::pair<cplx, cplx> hankel_by_integral(cplx z)
{
    const double theta = std::arg(z);
    const double y = z.imag();
    const double d = 0.5 * theta;
    const double step = 2.0 * pi * d / (40.0 + 0.5 * y);
    const double tmax = std::acosh(1.0 + 42.0 / y);
    const cplx w = -I_unit * z;
    cplx k0 = 0.5 * std::exp(-w);
    cplx k1 = k0;
    for (double t = step; t <= tmax; t += step) {
        const double c = std::cosh(t);
        const cplx e = std::exp(-w * c);
        k0 += e;
        k1 += e * c;
    }
    k0 *= step;
    k1 *= step;
    return {-2.0 * I_unit / pi * k0, -2.0 / pi * k1};
}

bool cancellation_prone(cplx z)
{
    return z.imag() > 0.0 && std::abs(z) + z.imag() > 18.0;
}

cplx to_double(lcplx v) { return {double(v.real()), double(v.imag())}; }

} // namespace

Wavenumber::Wavenumber(cplx value) : value_(value)
{
    if (!(value.real() > 0.0) || value.imag() < 0.0)
        throw DomainError(fmt::format("wavenumber ({}, {}) needs Re > 0 and Im >= 0",
                                      value.real(), value.imag()));
}

Wavenumber Wavenumber::unchecked(cplx value)
{
    Wavenumber k;
    k.value_ = value;
    return k;
}

cplx bessel_j(int order, cplx z)
{
    if (order != 0 && order != 1)
        throw DomainError("bessel_j supports orders 0 and 1");
    check_envelope(z);
    if (std::abs(z) <= kSeriesRadius) {
        const auto s = ascending_series(z, false);
        return to_double(order == 0 ? s.j0 : s.j1);
    }
    const bool flip = z.real() < 0.0;
    const cplx zz = flip ? -z : z;
    const auto [p, q] = asymptotic_pq(order, zz);
    const cplx chi = zz - (0.5 * order + 0.25) * pi;
    const cplx val = std::sqrt(2.0 / (pi * zz)) * (p * std::cos(chi) - q * std::sin(chi));
    return (flip && order == 1) ? -val : val;
}

cplx bessel_y(int order, cplx z)
{
    if (order != 0 && order != 1)
        throw DomainError("bessel_y supports orders 0 and 1");
    check_envelope(z);
    check_right_half(z);
    if (std::abs(z) <= kSeriesRadius) {
        const auto s = ascending_series(z, true);
        return to_double(order == 0 ? s.y0 : s.y1);
    }
    const auto [p, q] = asymptotic_pq(order, z);
    const cplx chi = z - (0.5 * order + 0.25) * pi;
    return std::sqrt(2.0 / (pi * z)) * (p * std::sin(chi) + q * std::cos(chi));
}

cplx hankel_h1(int order, cplx z)
{
    if (order != 0 && order != 1)
        throw DomainError("hankel_h1 supports orders 0 and 1");
    const auto s = cylinder_set(z);
    return order == 0 ? s.h0 : s.h1;
}

CylinderSet cylinder_set(cplx z)
{
    check_envelope(z);
    check_right_half(z);
    CylinderSet out;
    if (std::abs(z) <= kSeriesRadius) {
        const auto s = ascending_series(z, true);
        out.j0 = to_double(s.j0);
        out.j1 = to_double(s.j1);
        if (cancellation_prone(z)) {
            std::tie(out.h0, out.h1) = hankel_by_integral(z);
        } else {
            const lcplx il{0.0L, 1.0L};
            out.h0 = to_double(s.j0 + il * s.y0);
            out.h1 = to_double(s.j1 + il * s.y1);
        }
        return out;
    }
    const cplx amp = std::sqrt(2.0 / (pi * z));
    for (int order = 0; order < 2; ++order) {
        const auto [p, q] = asymptotic_pq(order, z);
        const cplx chi = z - (0.5 * order + 0.25) * pi;
        const cplx j = amp * (p * std::cos(chi) - q * std::sin(chi));
        const cplx h = amp * std::exp(I_unit * chi) * (p + I_unit * q);
        (order == 0 ? out.j0 : out.j1) = j;
        (order == 0 ? out.h0 : out.h1) = h;
    }
    return out;
}

cplx green_k(const Wavenumber& k, double r)
{
    if (!(r > 0.0))
        throw SingularityError("Green's function evaluated at r = 0");
    if (k.is_laplace())
        return -std::log(r) / (2.0 * pi);
    return 0.25 * I_unit * hankel_h1(0, k.value() * r);
}

} // namespace cfier
