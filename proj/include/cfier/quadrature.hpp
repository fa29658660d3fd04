#pragma once

// Spectral tools on the 2pi-periodic shifted grid t_i = h/2 + i h, h = pi/n.
//
// The interpolation space is spanned by e^{imt}, |m| < n, plus the Nyquist
// cosine cos(n(t - h/2)), which is the one that does not vanish on the shifted
// nodes.

#include <functional>

#include "cfier/common.hpp"

namespace cfier {

using RMatrix = Eigen::MatrixXd;

struct TrigGrid {
    explicit TrigGrid(int n);

    int n;
    double h;
    RVector t;

    int size() const { return 2 * n; }
};

/// Weights R_i(t) of the product rule for int ln(4 sin^2((t-tau)/2)) f(tau) dtau.
RVector log_weights(const TrigGrid& grid, double t);

/// R_j(t_i) depends only on (i - j) mod 2n; entry m holds R_0(t_m).
RVector log_weight_offsets(const TrigGrid& grid);

/// (pi/n) sum f(t_i).
cplx trapezoid(const TrigGrid& grid, const CVector& samples);

CVector trig_differentiate(const TrigGrid& grid, const CVector& samples);

cplx trig_interpolate(const TrigGrid& grid, const CVector& samples, double t);

/// Matrix of trig_differentiate: D_ij = (1/2)(-1)^{i-j} cot((t_i - t_j)/2), zero diagonal.
RMatrix differentiation_matrix(const TrigGrid& grid);

/// Matrix of the Fourier multiplier e^{imt} -> lambda(m) e^{imt} on the
/// interpolation space, for an even symbol lambda(m) = lambda(-m). The Nyquist
/// cosine is scaled by lambda(n).
RMatrix fourier_multiplier_matrix(const TrigGrid& grid, const std::function<double(int)>& lambda);

} // namespace cfier
