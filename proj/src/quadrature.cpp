#include "cfier/quadrature.hpp"

#include <cmath>
#include <fmt/format.h>
#include <unsupported/Eigen/FFT>

namespace cfier {

namespace {

void check_length(const TrigGrid& grid, Eigen::Index len)
{
    if (len != grid.size())
        throw DimensionError(
            fmt::format("expected {} samples on the grid, got {}", grid.size(), len));
}

// sum_{m=1}^{n-1} cos(m x)/m and the Nyquist term, shared by both weight helpers
double log_weight_value(int n, double x)
{
    double s = 0.0;
    for (int m = 1; m < n; ++m)
        s += std::cos(m * x) / m;
    return -2.0 * pi / n * s - pi / (double(n) * n) * std::cos(n * x);
}

} // namespace

TrigGrid::TrigGrid(int n_) : n(n_), h(pi / n_), t(2 * n_)
{
    if (n < 1)
        throw DomainError("trigonometric grid needs n >= 1");
    for (int i = 0; i < 2 * n; ++i)
        t[i] = 0.5 * h + i * h;
}

RVector log_weights(const TrigGrid& grid, double t)
{
    RVector r(grid.size());
    for (int i = 0; i < grid.size(); ++i)
        r[i] = log_weight_value(grid.n, t - grid.t[i]);
    return r;
}

RVector log_weight_offsets(const TrigGrid& grid)
{
    RVector r(grid.size());
    for (int m = 0; m < grid.size(); ++m)
        r[m] = log_weight_value(grid.n, m * grid.h);
    return r;
}

cplx trapezoid(const TrigGrid& grid, const CVector& samples)
{
    check_length(grid, samples.size());
    return grid.h * samples.sum();
}

CVector trig_differentiate(const TrigGrid& grid, const CVector& samples)
{
    check_length(grid, samples.size());
    const int N = grid.size();
    Eigen::FFT<double> fft;
    std::vector<cplx> in(samples.data(), samples.data() + N), spec;
    fft.fwd(spec, in);
    // Coefficients are with respect to the index i; the node shift h/2 only
    // multiplies each mode by a phase, which differentiation leaves untouched.
    // The Nyquist cosine has zero derivative at every node.
    for (int m = 0; m < N; ++m) {
        const int freq = m <= grid.n ? m : m - N;
        spec[m] *= (m == grid.n) ? cplx{} : I_unit * double(freq);
    }
    std::vector<cplx> out;
    fft.inv(out, spec);
    return Eigen::Map<CVector>(out.data(), N);
}

cplx trig_interpolate(const TrigGrid& grid, const CVector& samples, double t)
{
    check_length(grid, samples.size());
    const int N = grid.size();
    Eigen::FFT<double> fft;
    std::vector<cplx> in(samples.data(), samples.data() + N), spec;
    fft.fwd(spec, in);
    // spec[m]/N is the coefficient of e^{im(t - h/2)}
    const double s = t - 0.5 * grid.h;
    cplx value = spec[grid.n] * std::cos(grid.n * s);
    for (int m = -grid.n + 1; m < grid.n; ++m)
        value += spec[(m + N) % N] * std::exp(I_unit * (m * s));
    return value / double(N);
}

RMatrix differentiation_matrix(const TrigGrid& grid)
{
    const int N = grid.size();
    RMatrix d(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            if (i == j) {
                d(i, j) = 0.0;
                continue;
            }
            const double sign = ((i - j) % 2 == 0) ? 1.0 : -1.0;
            d(i, j) = 0.5 * sign / std::tan(0.5 * (i - j) * grid.h);
        }
    return d;
}

RMatrix fourier_multiplier_matrix(const TrigGrid& grid, const std::function<double(int)>& lambda)
{
    const int N = grid.size();
    const int n = grid.n;
    RVector row(N);
    for (int m = 0; m < N; ++m) {
        const double x = m * grid.h;
        double s = lambda(0);
        for (int q = 1; q < n; ++q)
            s += 2.0 * lambda(q) * std::cos(q * x);
        s += lambda(n) * std::cos(n * x);
        row[m] = s / N;
    }
    RMatrix a(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            a(i, j) = row[((i - j) % N + N) % N];
    return a;
}

} // namespace cfier
