#include "cfier/kernels.hpp"

#include <cmath>
#include <fmt/format.h>

namespace cfier {

namespace {

double log_factor(const GridData& g, int i, int j)
{
    const double s = std::sin(0.5 * (g.t[i] - g.t[j]));
    return std::log(4.0 * s * s);
}

struct PairGeom {
    double r;
    double c_tau; // scaled normal at tau . (x(t) - x(tau))
    double d;     // (x(t) - x(tau)) . x'(t)
    double nn;    // scaled normal at t . scaled normal at tau
};

PairGeom pair_geom(const GridData& g, int i, int j)
{
    const Vec2 diff = g.x[i] - g.x[j];
    return {diff.norm(), g.scaled_normal(j).dot(diff), diff.dot(g.dx[i]),
            g.scaled_normal(i).dot(g.scaled_normal(j))};
}

// Kernel values and their log coefficients for one wavenumber. The
// hypersingular parts (p, e) are taken relative to the Laplace kernel.
struct FamilyValues {
    cplx s, s1;
    cplx k, k1;
    cplx p, p1;
    cplx e, e1;
};

FamilyValues family_offdiag(cplx k, const PairGeom& q)
{
    const CylinderSet cs = cylinder_set(k * q.r);
    const double inv4pi = 1.0 / (4.0 * pi);
    FamilyValues v;
    v.s = 0.25 * I_unit * cs.h0;
    v.s1 = -inv4pi * cs.j0;
    v.k = 0.25 * I_unit * k * cs.h1 * q.c_tau / q.r;
    v.k1 = -inv4pi * k * cs.j1 * q.c_tau / q.r;
    v.p = k * k * v.s * q.nn;
    v.p1 = k * k * v.s1 * q.nn;
    v.e = -0.25 * I_unit * k * cs.h1 * q.d / q.r + q.d / (2.0 * pi * q.r * q.r);
    v.e1 = inv4pi * k * cs.j1 * q.d / q.r;
    return v;
}

FamilyValues family_diag(cplx k, const GridData& g, int i)
{
    const double J = g.jacobian[i];
    const double cross = g.dx[i].x() * g.ddx[i].y() - g.dx[i].y() * g.ddx[i].x();
    const cplx sdiag = 0.25 * I_unit - euler_gamma / (2.0 * pi) - std::log(0.5 * k * J) / (2.0 * pi);
    FamilyValues v;
    v.s = sdiag;
    v.s1 = -1.0 / (4.0 * pi);
    v.k = -cross / (4.0 * pi * J * J);
    v.k1 = 0.0;
    v.p = k * k * sdiag * J * J;
    v.p1 = -k * k * J * J / (4.0 * pi);
    v.e = 0.0;
    v.e1 = 0.0;
    return v;
}

FamilyValues family_values(const Wavenumber& k, const GridData& g, int i, int j)
{
    if (k.is_laplace())
        return {};
    return i == j ? family_diag(k.value(), g, i) : family_offdiag(k.value(), pair_geom(g, i, j));
}

KernelSplit empty_split(KernelKind kind, Variant variant, cplx k1, cplx k2, int dim)
{
    return {kind, variant, k1, k2, CMatrix(dim, dim), CMatrix(dim, dim)};
}

// Rescales a split built for the unweighted variant in place.
void apply_variant(KernelSplit& s, const GridData& g)
{
    const int N = g.size();
    const RVector& J = g.jacobian;
    if (s.kind == KernelKind::single_layer && s.variant == Variant::unweighted) {
        for (int j = 0; j < N; ++j) {
            s.i1.col(j) *= J[j];
            s.i2.col(j) *= J[j];
        }
    } else if (s.kind == KernelKind::double_layer && s.variant == Variant::weighted) {
        for (int j = 0; j < N; ++j)
            for (int i = 0; i < N; ++i) {
                s.i1(i, j) *= J[i] / J[j];
                s.i2(i, j) *= J[i] / J[j];
            }
    } else if (s.kind == KernelKind::hypersingular_k2 && s.variant == Variant::weighted) {
        for (int j = 0; j < N; ++j) {
            s.i1.col(j) /= J[j];
            s.i2.col(j) /= J[j];
        }
    }
}

void require_helmholtz(const Wavenumber& k, const char* what)
{
    if (k.is_laplace())
        throw DomainError(fmt::format("{} needs a nonzero wavenumber", what));
}

} // namespace

cplx KernelSplit::reconstruct(const GridData& grid, int i, int j) const
{
    return i1(i, j) * log_factor(grid, i, j) + i2(i, j);
}

KernelFamily split_family(const Wavenumber& k, const GridData& g)
{
    require_helmholtz(k, "kernel family");
    const int N = g.size();
    const cplx kv = k.value();
    KernelFamily f{empty_split(KernelKind::single_layer, Variant::weighted, kv, 0.0, N),
                   empty_split(KernelKind::double_layer, Variant::unweighted, kv, 0.0, N),
                   empty_split(KernelKind::hypersingular_k2, Variant::unweighted, kv, 0.0, N),
                   empty_split(KernelKind::hypersingular_tangential, Variant::unweighted, kv,
                               0.0, N)};
#pragma omp parallel for schedule(dynamic, 8)
    for (int j = 0; j < N; ++j)
        for (int i = 0; i < N; ++i) {
            const FamilyValues v = family_values(k, g, i, j);
            const double L = i == j ? 0.0 : log_factor(g, i, j);
            f.single_layer_w.i1(i, j) = v.s1;
            f.single_layer_w.i2(i, j) = v.s - v.s1 * L;
            f.double_layer.i1(i, j) = v.k1;
            f.double_layer.i2(i, j) = v.k - v.k1 * L;
            f.hyper_k2.i1(i, j) = v.p1;
            f.hyper_k2.i2(i, j) = v.p - v.p1 * L;
            f.hyper_tangential.i1(i, j) = v.e1;
            f.hyper_tangential.i2(i, j) = v.e - v.e1 * L;
        }
    return f;
}

KernelSplit split_single_layer(const Wavenumber& k, const GridData& grid, Variant variant)
{
    KernelSplit s = std::move(split_family(k, grid).single_layer_w);
    s.variant = variant;
    apply_variant(s, grid);
    return s;
}

KernelSplit split_double_layer(const Wavenumber& k, const GridData& grid, Variant variant)
{
    KernelSplit s = std::move(split_family(k, grid).double_layer);
    s.variant = variant;
    apply_variant(s, grid);
    return s;
}

KernelSplit split_adjoint_double_layer(const Wavenumber& k, const GridData& grid, Variant variant)
{
    // KT(t, tau) = |x'(tau)| K(tau, t) with K the unweighted double layer
    KernelSplit base = std::move(split_family(k, grid).double_layer);
    KernelSplit s{KernelKind::adjoint_double_layer, variant, k.value(), 0.0,
                  base.i1.transpose(), base.i2.transpose()};
    if (variant == Variant::unweighted)
        for (int j = 0; j < grid.size(); ++j) {
            s.i1.col(j) *= grid.jacobian[j];
            s.i2.col(j) *= grid.jacobian[j];
        }
    return s;
}

HypersingularSplit split_hypersingular_difference(const Wavenumber& k1, const Wavenumber& k2,
                                                  const GridData& grid, Variant variant)
{
    const int N = grid.size();
    HypersingularSplit out{
        empty_split(KernelKind::hypersingular_k2, variant, k1.value(), k2.value(), N),
        empty_split(KernelKind::hypersingular_tangential, variant, k1.value(), k2.value(), N)};
    if (k1 == k2) {
        out.k2_part.i1.setZero();
        out.k2_part.i2.setZero();
        out.tangential_part.i1.setZero();
        out.tangential_part.i2.setZero();
        return out;
    }
    auto accumulate = [&](const Wavenumber& k, double sign) {
        if (k.is_laplace())
            return;
        const KernelFamily f = split_family(k, grid);
        out.k2_part.i1 += sign * f.hyper_k2.i1;
        out.k2_part.i2 += sign * f.hyper_k2.i2;
        out.tangential_part.i1 += sign * f.hyper_tangential.i1;
        out.tangential_part.i2 += sign * f.hyper_tangential.i2;
    };
    for (auto* m : {&out.k2_part.i1, &out.k2_part.i2, &out.tangential_part.i1,
                    &out.tangential_part.i2})
        m->setZero();
    accumulate(k1, 1.0);
    accumulate(k2, -1.0);
    apply_variant(out.k2_part, grid);
    return out;
}

cplx direct_kernel(KernelKind kind, const Wavenumber& k1, const Wavenumber& k2,
                   const GridData& g, Variant variant, int i, int j)
{
    if (i == j)
        throw SingularityError("direct kernel evaluation on the diagonal");
    const RVector& J = g.jacobian;
    auto hankel_only = [&](const Wavenumber& k, int a, int b) {
        // the family values without the Laplace correction of the tangential part
        FamilyValues v = family_values(k, g, a, b);
        if (!k.is_laplace()) {
            const PairGeom q = pair_geom(g, a, b);
            v.e -= q.d / (2.0 * pi * q.r * q.r);
        } else {
            const PairGeom q = pair_geom(g, a, b);
            v.e = -q.d / (2.0 * pi * q.r * q.r);
        }
        return v;
    };
    switch (kind) {
    case KernelKind::single_layer: {
        require_helmholtz(k1, "single layer");
        const cplx v = 0.25 * I_unit * hankel_h1(0, k1.value() * pair_geom(g, i, j).r);
        return variant == Variant::unweighted ? v * J[j] : v;
    }
    case KernelKind::double_layer: {
        require_helmholtz(k1, "double layer");
        const cplx v = hankel_only(k1, i, j).k;
        return variant == Variant::weighted ? v * J[i] / J[j] : v;
    }
    case KernelKind::adjoint_double_layer: {
        require_helmholtz(k1, "adjoint double layer");
        const cplx v = hankel_only(k1, j, i).k;
        return variant == Variant::unweighted ? v * J[j] : v;
    }
    case KernelKind::hypersingular_k2: {
        const cplx v = hankel_only(k1, i, j).p - hankel_only(k2, i, j).p;
        return variant == Variant::weighted ? v / J[j] : v;
    }
    case KernelKind::hypersingular_tangential:
        return hankel_only(k1, i, j).e - hankel_only(k2, i, j).e;
    }
    return {};
}

} // namespace cfier
