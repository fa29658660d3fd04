#include "cfier/postproc.hpp"

#include <fmt/format.h>
#include <fstream>

namespace cfier {

namespace {

void require_length(const CVector& v, const GridData& g, const char* what)
{
    if (v.size() != g.size())
        throw DimensionError(fmt::format("{} has {} entries for {} nodes", what, v.size(), g.size()));
}

} // namespace

FarField far_field(const CVector& trace, const CVector& weighted_neumann, const Wavenumber& k,
                   const GridData& g, int directions)
{
    require_length(trace, g, "trace");
    require_length(weighted_neumann, g, "Neumann trace");
    if (directions < 1)
        throw DomainError("far field needs at least one direction");
    const cplx kv = k.value();
    const cplx c = std::exp(I_unit * (pi / 4.0)) / std::sqrt(8.0 * pi * kv);
    const CVector jg = g.jacobian.cast<cplx>().cwiseProduct(trace);

    FarField ff{RVector(directions), CVector(directions)};
#pragma omp parallel for
    for (int q = 0; q < directions; ++q) {
        const double a = 2.0 * pi * q / directions;
        const Vec2 xhat{std::cos(a), std::sin(a)};
        cplx sum = 0.0;
        for (int j = 0; j < g.size(); ++j)
            sum += std::exp(-I_unit * kv * xhat.dot(g.x[j]))
                   * (-weighted_neumann[j] - I_unit * kv * g.normal[j].dot(xhat) * jg[j]);
        ff.angle[q] = a;
        ff.value[q] = c * g.h * sum;
    }
    return ff;
}

CVector dirichlet_trace(const ProblemSpec& p, const GridData& g, const CVector& solution)
{
    require_length(solution, g, "solution");
    return p.weighted ? CVector(solution.cwiseQuotient(g.jacobian.cast<cplx>())) : solution;
}

CVector weighted_impedance_action(const ProblemSpec& p, OperatorCache& cache, const CVector& trace)
{
    const GridData& g = cache.grid();
    require_length(trace, g, "trace");
    if (is_multiplicative(p.impedance))
        return g.jacobian.cast<cplx>().cwiseProduct(impedance_values(p.impedance, g)).cwiseProduct(
            trace);
    return impedance_weighted_action(p.impedance, cache) * trace;
}

FarField scattered_far_field(const ProblemSpec& p, OperatorCache& cache, const CVector& solution,
                             int directions)
{
    if (p.side != Side::exterior)
        throw ConfigError("far fields are defined for exterior problems");
    const CVector g = dirichlet_trace(p, cache.grid(), solution);
    return far_field(g, -weighted_impedance_action(p, cache, g), p.k, cache.grid(), directions);
}

double boundary_error(const CVector& computed, const CVector& exact)
{
    if (computed.size() != exact.size())
        throw DimensionError(
            fmt::format("trace lengths differ: {} vs {}", computed.size(), exact.size()));
    return computed.size() == 0 ? 0.0 : (computed - exact).cwiseAbs().maxCoeff();
}

double far_field_error(const FarField& a, const FarField& b)
{
    if (a.angle.size() != b.angle.size() || (a.angle - b.angle).cwiseAbs().maxCoeff() > 1e-14)
        throw DimensionError("far fields use different directions");
    return (a.value - b.value).cwiseAbs().maxCoeff();
}

CVector near_field(const std::vector<Vec2>& points, Side side, const CVector& trace,
                   const CVector& weighted_neumann, const Wavenumber& k, const GridData& g)
{
    require_length(trace, g, "trace");
    require_length(weighted_neumann, g, "Neumann trace");
    const double min_dist = 5.0 * g.h * g.jacobian.maxCoeff();
    const cplx kv = k.value();
    const double sign = side == Side::exterior ? 1.0 : -1.0;
    const CVector jg = g.jacobian.cast<cplx>().cwiseProduct(trace);

    CVector u(points.size());
    for (std::size_t q = 0; q < points.size(); ++q) {
        const Vec2& x = points[q];
        cplx sum = 0.0;
        for (int j = 0; j < g.size(); ++j) {
            const Vec2 d = x - g.x[j];
            const double r = d.norm();
            if (r < min_dist)
                throw DomainError(fmt::format(
                    "point ({}, {}) lies within {} of the boundary", x.x(), x.y(), min_dist));
            const CylinderSet cs = cylinder_set(kv * r);
            const cplx sl = 0.25 * I_unit * cs.h0;
            const cplx dl = 0.25 * I_unit * kv * cs.h1 * d.dot(g.normal[j]) / r;
            sum += dl * jg[j] - sl * weighted_neumann[j];
        }
        u[q] = sign * g.h * sum;
    }
    return u;
}

void write_far_field(const std::filesystem::path& path, const FarField& ff)
{
    std::ofstream out(path);
    if (!out)
        throw ConfigError(fmt::format("cannot write {}", path.string()));
    out << "angle,re,im\n";
    for (Eigen::Index q = 0; q < ff.angle.size(); ++q)
        out << fmt::format("{:.6e},{:.16e},{:.16e}\n", ff.angle[q], ff.value[q].real(),
                           ff.value[q].imag());
}

} // namespace cfier
