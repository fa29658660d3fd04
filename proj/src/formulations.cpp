#include "cfier/formulations.hpp"

#include <fmt/format.h>

namespace cfier {

namespace {

CMatrix left_scale(const RVector& d, const CMatrix& a) { return d.cast<cplx>().asDiagonal() * a; }

// Z in the convention of the unknown: unweighted values -> |x'| Z values, or
// weighted -> weighted. Diagonal impedances stay vectors.
struct ZAction {
    bool diagonal = true;
    CVector d;
    CMatrix m;

    CMatrix right_of(const CMatrix& a) const
    {
        return diagonal ? CMatrix(a * d.asDiagonal()) : CMatrix(a * m);
    }
    CVector apply(const CVector& v) const
    {
        return diagonal ? CVector(d.cwiseProduct(v)) : CVector(m * v);
    }
};

ZAction z_action(const ProblemSpec& p, OperatorCache& cache)
{
    const GridData& g = cache.grid();
    ZAction z;
    if (is_multiplicative(p.impedance)) {
        z.d = impedance_values(p.impedance, g);
        if (!p.weighted)
            z.d = z.d.cwiseProduct(g.jacobian.cast<cplx>());
        return z;
    }
    z.diagonal = false;
    z.m = impedance_weighted_action(p.impedance, cache);
    if (p.weighted)
        z.m = z.m * g.jacobian.cwiseInverse().cast<cplx>().asDiagonal();
    return z;
}

bool is_transmission(const ProblemSpec& p)
{
    return std::holds_alternative<TransmissionImpedance>(p.impedance);
}

void require_outside(const CurveSpec& c, const Vec2& x0, const char* what)
{
    if (c.contains(x0))
        throw ConfigError(fmt::format("{} at ({}, {}) must lie outside the domain", what, x0.x(),
                                      x0.y()));
}

// |x'| N_kappa gamma_D u from the traces of a Helmholtz field at wavenumber k:
// N_k gamma_D u = (K_k^T -+ 1/2) gamma_N u (interior field: -, radiating: +),
// then N_kappa = N_k + (N_kappa - N_k).
CVector weighted_n_kappa(const Traces& tr, bool radiating, const ProblemSpec& p,
                         OperatorCache& cache)
{
    const GridData& g = cache.grid();
    const CVector jn = g.jacobian.cast<cplx>().cwiseProduct(tr.neumann);
    const double half = radiating ? 0.5 : -0.5;
    return cache.KT(p.k, Variant::weighted) * jn + half * jn
           + cache.Ndiff(p.regularizer(), p.k, Variant::unweighted) * tr.dirichlet;
}

CVector to_unknown_convention(const ProblemSpec& p, const GridData& g, CVector v)
{
    if (p.weighted)
        v = g.jacobian.cast<cplx>().cwiseProduct(v);
    return v;
}

} // namespace

CVector weighted_impedance_data(const Traces& tr, bool radiating, const ProblemSpec& p,
                                OperatorCache& cache)
{
    const GridData& g = cache.grid();
    CVector q = g.jacobian.cast<cplx>().cwiseProduct(tr.neumann);
    if (is_transmission(p)) {
        const double sign = p.side == Side::exterior ? 2.0 : -2.0;
        return q + sign * weighted_n_kappa(tr, radiating, p, cache);
    }
    ProblemSpec unweighted = p;
    unweighted.weighted = false;
    return q + z_action(unweighted, cache).apply(tr.dirichlet);
}

Wavenumber ProblemSpec::regularizer() const
{
    return kappa ? *kappa : Wavenumber(k.value() + I_unit);
}

void validate_problem(const ProblemSpec& p, bool allow_equal_kappa)
{
    if (p.k.value().imag() != 0.0 || !(p.k.value().real() > 0.0))
        throw ConfigError("wavenumber k must be real and positive");
    if (!allow_equal_kappa && !(p.regularizer().value().imag() > 0.0))
        throw ConfigError("regularizing wavenumber kappa needs Im kappa > 0");
    if (p.sigmoid.p < 2)
        throw ConfigError("sigmoid exponent p must be >= 2");
    validate_impedance(p.impedance, p.side, int(p.geometry.segments().size()));
    const bool multiplicative = is_multiplicative(p.impedance);
    if (p.weighted && !multiplicative)
        throw ConfigError("the weighted formulation needs a multiplicative impedance");
    if (!p.weighted && std::holds_alternative<PiecewiseImpedance>(p.impedance))
        throw ConfigError("piecewise-constant impedance needs the weighted formulation");
}

Traces field_traces(const IncidenceSpec& field, const Wavenumber& k, const GridData& g)
{
    const int N = g.size();
    Traces tr{CVector(N), CVector(N)};
    const cplx kv = k.value();
    if (const auto* pw = std::get_if<PlaneWave>(&field)) {
        const Vec2 d = pw->direction;
        if (std::abs(d.norm() - 1.0) > 1e-12)
            throw ConfigError("plane-wave direction must be a unit vector");
        for (int i = 0; i < N; ++i) {
            const cplx e = std::exp(I_unit * kv * g.x[i].dot(d));
            tr.dirichlet[i] = e;
            tr.neumann[i] = I_unit * kv * g.normal[i].dot(d) * e;
        }
        return tr;
    }
    const auto& ps = std::get<PointSource>(field);
    for (int i = 0; i < N; ++i) {
        const Vec2 diff = g.x[i] - ps.x0;
        const double r = diff.norm();
        const CylinderSet cs = cylinder_set(kv * r);
        tr.dirichlet[i] = ps.strength * 0.25 * I_unit * cs.h0;
        tr.neumann[i] = -ps.strength * 0.25 * I_unit * kv * cs.h1 * diff.dot(g.normal[i]) / r;
    }
    return tr;
}

CMatrix hypersingular_block(const ProblemSpec& p, OperatorCache& cache)
{
    const Variant v = p.variant();
    const Wavenumber kap = p.regularizer();
    CMatrix h = cache.S(kap, Variant::weighted) * (cache.Ndiff0(p.k, v) - cache.Ndiff0(kap, v));
    if (p.weighted)
        h = left_scale(cache.grid().jacobian, h);
    return h;
}

CMatrix assemble_cfier(const ProblemSpec& p, OperatorCache& cache, bool allow_equal_kappa)
{
    validate_problem(p, allow_equal_kappa);
    const GridData& g = cache.grid();
    const int N = g.size();
    const Wavenumber& k = p.k;
    const Wavenumber kap = p.regularizer();
    const Variant v = p.variant();
    const double ext = p.side == Side::exterior ? 1.0 : -1.0;

    const CMatrix& Skap = cache.S(kap, Variant::weighted);
    const CMatrix& Sk = cache.S(k, Variant::weighted);
    const CMatrix& Kkap = cache.K(kap, v);
    const CMatrix& Kk = cache.K(k, v);
    const CMatrix& KTk = cache.KT(k, Variant::weighted);
    const CMatrix Kkap2 = Kkap * Kkap;

    if (is_transmission(p)) {
        // Calderon-recombined form: only differences of hypersingular operators
        const CMatrix nd = cache.Ndiff0(k, v) - cache.Ndiff0(kap, v);
        const CMatrix Skap_nd = Skap * nd;
        CMatrix a = 2.0 * CMatrix::Identity(N, N) - 2.0 * (Skap_nd - Sk * nd) - 4.0 * Kkap2
                    - 2.0 * (Kk * Kk);
        a += ext * (4.0 * (Skap * KTk) * nd - 4.0 * Skap_nd * Kk - 4.0 * Kkap2 * Kk);
        return a;
    }

    const ZAction z = z_action(p, cache);
    CMatrix a = CMatrix::Identity(N, N) - 2.0 * hypersingular_block(p, cache) - 2.0 * Kkap2;
    // interior problems flip the S Z and K_k terms; -2 S K^T Z keeps its sign
    CMatrix sz = z.right_of(Skap + Sk);
    CMatrix skz = z.right_of(Skap * KTk);
    if (p.weighted) {
        sz = left_scale(g.jacobian, sz);
        skz = left_scale(g.jacobian, skz);
    }
    a += -ext * sz - 2.0 * skz - ext * Kk;
    return a;
}

CVector build_rhs(const ProblemSpec& p, const IncidenceSpec& incidence, OperatorCache& cache)
{
    const GridData& g = cache.grid();
    if (const auto* ps = std::get_if<PointSource>(&incidence))
        require_outside(p.geometry, ps->x0, "point source");
    const Traces tr = field_traces(incidence, p.k, g);
    const Wavenumber kap = p.regularizer();
    const CMatrix& Skap = cache.S(kap, Variant::weighted);
    CVector rhs;
    if (p.side == Side::exterior) {
        // total-trace unknown
        rhs = tr.dirichlet + 2.0 * Skap * g.jacobian.cast<cplx>().cwiseProduct(tr.neumann);
    } else {
        const CVector q = weighted_impedance_data(tr, false, p, cache);
        rhs = cache.S(p.k, Variant::weighted) * q + Skap * q
              - 2.0 * Skap * (cache.KT(p.k, Variant::weighted) * q);
    }
    return to_unknown_convention(p, g, rhs);
}

CVector manufactured_rhs(const ProblemSpec& p, const PointSource& source, OperatorCache& cache)
{
    if (p.side == Side::interior)
        return build_rhs(p, source, cache);
    if (!p.geometry.contains(source.x0))
        throw ConfigError("exterior manufactured solutions need the source inside the domain");
    const GridData& g = cache.grid();
    const Traces tr = field_traces(source, p.k, g);
    const Wavenumber kap = p.regularizer();
    const CMatrix& Skap = cache.S(kap, Variant::weighted);
    const CVector q = weighted_impedance_data(tr, true, p, cache);
    const CVector rhs = -(cache.S(p.k, Variant::weighted) * q + Skap * q
                          + 2.0 * Skap * (cache.KT(p.k, Variant::weighted) * q));
    return to_unknown_convention(p, g, rhs);
}

CVector manufactured_unknown(const ProblemSpec& p, const PointSource& source, const GridData& g)
{
    return to_unknown_convention(p, g, field_traces(source, p.k, g).dirichlet);
}

double manufactured_residual(const ProblemSpec& p, const PointSource& source, OperatorCache& cache)
{
    const CMatrix a = assemble_cfier(p, cache);
    const CVector rhs = manufactured_rhs(p, source, cache);
    const CVector u = manufactured_unknown(p, source, cache.grid());
    return (a * u - rhs).cwiseAbs().maxCoeff();
}

LinearSystem build_system(const ProblemSpec& p, const IncidenceSpec& incidence,
                          OperatorCache& cache)
{
    LinearSystem sys;
    sys.matrix = assemble_cfier(p, cache);
    sys.rhs = build_rhs(p, incidence, cache);
    sys.unknown = p.weighted ? Unknown::weighted_dirichlet_trace : Unknown::dirichlet_trace;
    sys.provenance = fmt::format("{} {} {}", p.side == Side::exterior ? "exterior" : "interior",
                                 p.weighted ? "weighted" : "unweighted",
                                 is_transmission(p) ? "transmission" : "operator-impedance");
    return sys;
}

} // namespace cfier
