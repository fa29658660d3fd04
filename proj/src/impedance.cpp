#include "cfier/impedance.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <set>

namespace cfier {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

double smooth_step(double x)
{
    auto b = [](double y) { return y > 0.0 ? std::exp(-1.0 / y) : 0.0; };
    if (x <= 0.0)
        return 0.0;
    if (x >= 1.0)
        return 1.0;
    return b(x) / (b(x) + b(1.0 - x));
}

double bump(double t, double a, double b, double delta)
{
    const double len = b - a;
    if (len >= 2.0 * pi - 1e-12)
        return 1.0;
    double tau = std::fmod(t - (a - delta), 2.0 * pi);
    if (tau < 0.0)
        tau += 2.0 * pi;
    return smooth_step(tau / (2.0 * delta)) * smooth_step((len + 2.0 * delta - tau) / (2.0 * delta));
}

std::vector<double> corner_list(const GridData& g)
{
    if (g.corners.empty())
        return {0.0, 2.0 * pi};
    return g.corners;
}

} // namespace

bool is_multiplicative(const ImpedanceSpec& spec)
{
    return std::holds_alternative<ConstantImpedance>(spec)
           || std::holds_alternative<PiecewiseImpedance>(spec);
}

void validate_impedance(const ImpedanceSpec& spec, Side side, int segments)
{
    const bool ext = side == Side::exterior;
    std::visit(
        overloaded{
            [&](const ConstantImpedance& c) {
                if (ext && !(c.zeta.imag() > 0.0))
                    throw ConfigError("exterior impedance needs Im Z > 0");
                if (!ext && c.zeta.imag() == 0.0)
                    throw ConfigError("interior impedance needs Im Z != 0");
            },
            [&](const PiecewiseImpedance& p) {
                if (int(p.zeta.size()) != segments)
                    throw ConfigError(fmt::format(
                        "piecewise impedance has {} values for {} segments", p.zeta.size(),
                        segments));
                const bool any_pos = std::any_of(p.zeta.begin(), p.zeta.end(),
                                                 [](cplx z) { return z.imag() > 0.0; });
                const bool any_neg = std::any_of(p.zeta.begin(), p.zeta.end(),
                                                 [](cplx z) { return z.imag() < 0.0; });
                if (ext ? (any_neg || !any_pos) : (any_pos == any_neg))
                    throw ConfigError(ext ? "exterior piecewise impedance needs Im Z >= 0, "
                                            "positive on some segment"
                                          : "interior piecewise impedance needs Im Z of one "
                                            "sign, nonzero on some segment");
            },
            [&](const TransmissionImpedance& t) {
                if (!(t.kappa.value().imag() > 0.0))
                    throw ConfigError("transmission impedance needs Im kappa > 0");
                if (t.sign != (ext ? 1 : -1))
                    throw ConfigError(ext ? "exterior transmission impedance is +2 N_kappa"
                                          : "interior transmission impedance is -2 N_kappa");
            },
            [&](const BlendedImpedance& b) {
                if (ext)
                    throw ConfigError("blended impedance is only defined for interior problems");
                if (b.kappas.empty() || b.kappas.size() != b.patches.size())
                    throw ConfigError("blended impedance needs one kappa per patch");
                for (const auto& k : b.kappas)
                    if (!(k.value().imag() > 0.0))
                        throw ConfigError("blended impedance needs Im kappa_j > 0");
            },
        },
        spec);
}

PartitionOfUnity build_partition(const GridData& grid,
                                 const std::vector<std::vector<int>>& patches, double overlap)
{
    const std::vector<double> T = corner_list(grid);
    const int P = int(T.size()) - 1;
    if (patches.empty())
        throw ConfigError("partition of unity needs at least one patch");

    PartitionOfUnity pu;
    std::set<int> covered;
    double shortest = 2.0 * pi;
    for (const auto& patch : patches) {
        std::set<int> segs(patch.begin(), patch.end());
        if (segs.empty() || *segs.begin() < 0 || *segs.rbegin() >= P)
            throw ConfigError(fmt::format("patch segments must lie in [0, {})", P));
        covered.insert(segs.begin(), segs.end());
        // first segment whose predecessor is not in the patch
        int first = *segs.begin();
        if (int(segs.size()) < P)
            for (int s : segs)
                if (!segs.count((s - 1 + P) % P)) {
                    first = s;
                    break;
                }
        double len = 0.0;
        for (int q = 0; q < int(segs.size()); ++q) {
            const int s = (first + q) % P;
            if (!segs.count(s))
                throw ConfigError("patch segments must be contiguous");
            len += T[s + 1] - T[s];
        }
        pu.intervals.emplace_back(T[first], T[first] + len);
        shortest = std::min(shortest, len);
    }
    if (int(covered.size()) != P)
        throw ConfigError("patches must cover every segment");

    pu.overlap = overlap < 0.0 ? 0.25 * shortest : overlap;
    if (pu.overlap > 0.5 * shortest || (pu.overlap <= 0.0 && patches.size() > 1))
        throw ConfigError(fmt::format("overlap {} must lie in (0, {}]", pu.overlap, 0.5 * shortest));

    const int N = grid.size();
    pu.chi.assign(patches.size(), RVector(N));
    RVector norm2 = RVector::Zero(N);
    for (std::size_t j = 0; j < patches.size(); ++j) {
        for (int i = 0; i < N; ++i)
            pu.chi[j][i] = bump(grid.t[i], pu.intervals[j].first, pu.intervals[j].second, pu.overlap);
        norm2 += pu.chi[j].cwiseAbs2();
    }
    const RVector scale = norm2.cwiseSqrt().cwiseInverse();
    for (auto& c : pu.chi)
        c = c.cwiseProduct(scale);
    return pu;
}

double PartitionOfUnity::value(int j, double t) const
{
    double norm2 = 0.0, mine = 0.0;
    for (std::size_t q = 0; q < intervals.size(); ++q) {
        const double v = bump(t, intervals[q].first, intervals[q].second, overlap);
        norm2 += v * v;
        if (int(q) == j)
            mine = v;
    }
    return mine / std::sqrt(norm2);
}

CVector impedance_values(const ImpedanceSpec& spec, const GridData& grid)
{
    const int N = grid.size();
    if (const auto* c = std::get_if<ConstantImpedance>(&spec))
        return CVector::Constant(N, c->zeta);
    if (const auto* p = std::get_if<PiecewiseImpedance>(&spec)) {
        CVector z(N);
        for (int i = 0; i < N; ++i)
            z[i] = p->zeta.at(grid.segment[i]);
        return z;
    }
    throw DomainError("impedance is not multiplicative");
}

CMatrix impedance_weighted_action(const ImpedanceSpec& spec, OperatorCache& cache)
{
    const GridData& g = cache.grid();
    if (is_multiplicative(spec))
        return CVector(g.jacobian.cast<cplx>().cwiseProduct(impedance_values(spec, g)))
            .asDiagonal()
            .toDenseMatrix();
    if (const auto* t = std::get_if<TransmissionImpedance>(&spec))
        return 2.0 * t->sign * cache.N(t->kappa, Variant::unweighted);
    const auto& b = std::get<BlendedImpedance>(spec);
    const PartitionOfUnity pu = build_partition(g, b.patches, b.overlap);
    const int N = g.size();
    CMatrix z = CMatrix::Zero(N, N);
    for (std::size_t j = 0; j < b.kappas.size(); ++j) {
        const CVector chi = pu.chi[j].cast<cplx>();
        z.noalias() += chi.asDiagonal() * cache.N(b.kappas[j], Variant::unweighted) * chi.asDiagonal();
    }
    return -2.0 * z;
}

DenseOperator impedance_operator(const ImpedanceSpec& spec, OperatorCache& cache)
{
    if (is_multiplicative(spec))
        return {OperatorKind::impedance,
                impedance_values(spec, cache.grid()).asDiagonal().toDenseMatrix()};
    const RVector inv = cache.grid().jacobian.cwiseInverse();
    return {OperatorKind::impedance,
            inv.cast<cplx>().asDiagonal() * impedance_weighted_action(spec, cache)};
}

} // namespace cfier
