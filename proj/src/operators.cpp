#include "cfier/operators.hpp"

#include <bit>
#include <cstdint>
#include <fmt/format.h>
#include <fstream>

namespace cfier {

namespace {

void check_same(const DenseOperator& a, const DenseOperator& b)
{
    if (a.matrix.rows() != b.matrix.rows() || a.matrix.cols() != b.matrix.cols())
        throw DimensionError(fmt::format("operator dimensions differ: {}x{} vs {}x{}",
                                         a.matrix.rows(), a.matrix.cols(), b.matrix.rows(),
                                         b.matrix.cols()));
}

CMatrix scale_columns(const CMatrix& a, const RVector& w)
{
    return a * w.cast<cplx>().asDiagonal();
}

CMatrix scale_rows(const CMatrix& a, const RVector& w)
{
    return w.cast<cplx>().asDiagonal() * a;
}

RVector inverse(const RVector& v) { return v.cwiseInverse(); }

CMatrix tangential_times_derivative(const KernelSplit& tangential, const GridData& grid,
                                    const RMatrix& diff)
{
    return nystrom_matrix(tangential, grid) * diff.cast<cplx>();
}

} // namespace

CVector DenseOperator::apply(const CVector& v) const
{
    if (v.size() != matrix.cols())
        throw DimensionError(
            fmt::format("vector of length {} for operator of size {}", v.size(), matrix.cols()));
    return matrix * v;
}

CMatrix nystrom_matrix(const KernelSplit& split, const GridData& grid)
{
    const int N = grid.size();
    const RVector rho = log_weight_offsets(TrigGrid(grid.n));
    CMatrix a(N, N);
#pragma omp parallel for
    for (int j = 0; j < N; ++j)
        for (int i = 0; i < N; ++i)
            a(i, j) = rho[((i - j) % N + N) % N] * split.i1(i, j) + grid.h * split.i2(i, j);
    return a;
}

RVector double_layer_defect(const GridData& g)
{
    const int N = g.size();
    RVector d(N);
#pragma omp parallel for
    for (int i = 0; i < N; ++i) {
        double sum = -g.dx[i].x() * g.ddx[i].y() + g.dx[i].y() * g.ddx[i].x();
        sum /= 4.0 * pi * g.jacobian[i] * g.jacobian[i];
        for (int j = 0; j < N; ++j) {
            if (j == i)
                continue;
            const Vec2 diff = g.x[i] - g.x[j];
            sum += g.scaled_normal(j).dot(diff) / (2.0 * pi * diff.squaredNorm());
        }
        d[i] = -0.5 - g.h * sum;
    }
    return d;
}

DenseOperator assemble(OperatorKind kind, const Wavenumber& k1, const Wavenumber& k2,
                       const GridData& grid, Variant variant)
{
    switch (kind) {
    case OperatorKind::S:
        return {kind, nystrom_matrix(split_single_layer(k1, grid, variant), grid)};
    case OperatorKind::K: {
        CMatrix a = nystrom_matrix(split_double_layer(k1, grid, variant), grid);
        a.diagonal() += double_layer_defect(grid).cast<cplx>();
        return {kind, a};
    }
    case OperatorKind::KT:
        return {kind, nystrom_matrix(split_adjoint_double_layer(k1, grid, variant), grid)};
    case OperatorKind::Ndiff: {
        const auto hs = split_hypersingular_difference(k1, k2, grid, variant);
        RMatrix diff = differentiation_matrix(TrigGrid(grid.n));
        if (variant == Variant::weighted)
            diff = diff * inverse(grid.jacobian).asDiagonal();
        return {kind, nystrom_matrix(hs.k2_part, grid)
                          + tangential_times_derivative(hs.tangential_part, grid, diff)};
    }
    case OperatorKind::N0: {
        DenseOperator n0 = assemble_laplace_hypersingular(grid);
        if (variant == Variant::weighted)
            n0.matrix = scale_columns(n0.matrix, inverse(grid.jacobian));
        return n0;
    }
    default:
        throw DomainError("assemble: not a boundary integral operator kind");
    }
}

DenseOperator assemble(OperatorKind kind, const Wavenumber& k, const GridData& grid,
                       Variant variant)
{
    return assemble(kind, k, Wavenumber::laplace(), grid, variant);
}

DenseOperator assemble_laplace_hypersingular(const GridData& g)
{
    const TrigGrid tg(g.n);
    const int N = g.size();
    const RMatrix hilbert = fourier_multiplier_matrix(tg, [](int m) { return -0.5 * std::abs(m); });
    // -(1/4pi) [2 d / r^2 - cot((t - tau)/2)], smooth
    RMatrix q(N, N);
    for (int j = 0; j < N; ++j)
        for (int i = 0; i < N; ++i) {
            if (i == j) {
                q(i, i) = -g.dx[i].dot(g.ddx[i]) / (4.0 * pi * g.jacobian[i] * g.jacobian[i]);
                continue;
            }
            const Vec2 diff = g.x[i] - g.x[j];
            const double d = diff.dot(g.dx[i]);
            q(i, j) = -(2.0 * d / diff.squaredNorm() - 1.0 / std::tan(0.5 * (g.t[i] - g.t[j])))
                      / (4.0 * pi);
        }
    const RMatrix n0 = hilbert + g.h * q * differentiation_matrix(tg);
    return {OperatorKind::N0, n0.cast<cplx>()};
}

DenseOperator compose(const DenseOperator& a, const DenseOperator& b)
{
    if (a.matrix.cols() != b.matrix.rows())
        throw DimensionError(
            fmt::format("cannot compose {}x{} with {}x{}", a.matrix.rows(), a.matrix.cols(),
                        b.matrix.rows(), b.matrix.cols()));
    return {OperatorKind::composite, a.matrix * b.matrix};
}

DenseOperator axpy(cplx alpha, const DenseOperator& a, const DenseOperator& b)
{
    check_same(a, b);
    return {OperatorKind::composite, alpha * a.matrix + b.matrix};
}

DenseOperator diag(const CVector& multiplier)
{
    return {OperatorKind::composite, multiplier.asDiagonal().toDenseMatrix()};
}

DenseOperator identity(Eigen::Index dim)
{
    return {OperatorKind::composite, CMatrix::Identity(dim, dim)};
}

void write_operator(const std::filesystem::path& path, const DenseOperator& op)
{
    static_assert(std::endian::native == std::endian::little, "dump format is little-endian");
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError(fmt::format("cannot open '{}' for writing", path.string()));
    const std::int64_t header[2] = {op.dim(), static_cast<std::int64_t>(op.kind)};
    out.write(reinterpret_cast<const char*>(header), sizeof header);
    const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = op.matrix;
    out.write(reinterpret_cast<const char*>(rm.data()),
              static_cast<std::streamsize>(rm.size() * sizeof(cplx)));
}

DenseOperator read_operator(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::int64_t header[2];
    if (!in.read(reinterpret_cast<char*>(header), sizeof header) || header[0] < 0)
        throw ConfigError(fmt::format("'{}' is not an operator dump", path.string()));
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm(header[0], header[0]);
    if (!in.read(reinterpret_cast<char*>(rm.data()),
                 static_cast<std::streamsize>(rm.size() * sizeof(cplx))))
        throw ConfigError(fmt::format("'{}' is truncated", path.string()));
    return {static_cast<OperatorKind>(header[1]), rm};
}

OperatorCache::OperatorCache(const GridData& grid)
    : grid_(grid), diff_(differentiation_matrix(TrigGrid(grid.n))),
      defect_(double_layer_defect(grid))
{
}

OperatorCache::Entry& OperatorCache::entry(const Wavenumber& k)
{
    const auto key = std::make_pair(k.value().real(), k.value().imag());
    auto it = entries_.find(key);
    if (it != entries_.end())
        return *it->second;
    const KernelFamily f = split_family(k, grid_);
    auto e = std::make_unique<Entry>();
    e->s_w = nystrom_matrix(f.single_layer_w, grid_);
    e->k = nystrom_matrix(f.double_layer, grid_);
    e->k.diagonal() += defect_.cast<cplx>();
    e->n_diff = nystrom_matrix(f.hyper_k2, grid_)
                + tangential_times_derivative(f.hyper_tangential, grid_, diff_);
    return *entries_.emplace(key, std::move(e)).first->second;
}

const CMatrix& OperatorCache::derived(const Wavenumber& k, const std::string& tag,
                                      const std::function<CMatrix(Entry&)>& make)
{
    Entry& e = entry(k);
    auto it = e.derived.find(tag);
    if (it == e.derived.end())
        it = e.derived.emplace(tag, make(e)).first;
    return it->second;
}

const CMatrix& OperatorCache::S(const Wavenumber& k, Variant v)
{
    if (v == Variant::weighted)
        return entry(k).s_w;
    return derived(k, "S", [&](Entry& e) { return scale_columns(e.s_w, grid_.jacobian); });
}

const CMatrix& OperatorCache::K(const Wavenumber& k, Variant v)
{
    if (v == Variant::unweighted)
        return entry(k).k;
    return derived(k, "Kw", [&](Entry& e) {
        return scale_columns(scale_rows(e.k, grid_.jacobian), inverse(grid_.jacobian));
    });
}

const CMatrix& OperatorCache::KT(const Wavenumber& k, Variant v)
{
    const CMatrix& kt = derived(k, "KT", [&](Entry& e) {
        CMatrix raw = e.k;
        raw.diagonal() -= defect_.cast<cplx>();
        return CMatrix(scale_rows(raw, grid_.jacobian).transpose());
    });
    if (v == Variant::unweighted)
        return kt;
    return derived(k, "KTw", [&](Entry&) { return scale_columns(kt, inverse(grid_.jacobian)); });
}

const CMatrix& OperatorCache::Ndiff0(const Wavenumber& k, Variant v)
{
    if (v == Variant::unweighted)
        return entry(k).n_diff;
    return derived(k, "Nw",
                   [&](Entry& e) { return scale_columns(e.n_diff, inverse(grid_.jacobian)); });
}

CMatrix OperatorCache::Ndiff(const Wavenumber& k1, const Wavenumber& k2, Variant v)
{
    const int N = grid_.size();
    if (k1 == k2)
        return CMatrix::Zero(N, N);
    CMatrix out = CMatrix::Zero(N, N);
    if (!k1.is_laplace())
        out += Ndiff0(k1, v);
    if (!k2.is_laplace())
        out -= Ndiff0(k2, v);
    return out;
}

const CMatrix& OperatorCache::N0(Variant v)
{
    const int key = static_cast<int>(v);
    auto it = n0_.find(key);
    if (it == n0_.end())
        it = n0_.emplace(key, assemble(OperatorKind::N0, Wavenumber::laplace(), grid_, v).matrix)
                 .first;
    return it->second;
}

CMatrix OperatorCache::N(const Wavenumber& k, Variant v)
{
    return Ndiff0(k, v) + N0(v);
}

} // namespace cfier
