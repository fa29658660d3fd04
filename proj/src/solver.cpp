#include "cfier/solver.hpp"

#include <cmath>
#include <fmt/format.h>

namespace cfier {

namespace {

// Complex Givens rotation zeroing b in (a, b): [c s; -conj(s) c] with real c.
void make_rotation(cplx a, cplx b, double& c, cplx& s)
{
    const double na = std::abs(a), nb = std::abs(b);
    if (nb == 0.0) {
        c = 1.0;
        s = 0.0;
        return;
    }
    if (na == 0.0) {
        c = 0.0;
        s = std::conj(b) / nb;
        return;
    }
    const double r = std::hypot(na, nb);
    c = na / r;
    s = (a / na) * std::conj(b) / r;
}

} // namespace

SolveResult gmres(const MatVec& apply, const CVector& b, double tol, int maxit)
{
    const Eigen::Index dim = b.size();
    if (maxit < 0 || maxit > dim)
        throw DimensionError(fmt::format("maxit {} must lie in [0, {}]", maxit, dim));

    SolveResult res;
    res.x = CVector::Zero(dim);
    const double beta = b.norm();
    if (beta == 0.0)
        return res;

    std::vector<CVector> v{b / beta};
    CMatrix h = CMatrix::Zero(maxit + 1, maxit);
    CVector g = CVector::Zero(maxit + 1);
    g[0] = beta;
    std::vector<double> cs(maxit);
    std::vector<cplx> sn(maxit);
    res.status = SolveStatus::max_iterations;

    int j = 0;
    for (; j < maxit; ++j) {
        CVector w = apply(v[j]);
        if (w.size() != dim)
            throw DimensionError("matrix-vector map changed the vector length");
        const double wnorm0 = w.norm();
        for (int pass = 0; pass < 2; ++pass)
            for (int i = 0; i <= j; ++i) {
                const cplx hij = v[i].dot(w);
                h(i, j) += hij;
                w -= hij * v[i];
            }
        const double hnext = w.norm();
        h(j + 1, j) = hnext;

        for (int i = 0; i < j; ++i) {
            const cplx t = cs[i] * h(i, j) + sn[i] * h(i + 1, j);
            h(i + 1, j) = -std::conj(sn[i]) * h(i, j) + cs[i] * h(i + 1, j);
            h(i, j) = t;
        }
        make_rotation(h(j, j), h(j + 1, j), cs[j], sn[j]);
        h(j, j) = cs[j] * h(j, j) + sn[j] * h(j + 1, j);
        h(j + 1, j) = 0.0;
        g[j + 1] = -std::conj(sn[j]) * g[j];
        g[j] = cs[j] * g[j];

        if (h(j, j) == cplx{0.0} || !std::isfinite(hnext)) {
            // A is singular on the Krylov space; keep the previous iterate
            res.status = SolveStatus::breakdown;
            break;
        }
        const double rel = std::abs(g[j + 1]) / beta;
        res.history.push_back(rel);

        // happy breakdown: the Krylov space is invariant and the iterate exact
        const bool happy = hnext <= 1e-14 * wnorm0;
        if (rel <= tol || happy) {
            ++j;
            res.status = SolveStatus::converged;
            break;
        }
        v.push_back(w / hnext);
    }

    res.iterations = j;
    if (j > 0) {
        const CVector y = h.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(g.head(j));
        for (int i = 0; i < j; ++i)
            res.x += y[i] * v[i];
    }
    res.residual = res.history.empty() ? 1.0 : res.history.back();
    return res;
}

SolveResult gmres(const CMatrix& a, const CVector& b, double tol, int maxit)
{
    if (a.rows() != a.cols() || a.cols() != b.size())
        throw DimensionError(fmt::format("GMRES needs a square matrix matching b ({}x{} vs {})",
                                         a.rows(), a.cols(), b.size()));
    return gmres([&a](const CVector& x) { return CVector(a * x); }, b, tol, maxit);
}

} // namespace cfier
