#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "cfier/operators.hpp"
#include "golden.hpp"

using namespace cfier;

namespace {

CVector mode(const GridData& g, int m)
{
    CVector v(g.size());
    for (int i = 0; i < g.size(); ++i)
        v[i] = std::exp(I_unit * (m * g.t[i]));
    return v;
}

double eigen_error(const CMatrix& a, const GridData& g, int m, cplx lambda)
{
    const CVector v = mode(g, m);
    return (a * v - lambda * v).cwiseAbs().maxCoeff() / std::abs(lambda);
}

CVector random_vector(int n, unsigned seed)
{
    std::mt19937 rng(seed);
    std::normal_distribution<double> nd;
    CVector v(n);
    for (auto& x : v)
        x = {nd(rng), nd(rng)};
    return v;
}

} // namespace

TEST_CASE("circle eigenvalues of the assembled operators")
{
    const GridData g = build_grid(CurveSpec::circle(1.0), {}, 32);
    for (cplx kv : {cplx(2.0, 0.0), cplx(2.0, 1.0)}) {
        const Wavenumber k(kv);
        const CMatrix S = assemble(OperatorKind::S, k, g, Variant::unweighted).matrix;
        const CMatrix K = assemble(OperatorKind::K, k, g, Variant::unweighted).matrix;
        const CMatrix KT = assemble(OperatorKind::KT, k, g, Variant::unweighted).matrix;
        const CMatrix N = assemble(OperatorKind::Ndiff, k, g, Variant::unweighted).matrix;
        for (const auto& r : testing::read_circle(kv)) {
            if (r.m > 5)
                continue;
            for (int m : {r.m, -r.m}) {
                CHECK(eigen_error(S, g, m, r.s) < 1e-10);
                CHECK(eigen_error(K, g, m, r.kd) < 1e-9);
                CHECK(eigen_error(KT, g, m, r.kd) < 1e-9);
                CHECK(eigen_error(N, g, m, r.n + 0.5 * std::abs(m)) < 1e-8);
            }
        }
    }
}

TEST_CASE("Laplace hypersingular on the circle")
{
    const GridData g = build_grid(CurveSpec::circle(1.0), {}, 16);
    const CMatrix n0 = assemble_laplace_hypersingular(g).matrix;
    for (int m = 1; m < 16; ++m)
        CHECK(eigen_error(n0, g, m, -0.5 * m) < 1e-12);
    CHECK((n0 * mode(g, 0)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("zero density maps to zero")
{
    const GridData g = build_grid(CurveSpec::square(4.0), {}, 16);
    const CVector z = CVector::Zero(32);
    for (OperatorKind kind : {OperatorKind::S, OperatorKind::K, OperatorKind::KT, OperatorKind::Ndiff})
        CHECK(assemble(kind, Wavenumber(2.0), g, Variant::weighted).apply(z).norm() == 0.0);
}

TEST_CASE("self-convergence on the square")
{
    // image of a smooth density, compared at common parameter values t in (0, 2pi)
    auto image = [](int n) {
        const GridData g = build_grid(CurveSpec::square(4.0), {}, n);
        CVector psi(g.size());
        for (int i = 0; i < g.size(); ++i)
            psi[i] = std::cos(g.x[i].x()) + I_unit * g.x[i].y();
        return std::make_pair(g, CVector(assemble(OperatorKind::S, Wavenumber(2.0), g,
                                                  Variant::unweighted)
                                             .apply(psi)));
    };
    // grids of different size share no nodes; compare through the interpolant of
    // a finer reference
    auto [g64, a64] = image(32);
    auto [g128, a128] = image(64);
    auto [gref, aref] = image(128);
    const TrigGrid tref(128);
    auto error = [&](const GridData& g, const CVector& a) {
        double e = 0.0;
        for (int i = 0; i < g.size(); ++i)
            e = std::max(e, std::abs(trig_interpolate(tref, aref, g.t[i]) - a[i]));
        return e;
    };
    CHECK(error(g64, a64) / error(g128, a128) >= 4.0);
}

TEST_CASE("matrix algebra")
{
    const int n = 12;
    const DenseOperator a{OperatorKind::composite, CMatrix::Random(n, n)};
    const DenseOperator b{OperatorKind::composite, CMatrix::Random(n, n)};
    CHECK((compose(identity(n), a).matrix - a.matrix).norm() == 0.0);
    CHECK((diag(CVector::Ones(n)).matrix - CMatrix::Identity(n, n)).norm() == 0.0);
    const CVector v = random_vector(n, 5);
    const CVector lhs = compose(a, b).apply(v);
    const CVector rhs = a.apply(b.apply(v));
    CHECK((lhs - rhs).norm() <= 1e-12 * rhs.norm());
    CHECK((axpy(2.0, a, b).matrix - (2.0 * a.matrix + b.matrix)).norm() == 0.0);
    CHECK_THROWS_AS(axpy(1.0, a, identity(n + 1)), DimensionError);
    CHECK_THROWS_AS(compose(a, identity(n + 1)), DimensionError);
}

TEST_CASE("transpose identity of the adjoint double layer")
{
    const GridData g = build_grid(CurveSpec::square(4.0), {}, 32);
    CMatrix K = assemble(OperatorKind::K, Wavenumber(2.0), g, Variant::unweighted).matrix;
    const CMatrix KT = assemble(OperatorKind::KT, Wavenumber(2.0), g, Variant::unweighted).matrix;
    K.diagonal() -= double_layer_defect(g).cast<cplx>(); // the Laplace subtraction is K-only
    const CMatrix want = (g.jacobian.cast<cplx>().asDiagonal() * K).transpose();
    CHECK((KT - want).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("double layer applied to a constant")
{
    // Gauss: K_0 1 = -1/2 off the corners, and K_k - K_0 has a bounded kernel,
    // so the corrected matrix must be accurate right next to the corners too
    double mid_prev = 1.0;
    for (int n : {32, 64, 128}) {
        const GridData g = build_grid(CurveSpec::square(4.0), {}, n);
        const RVector d = double_layer_defect(g);
        const double mid = std::abs(d[g.size() / 8]);
        CHECK(mid < mid_prev / 8.0); // vanishes under refinement away from corners
        CHECK(std::abs(d[0]) > 0.1); // but not next to them
        mid_prev = mid;
        const CMatrix K = assemble(OperatorKind::K, Wavenumber(1e-8), g, Variant::unweighted).matrix;
        const CVector one = CVector::Ones(g.size());
        CHECK((K * one + 0.5 * one).cwiseAbs().maxCoeff() < 1e-6);
    }
}

TEST_CASE("weighted and unweighted single layers agree on weighted densities")
{
    for (const CurveSpec& c : {CurveSpec::circle(1.0), CurveSpec::square(4.0)}) {
        const GridData g = build_grid(c, {}, 32);
        const CVector psi = random_vector(g.size(), 9);
        const CVector a = assemble(OperatorKind::S, Wavenumber(2.0), g, Variant::unweighted).apply(psi);
        const CVector b = assemble(OperatorKind::S, Wavenumber(2.0), g, Variant::weighted)
                              .apply(g.jacobian.cast<cplx>().cwiseProduct(psi));
        CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12 * a.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("operator cache matches direct assembly")
{
    const GridData g = build_grid(CurveSpec::lshape(4.0, 2.0), {}, 24);
    OperatorCache cache(g);
    const Wavenumber k(cplx(3.0, 1.0));
    for (Variant v : {Variant::unweighted, Variant::weighted}) {
        CHECK((cache.S(k, v) - assemble(OperatorKind::S, k, g, v).matrix).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((cache.K(k, v) - assemble(OperatorKind::K, k, g, v).matrix).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((cache.KT(k, v) - assemble(OperatorKind::KT, k, g, v).matrix).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((cache.Ndiff0(k, v) - assemble(OperatorKind::Ndiff, k, g, v).matrix).cwiseAbs().maxCoeff()
              < 1e-10);
    }
    const Wavenumber k2(2.0);
    const CMatrix direct = assemble(OperatorKind::Ndiff, k2, k, g, Variant::unweighted).matrix;
    CHECK((cache.Ndiff(k2, k, Variant::unweighted) - direct).cwiseAbs().maxCoeff()
          < 1e-10 * direct.cwiseAbs().maxCoeff());
}

TEST_CASE("binary dump round trip")
{
    const GridData g = build_grid(CurveSpec::square(4.0), {}, 8);
    const DenseOperator op = assemble(OperatorKind::K, Wavenumber(2.0), g, Variant::unweighted);
    const auto path = std::filesystem::temp_directory_path() / "cfier_dump_test.bin";
    write_operator(path, op);
    CHECK(std::filesystem::file_size(path) == 16 + 16 * 16 * 16);
    const DenseOperator back = read_operator(path);
    CHECK(back.kind == OperatorKind::K);
    CHECK(back.matrix == op.matrix);
    std::filesystem::remove(path);
}
