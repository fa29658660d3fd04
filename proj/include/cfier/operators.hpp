#pragma once

// Dense Nystrom matrices of the parametrized boundary operators:
// A_ij = R_j(t_i) I1(t_i,t_j) + h I2(t_i,t_j).

#include <filesystem>
#include <map>
#include <memory>
#include <string>

#include "cfier/kernels.hpp"
#include "cfier/quadrature.hpp"

namespace cfier {

enum class OperatorKind { S, K, KT, Ndiff, N0, impedance, composite };

struct DenseOperator {
    OperatorKind kind = OperatorKind::composite;
    CMatrix matrix;

    Eigen::Index dim() const { return matrix.rows(); }
    CVector apply(const CVector& v) const;
};

/// Nystrom matrix of a kernel split on the grid.
CMatrix nystrom_matrix(const KernelSplit& split, const GridData& grid);

/// -1/2 minus the trapezoid row sums of the Laplace double layer. Added to
/// the diagonal of every K matrix, it subtracts the density value at the
/// target before integrating the Laplace part of the kernel, which the
/// trapezoid rule resolves poorly at nodes next to a corner.
RVector double_layer_defect(const GridData& grid);

/// `k2` is only read for Ndiff, which realizes N_{k1} - N_{k2}.
DenseOperator assemble(OperatorKind kind, const Wavenumber& k1, const Wavenumber& k2,
                       const GridData& grid, Variant variant);
DenseOperator assemble(OperatorKind kind, const Wavenumber& k, const GridData& grid,
                       Variant variant);

/// Full Laplace hypersingular operator in the unweighted convention
/// (maps psi to |x'| N_0 psi): cot part applied as the Fourier multiplier
/// -|m|/2, remainder as a smooth kernel on the derivative.
DenseOperator assemble_laplace_hypersingular(const GridData& grid);

DenseOperator compose(const DenseOperator& a, const DenseOperator& b);
/// alpha a + b
DenseOperator axpy(cplx alpha, const DenseOperator& a, const DenseOperator& b);
DenseOperator diag(const CVector& multiplier);
DenseOperator identity(Eigen::Index dim);

/// Little-endian dump: int64 dimension, int64 kind tag, then row-major
/// complex doubles.
void write_operator(const std::filesystem::path& path, const DenseOperator& op);
DenseOperator read_operator(const std::filesystem::path& path);

/// Per-grid cache of the operators of each wavenumber, built from one kernel
/// pass per wavenumber. Matrices follow the density convention of the
/// variant (see kernels.hpp); Ndiff is N_k - N_0.
class OperatorCache {
public:
    explicit OperatorCache(const GridData& grid);

    const GridData& grid() const { return grid_; }

    const CMatrix& S(const Wavenumber& k, Variant v);
    const CMatrix& K(const Wavenumber& k, Variant v);
    const CMatrix& KT(const Wavenumber& k, Variant v);
    const CMatrix& Ndiff0(const Wavenumber& k, Variant v);
    /// N_{k1} - N_{k2}
    CMatrix Ndiff(const Wavenumber& k1, const Wavenumber& k2, Variant v);
    const CMatrix& N0(Variant v);
    /// Full N_k = (N_k - N_0) + N_0.
    CMatrix N(const Wavenumber& k, Variant v);

    const RMatrix& differentiation() const { return diff_; }

private:
    struct Entry {
        CMatrix s_w, k, n_diff;
        std::map<std::string, CMatrix> derived;
    };
    Entry& entry(const Wavenumber& k);
    const CMatrix& derived(const Wavenumber& k, const std::string& tag,
                           const std::function<CMatrix(Entry&)>& make);

    const GridData& grid_;
    RMatrix diff_;
    RVector defect_;
    std::map<std::pair<double, double>, std::unique_ptr<Entry>> entries_;
    std::map<int, CMatrix> n0_;
};

} // namespace cfier
