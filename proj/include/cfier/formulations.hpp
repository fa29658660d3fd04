#pragma once

// Regularized combined-field systems for impedance problems.
//
// Unknown: the Dirichlet trace of the total field (exterior) or of the field
// (interior), or |x'| times it for the weighted formulation. All traces use
// the normal pointing out of the bounded domain.

#include <optional>
#include <string>

#include "cfier/impedance.hpp"

namespace cfier {

struct ProblemSpec {
    Side side = Side::exterior;
    Wavenumber k{1.0};
    std::optional<Wavenumber> kappa; ///< regularizer; k + i when unset
    ImpedanceSpec impedance = ConstantImpedance{cplx{0.0, 1.0}};
    CurveSpec geometry = CurveSpec::square(4.0);
    SigmoidParams sigmoid;
    int n = 16;
    bool weighted = false;

    Wavenumber regularizer() const;
    Variant variant() const { return weighted ? Variant::weighted : Variant::unweighted; }
};

/// Throws ConfigError for inconsistent problems. `allow_equal_kappa` is a test
/// hook that skips the Im kappa > 0 requirement.
void validate_problem(const ProblemSpec& problem, bool allow_equal_kappa = false);

struct PlaneWave {
    Vec2 direction;
};

struct PointSource {
    Vec2 x0;
    cplx strength = 1.0;
};

using IncidenceSpec = std::variant<PlaneWave, PointSource>;

/// Dirichlet and Neumann traces of an incident or manufactured field at the
/// nodes (Neumann with respect to the unit normal, no Jacobian).
struct Traces {
    CVector dirichlet, neumann;
};

Traces field_traces(const IncidenceSpec& field, const Wavenumber& k, const GridData& grid);

/// |x'| (gamma_N u + Z gamma_D u) for a Helmholtz field with the given traces;
/// `radiating` selects the Calderon identity used for transmission impedances.
CVector weighted_impedance_data(const Traces& traces, bool radiating, const ProblemSpec& problem,
                                OperatorCache& cache);

enum class Unknown { dirichlet_trace, weighted_dirichlet_trace };

struct LinearSystem {
    CMatrix matrix;
    CVector rhs;
    Unknown unknown;
    std::string provenance;
};

CMatrix assemble_cfier(const ProblemSpec& problem, OperatorCache& cache,
                       bool allow_equal_kappa = false);

/// S_kappa^{x,w} [(N_k - N_0) - (N_kappa - N_0)], the block that carries the
/// hypersingular differences (weighted convention when the problem is weighted).
CMatrix hypersingular_block(const ProblemSpec& problem, OperatorCache& cache);

/// Physical right-hand side: plane-wave or point-source incidence for
/// exterior scattering (unknown = total trace), point-source impedance data
/// for interior problems (unknown = trace of the point-source field).
CVector build_rhs(const ProblemSpec& problem, const IncidenceSpec& incidence, OperatorCache& cache);

/// Right-hand side whose exact solution is the trace of `source`: interior
/// problems use build_rhs, exterior problems a radiating source inside the
/// domain.
CVector manufactured_rhs(const ProblemSpec& problem, const PointSource& source,
                         OperatorCache& cache);

/// Exact unknown for a manufactured solution (weighted when the problem is).
CVector manufactured_unknown(const ProblemSpec& problem, const PointSource& source,
                             const GridData& grid);

/// max |A u_exact - rhs| for the manufactured problem.
double manufactured_residual(const ProblemSpec& problem, const PointSource& source,
                             OperatorCache& cache);

LinearSystem build_system(const ProblemSpec& problem, const IncidenceSpec& incidence,
                          OperatorCache& cache);

} // namespace cfier
