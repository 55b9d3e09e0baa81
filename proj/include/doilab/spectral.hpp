#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "doilab/linalg.hpp"
#include "doilab/opnorm.hpp"
#include "doilab/scalar_function.hpp"
#include "doilab/search_config.hpp"

namespace doilab {

/// A = U⁻¹ · diag(λ) · U, built from its eigenvalues and diagonalizing map.
///
/// The coordinate projections 𝒫_j of the standard basis become the
/// (generally oblique) spectral projections U⁻¹𝒫_jU of A. Eigenvalues are
/// grouped by exact equality of the stored values.
class DiagonalizableOperator {
public:
    /// Computes U⁻¹ and checks ‖U·U⁻¹ − I‖_max, ‖U⁻¹·U − I‖_max <= 1e-9.
    DiagonalizableOperator(Vector lambdas, Matrix u);
    DiagonalizableOperator(Vector lambdas, Matrix u, Matrix u_inv);

    /// Numerical eigendecomposition of a (diagonalizable) matrix. The
    /// conditioning of the eigenvector basis is the caller's problem.
    static DiagonalizableOperator from_matrix(const Matrix& a);

    Eigen::Index n() const noexcept { return lambdas_.size(); }
    const Vector& lambdas() const noexcept { return lambdas_; }
    const Matrix& u() const noexcept { return u_; }
    const Matrix& u_inv() const noexcept { return u_inv_; }

    /// Indices grouped by distinct eigenvalue, in order of first appearance.
    std::vector<std::vector<std::size_t>> eigenvalue_groups() const;

private:
    void validate() const;

    Vector lambdas_;
    Matrix u_;
    Matrix u_inv_;
};

/// U⁻¹ · diag(λ) · U.
Matrix assemble(const DiagonalizableOperator& op);

/// U⁻¹ · diag(f(λ_1), …, f(λ_n)) · U. Throws DomainError if some f(λ_j) is not finite.
Matrix functional_calculus(const DiagonalizableOperator& op, const std::function<Complex(Complex)>& f);
Matrix functional_calculus(const DiagonalizableOperator& op, const ScalarFunction& f);

/// E(σ) = Σ_{j∈σ} U⁻¹𝒫_jU. σ must contain all or none of the indices of each
/// distinct eigenvalue (DomainError otherwise).
Matrix spectral_projection(const DiagonalizableOperator& op, const std::vector<std::size_t>& sigma);

struct ConstantEstimate {
    double value = 1.0;
    Certainty certainty = Certainty::exact;
    std::string argument;  ///< maximizing subset / optimal scaling, human readable
};

/// ν̂(A) = max over unions σ of eigenvalue classes of ‖E(σ)‖_{p->p}.
/// Exhaustive when #distinct <= cfg.exhaustive_cap, otherwise sampled
/// (lower bound).
ConstantEstimate spectral_constant(const DiagonalizableOperator& op, const Exponent& p,
                                   const SearchConfig& cfg = {});

/// K̂_A = min over positive diagonal D of ‖DU‖_p·‖(DU)⁻¹‖_p, an upper bound on
/// the diagonalizability constant. Norms for p ∉ {1,2,∞} are the certified
/// interpolation upper bounds, so the result is an upper bound for every p.
ConstantEstimate diagonalizability_constant(const DiagonalizableOperator& op, const Exponent& p,
                                            const SearchConfig& cfg = {});

}  // namespace doilab
