#pragma once

#include <vector>

#include "doilab/exponent.hpp"
#include "doilab/linalg.hpp"
#include "doilab/scalar_function.hpp"
#include "doilab/search_config.hpp"
#include "doilab/spectral.hpp"

namespace doilab {

/// Exponent pair (p, p*) for operators ℓ_{p*} -> ℓ_p; requires 1 < p < ∞.
class PSummingContext {
public:
    explicit PSummingContext(double p);

    double p() const noexcept { return p_; }
    double pstar() const noexcept { return pstar_; }
    Exponent domain() const { return Exponent(pstar_); }    ///< ℓ_{p*}
    Exponent codomain() const { return Exponent(p_); }      ///< ℓ_p

private:
    double p_;
    double pstar_;
};

/// π_p(S) = (Σ_{j,k} |s_jk|^p)^{1/p}, the p-summing norm of S: ℓ_{p*} -> ℓ_p.
double pi_p_norm(const Matrix& s, const PSummingContext& ctx);

struct DefinitionRatio {
    double lhs = 0.0;          ///< (Σ_j ‖S x_j‖_p^p)^{1/p}
    double weak_norm = 0.0;    ///< sup_{‖x*‖_p <= 1} (Σ_j |⟨x*, x_j⟩|^p)^{1/p}
    double ratio = 0.0;
    bool weak_norm_zero = false;
    Certainty weak_certainty = Certainty::exact;
};

/// Evaluates both sides of the p-summing inequality for one finite
/// collection. The weak norm is the p->p norm of the matrix with rows x_j.
DefinitionRatio psumming_definition_ratio(const Matrix& s, const PSummingContext& ctx,
                                          const std::vector<Vector>& collection,
                                          const SearchConfig& cfg = {});

/// Norm of S -> M∗S on Π_p(ℓ_{p*}, ℓ_p): max_{j,k} |m_jk|.
double psumming_multiplier_norm(const Matrix& m);

/// Largest |f(z1) − f(z2)| / |z1 − z2| over distinct pairs of the given points.
double sampled_lipschitz(const ScalarFunction& f, const std::vector<Complex>& points);

struct LipschitzCheck {
    double lhs = 0.0;    ///< π_p(f(B)S − Sf(A))
    double rhs = 0.0;    ///< π_p(BS − SA)
    double k_a = 1.0;    ///< K̂_A on ℓ_{p*}
    double k_b = 1.0;    ///< K̂_B on ℓ_p
    double bound = 0.0;  ///< K̂_A·K̂_B·lip·rhs
    bool satisfied = false;
};

/// π_p(f(B)S − Sf(A)) <= K_A·K_B·‖f‖_Lip·π_p(BS − SA) with A on ℓ_{p*},
/// B on ℓ_p. Both π_p values are exact; K̂ are upper bounds. `lip` must be at
/// least the Lipschitz slope sampled on the two spectra (DomainError otherwise).
LipschitzCheck lipschitz_commutator_check(const DiagonalizableOperator& a, const DiagonalizableOperator& b,
                                          const Matrix& s, const ScalarFunction& f, double lip,
                                          const PSummingContext& ctx, const SearchConfig& cfg = {});

/// Same check with caller-supplied upper bounds for K_A (on ℓ_{p*}) and K_B (on ℓ_p).
LipschitzCheck lipschitz_commutator_check(const DiagonalizableOperator& a, const DiagonalizableOperator& b,
                                          const Matrix& s, const ScalarFunction& f, double lip,
                                          const PSummingContext& ctx, double k_a, double k_b);

}  // namespace doilab
