#pragma once

#include "doilab/linalg.hpp"
#include "doilab/opnorm.hpp"
#include "doilab/scalar_function.hpp"
#include "doilab/search_config.hpp"
#include "doilab/spectral.hpp"

namespace doilab {

/// Discrete double operator integral in the standard bases: Φ ∗ S.
Matrix doi_apply(const Matrix& phi, const Matrix& s);

/// Which constants commutator_transform fills in. ν̂ needs a subset
/// enumeration and is the expensive part for large n.
enum class ConstantsMode { none, diagonalizability, all };

struct CommutatorConstants {
    double k_a = 1.0;   ///< K̂_A on ℓ_p
    double k_b = 1.0;   ///< K̂_B on ℓ_q
    double nu_a = 1.0;  ///< ν̂(A) on ℓ_p
    double nu_b = 1.0;  ///< ν̂(B) on ℓ_q
    bool has_k = false;
    bool has_nu = false;
};

struct CommutatorReport {
    double lhs_norm = 0.0;  ///< ‖f(B)S − Sf(A)‖_{p->q}
    double rhs_norm = 0.0;  ///< ‖BS − SA‖_{p->q}
    double ratio = 0.0;
    bool ratio_infinite = false;  ///< rhs_norm < 1e-14
    double identity_residual = 0.0;
    double identity_scale = 1.0;  ///< residual budget is 1e-9 · identity_scale
    CommutatorConstants constants;
    Certainty lhs_certainty = Certainty::exact;
    Certainty rhs_certainty = Certainty::exact;

    bool identity_holds() const noexcept { return identity_residual <= 1e-9 * identity_scale; }
};

/// 1 + ‖S‖_max·(1 + ‖A‖_max + ‖B‖_max).
double identity_scale(const Matrix& s, const Matrix& a, const Matrix& b);

/// Evaluates f(B)S − Sf(A) twice: directly by functional calculus, and as
/// V⁻¹·(Φ_f ∗ (V(BS − SA)U⁻¹))·U with Φ_f the divided-difference matrix.
/// A acts on ℓ_p (columns of S), B on ℓ_q (rows of S).
CommutatorReport commutator_transform(const DiagonalizableOperator& a, const DiagonalizableOperator& b,
                                      const Matrix& s, const ScalarFunction& f, const Exponent& p,
                                      const Exponent& q, const SearchConfig& cfg = {},
                                      ConstantsMode constants = ConstantsMode::all);

/// ‖g‖_{L²}, ‖g'‖_{L²} and ‖g‖_{W^{1,2}} = ‖g‖_{L²} + ‖g'‖_{L²} for
/// g(t) = 2/(e^{|t|} + 1), by double-exponential quadrature on [0, ∞).
struct SobolevNorm {
    double l2 = 0.0;
    double derivative_l2 = 0.0;
    double w12 = 0.0;
};
const SobolevNorm& sobolev_norm_g();

/// 2 + 32√2·‖g‖_{W^{1,2}}.
double truncation_estimate_constant();

struct TruncationBoundReport {
    double lhs = 0.0;         ///< ‖Φ_{|·|} ∗ S_n‖_{p->q}
    double s_norm = 0.0;      ///< ‖S‖_{p->q}
    double trunc_norm = 0.0;  ///< ‖T^{λ,μ}_{Δ,n}(S)‖_{p->q}
    double constant = 0.0;
    bool satisfied = false;
    Certainty lhs_certainty = Certainty::exact;
    Certainty rhs_certainty = Certainty::exact;  ///< weakest of the two right-hand norms
};

/// ‖T^{λ,μ}_{φ,n}(S)‖ <= C(‖S‖ + ‖T^{λ,μ}_{Δ,n}(S)‖) for f = |·| with the
/// explicit constant of truncation_estimate_constant().
TruncationBoundReport truncation_bound_check(const Matrix& s, const RealVector& lambdas,
                                             const RealVector& mus, const Exponent& p,
                                             const Exponent& q, Eigen::Index n,
                                             const SearchConfig& cfg = {});

}  // namespace doilab
