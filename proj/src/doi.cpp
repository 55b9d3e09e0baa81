#include "doilab/doi.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "doilab/errors.hpp"
#include "doilab/schur.hpp"

namespace doilab {

Matrix doi_apply(const Matrix& phi, const Matrix& s) {
    if (phi.rows() != s.rows() || phi.cols() != s.cols()) throw DomainError("doi_apply: shape mismatch");
    return phi.cwiseProduct(s);
}

double identity_scale(const Matrix& s, const Matrix& a, const Matrix& b) {
    return 1.0 + max_abs(s) * (1.0 + max_abs(a) + max_abs(b));
}

CommutatorReport commutator_transform(const DiagonalizableOperator& a, const DiagonalizableOperator& b,
                                      const Matrix& s, const ScalarFunction& f, const Exponent& p,
                                      const Exponent& q, const SearchConfig& cfg, ConstantsMode constants) {
    require_valid(s, "commutator_transform");
    if (s.rows() != b.n() || s.cols() != a.n())
        throw DomainError("commutator_transform: S must be dim(B) x dim(A)");

    const Matrix a_mat = assemble(a);
    const Matrix b_mat = assemble(b);
    const Matrix direct = functional_calculus(b, f) * s - s * functional_calculus(a, f);
    const Matrix commutator = b_mat * s - s * a_mat;
    const Matrix phi = divided_difference_matrix(f, a.lambdas(), b.lambdas());
    const Matrix via_doi = b.u_inv() * doi_apply(phi, b.u() * commutator * a.u_inv()) * a.u();

    CommutatorReport rep;
    rep.identity_residual = max_abs(direct - via_doi);
    rep.identity_scale = identity_scale(s, a_mat, b_mat);

    const NormEstimate lhs = opnorm(direct, p, q, cfg);
    const NormEstimate rhs = opnorm(commutator, p, q, cfg);
    rep.lhs_norm = lhs.value;
    rep.rhs_norm = rhs.value;
    rep.lhs_certainty = lhs.certainty;
    rep.rhs_certainty = rhs.certainty;
    if (rep.rhs_norm < 1e-14) {
        rep.ratio_infinite = true;
        rep.ratio = std::numeric_limits<double>::infinity();
    } else {
        rep.ratio = rep.lhs_norm / rep.rhs_norm;
    }

    if (constants != ConstantsMode::none) {
        rep.constants.k_a = diagonalizability_constant(a, p, cfg).value;
        rep.constants.k_b = diagonalizability_constant(b, q, cfg).value;
        rep.constants.has_k = true;
    }
    if (constants == ConstantsMode::all) {
        rep.constants.nu_a = spectral_constant(a, p, cfg).value;
        rep.constants.nu_b = spectral_constant(b, q, cfg).value;
        rep.constants.has_nu = true;
    }
    return rep;
}

const SobolevNorm& sobolev_norm_g() {
    static const SobolevNorm norm = [] {
        boost::math::quadrature::exp_sinh<double> integrator;
        // g is even, so integrate over [0, ∞) and double.
        auto g_sq = [](double t) {
            const double e = std::exp(-t);
            const double g = 2.0 * e / (1.0 + e);
            return g * g;
        };
        auto dg_sq = [](double t) {
            const double e = std::exp(-t);
            const double dg = 2.0 * e / ((1.0 + e) * (1.0 + e));
            return dg * dg;
        };
        SobolevNorm n;
        n.l2 = std::sqrt(2.0 * integrator.integrate(g_sq, 0.0, std::numeric_limits<double>::infinity()));
        n.derivative_l2 =
            std::sqrt(2.0 * integrator.integrate(dg_sq, 0.0, std::numeric_limits<double>::infinity()));
        n.w12 = n.l2 + n.derivative_l2;
        return n;
    }();
    return norm;
}

double truncation_estimate_constant() {
    return 2.0 + 32.0 * std::numbers::sqrt2 * sobolev_norm_g().w12;
}

TruncationBoundReport truncation_bound_check(const Matrix& s, const RealVector& lambdas,
                                             const RealVector& mus, const Exponent& p,
                                             const Exponent& q, Eigen::Index n,
                                             const SearchConfig& cfg) {
    require_valid(s, "truncation_bound_check");
    if (n < 1 || s.rows() < n || s.cols() < n || lambdas.size() < n || mus.size() < n)
        throw DomainError("truncation_bound_check: n exceeds the data");

    const Vector lam = lambdas.head(n).cast<Complex>();
    const Vector mu = mus.head(n).cast<Complex>();
    Matrix transformed = Matrix::Zero(s.rows(), s.cols());
    transformed.topLeftCorner(n, n) =
        doi_apply(divided_difference_matrix(abs_value(), lam, mu), s.topLeftCorner(n, n));

    const NormEstimate lhs = opnorm(transformed, p, q, cfg);
    const NormEstimate sn = opnorm(s, p, q, cfg);
    const NormEstimate tn = opnorm(sequence_truncation(s, lambdas, mus, n), p, q, cfg);

    TruncationBoundReport rep;
    rep.lhs = lhs.value;
    rep.s_norm = sn.value;
    rep.trunc_norm = tn.value;
    rep.constant = truncation_estimate_constant();
    rep.lhs_certainty = lhs.certainty;
    rep.rhs_certainty = (sn.certainty == Certainty::exact && tn.certainty == Certainty::exact)
                            ? Certainty::exact
                            : Certainty::lower_bound;
    const double bound = rep.constant * (rep.s_norm + rep.trunc_norm);
    rep.satisfied = rep.lhs <= bound + 1e-9 * (1.0 + bound);
    return rep;
}

}  // namespace doilab
