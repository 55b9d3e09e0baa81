#include "doilab/psumming.hpp"

#include <cmath>
#include <limits>

#include "doilab/errors.hpp"
#include "doilab/opnorm.hpp"

namespace doilab {

PSummingContext::PSummingContext(double p) : p_(p), pstar_(0.0) {
    if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("p-summing context requires 1 < p < inf");
    pstar_ = p / (p - 1.0);
}

double pi_p_norm(const Matrix& s, const PSummingContext& ctx) {
    return entrywise_norm(s, ctx.p());
}

DefinitionRatio psumming_definition_ratio(const Matrix& s, const PSummingContext& ctx,
                                          const std::vector<Vector>& collection, const SearchConfig& cfg) {
    if (collection.empty()) throw DomainError("psumming_definition_ratio: empty collection");
    const Exponent p = ctx.codomain();
    Matrix rows(static_cast<Eigen::Index>(collection.size()), s.cols());
    double acc = 0.0;
    for (std::size_t j = 0; j < collection.size(); ++j) {
        if (collection[j].size() != s.cols())
            throw DomainError("psumming_definition_ratio: vector has the wrong dimension");
        rows.row(static_cast<Eigen::Index>(j)) = collection[j].transpose();
        acc += std::pow(vector_norm(s * collection[j], p), ctx.p());
    }
    DefinitionRatio out;
    out.lhs = std::pow(acc, 1.0 / ctx.p());
    // ⟨x*, x_j⟩ = (R x*)_j with R the matrix of rows x_j, so the weak norm is ‖R‖_{p->p}.
    const NormEstimate weak = opnorm(rows, p, p, cfg);
    out.weak_norm = weak.value;
    out.weak_certainty = weak.certainty;
    if (out.weak_norm == 0.0) {
        out.weak_norm_zero = true;
        out.ratio = out.lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    } else {
        out.ratio = out.lhs / out.weak_norm;
    }
    return out;
}

double psumming_multiplier_norm(const Matrix& m) {
    require_valid(m, "psumming_multiplier_norm");
    return max_abs(m);
}

double sampled_lipschitz(const ScalarFunction& f, const std::vector<Complex>& points) {
    double best = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            const double d = std::abs(points[i] - points[j]);
            if (d == 0.0) continue;
            best = std::max(best, std::abs(f.eval(points[i]) - f.eval(points[j])) / d);
        }
    return best;
}

LipschitzCheck lipschitz_commutator_check(const DiagonalizableOperator& a, const DiagonalizableOperator& b,
                                          const Matrix& s, const ScalarFunction& f, double lip,
                                          const PSummingContext& ctx, double k_a, double k_b) {
    require_valid(s, "lipschitz_commutator_check");
    if (s.rows() != b.n() || s.cols() != a.n())
        throw DomainError("lipschitz_commutator_check: S must be dim(B) x dim(A)");
    std::vector<Complex> points(a.lambdas().begin(), a.lambdas().end());
    points.insert(points.end(), b.lambdas().begin(), b.lambdas().end());
    const double floor = sampled_lipschitz(f, points);
    if (!(lip >= floor * (1.0 - 1e-12)))
        throw DomainError("lipschitz_commutator_check: lip is below the sampled Lipschitz slope");

    LipschitzCheck out;
    out.lhs = pi_p_norm(functional_calculus(b, f) * s - s * functional_calculus(a, f), ctx);
    out.rhs = pi_p_norm(assemble(b) * s - s * assemble(a), ctx);
    out.k_a = k_a;
    out.k_b = k_b;
    out.bound = k_a * k_b * lip * out.rhs;
    out.satisfied = out.lhs <= out.bound + 1e-9 * (1.0 + out.bound);
    return out;
}

LipschitzCheck lipschitz_commutator_check(const DiagonalizableOperator& a, const DiagonalizableOperator& b,
                                          const Matrix& s, const ScalarFunction& f, double lip,
                                          const PSummingContext& ctx, const SearchConfig& cfg) {
    const double k_a = diagonalizability_constant(a, ctx.domain(), cfg).value;
    const double k_b = diagonalizability_constant(b, ctx.codomain(), cfg).value;
    return lipschitz_commutator_check(a, b, s, f, lip, ctx, k_a, k_b);
}

}  // namespace doilab
