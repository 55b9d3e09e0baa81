#include "doilab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "doilab/errors.hpp"
#include "doilab/random.hpp"

namespace doilab {

namespace {

constexpr double kInverseTol = 1e-9;

double identity_defect(const Matrix& m) {
    return (m - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
}

std::vector<Eigen::Index> to_index(const std::vector<std::size_t>& v) {
    return {v.begin(), v.end()};
}

std::string describe_subset(const std::vector<std::size_t>& sigma) {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < sigma.size(); ++i) os << (i ? "," : "") << sigma[i];
    os << '}';
    return os.str();
}

}  // namespace

DiagonalizableOperator::DiagonalizableOperator(Vector lambdas, Matrix u)
    : lambdas_(std::move(lambdas)), u_(std::move(u)) {
    require_valid(u_, "DiagonalizableOperator");
    u_inv_ = inverse(u_);
    validate();
}

DiagonalizableOperator::DiagonalizableOperator(Vector lambdas, Matrix u, Matrix u_inv)
    : lambdas_(std::move(lambdas)), u_(std::move(u)), u_inv_(std::move(u_inv)) {
    validate();
}

void DiagonalizableOperator::validate() const {
    if (lambdas_.size() == 0) throw DomainError("DiagonalizableOperator: empty spectrum");
    if (!lambdas_.allFinite()) throw DomainError("DiagonalizableOperator: non-finite eigenvalue");
    const Eigen::Index n = lambdas_.size();
    if (u_.rows() != n || u_.cols() != n || u_inv_.rows() != n || u_inv_.cols() != n)
        throw DomainError("DiagonalizableOperator: U and U^-1 must be n x n");
    require_valid(u_, "DiagonalizableOperator(U)");
    require_valid(u_inv_, "DiagonalizableOperator(U^-1)");
    if (identity_defect(u_ * u_inv_) > kInverseTol || identity_defect(u_inv_ * u_) > kInverseTol)
        throw DomainError("DiagonalizableOperator: U^-1 does not invert U to 1e-9");
}

DiagonalizableOperator DiagonalizableOperator::from_matrix(const Matrix& a) {
    require_valid(a, "from_matrix");
    if (a.rows() != a.cols()) throw DomainError("from_matrix: matrix is not square");
    Eigen::ComplexEigenSolver<Matrix> es(a);
    if (es.info() != Eigen::Success) throw DomainError("from_matrix: eigendecomposition failed");
    // A = V·diag(λ)·V⁻¹, so the diagonalizing map is U = V⁻¹.
    const Matrix& v = es.eigenvectors();
    return DiagonalizableOperator(es.eigenvalues(), inverse(v), v);
}

std::vector<std::vector<std::size_t>> DiagonalizableOperator::eigenvalue_groups() const {
    std::vector<std::vector<std::size_t>> groups;
    std::vector<Complex> keys;
    for (Eigen::Index j = 0; j < lambdas_.size(); ++j) {
        const auto it = std::find(keys.begin(), keys.end(), lambdas_[j]);
        if (it == keys.end()) {
            keys.push_back(lambdas_[j]);
            groups.push_back({static_cast<std::size_t>(j)});
        } else {
            groups[static_cast<std::size_t>(it - keys.begin())].push_back(static_cast<std::size_t>(j));
        }
    }
    return groups;
}

Matrix functional_calculus(const DiagonalizableOperator& op, const std::function<Complex(Complex)>& f) {
    const Eigen::Index n = op.n();
    Vector values(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        values[j] = f(op.lambdas()[j]);
        if (!std::isfinite(values[j].real()) || !std::isfinite(values[j].imag())) {
            std::ostringstream os;
            os << "functional_calculus: f undefined at eigenvalue " << op.lambdas()[j];
            throw DomainError(os.str());
        }
    }
    return op.u_inv() * values.asDiagonal() * op.u();
}

Matrix functional_calculus(const DiagonalizableOperator& op, const ScalarFunction& f) {
    return functional_calculus(op, f.eval);
}

Matrix assemble(const DiagonalizableOperator& op) {
    return op.u_inv() * op.lambdas().asDiagonal() * op.u();
}

Matrix spectral_projection(const DiagonalizableOperator& op, const std::vector<std::size_t>& sigma) {
    const auto n = static_cast<std::size_t>(op.n());
    std::vector<char> in(n, 0);
    for (std::size_t j : sigma) {
        if (j >= n) throw DomainError("spectral_projection: index out of range");
        in[j] = 1;
    }
    for (const auto& group : op.eigenvalue_groups()) {
        const bool first = in[group.front()] != 0;
        for (std::size_t j : group)
            if ((in[j] != 0) != first)
                throw DomainError("spectral_projection: sigma splits a repeated eigenvalue");
    }
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < n; ++j)
        if (in[j]) idx.push_back(j);
    if (idx.empty()) return Matrix::Zero(op.n(), op.n());
    const auto ix = to_index(idx);
    return op.u_inv()(Eigen::all, ix) * op.u()(ix, Eigen::all);
}

ConstantEstimate spectral_constant(const DiagonalizableOperator& op, const Exponent& p,
                                   const SearchConfig& cfg) {
    const auto groups = op.eigenvalue_groups();
    const std::size_t d = groups.size();
    ConstantEstimate best{1.0, Certainty::exact, "sigma = full spectrum"};
    bool all_exact = true;

    auto consider = [&](std::uint64_t mask) {
        std::vector<std::size_t> sigma;
        for (std::size_t g = 0; g < d; ++g)
            if ((mask >> g) & 1U) sigma.insert(sigma.end(), groups[g].begin(), groups[g].end());
        if (sigma.empty()) return;
        std::sort(sigma.begin(), sigma.end());
        const NormEstimate e = opnorm(spectral_projection(op, sigma), p, p, cfg);
        all_exact = all_exact && e.certainty == Certainty::exact;
        if (e.value > best.value) {
            best.value = e.value;
            best.argument = "sigma = " + describe_subset(sigma);
        }
    };

    if (d <= static_cast<std::size_t>(std::max(0, cfg.exhaustive_cap))) {
        const std::uint64_t count = std::uint64_t{1} << d;
        for (std::uint64_t mask = 1; mask < count; ++mask) consider(mask);
        best.certainty = all_exact ? Certainty::exact : Certainty::lower_bound;
        best.argument += " (exhaustive over " + std::to_string(d) + " eigenvalue classes)";
        return best;
    }

    // Sampled: every singleton class plus random unions.
    Rng rng(derive_seed(cfg.seed, "spectral_subsets", static_cast<std::uint64_t>(op.n())));
    std::bernoulli_distribution coin(0.5);
    for (std::size_t g = 0; g < d; ++g) {
        std::vector<std::size_t> sigma = groups[g];
        const NormEstimate e = opnorm(spectral_projection(op, sigma), p, p, cfg);
        if (e.value > best.value) {
            best.value = e.value;
            best.argument = "sigma = " + describe_subset(sigma);
        }
    }
    for (int s = 0; s < cfg.subset_samples; ++s) {
        std::vector<std::size_t> sigma;
        for (std::size_t g = 0; g < d; ++g)
            if (coin(rng)) sigma.insert(sigma.end(), groups[g].begin(), groups[g].end());
        if (sigma.empty()) continue;
        std::sort(sigma.begin(), sigma.end());
        const NormEstimate e = opnorm(spectral_projection(op, sigma), p, p, cfg);
        if (e.value > best.value) {
            best.value = e.value;
            best.argument = "sigma = " + describe_subset(sigma);
        }
    }
    best.certainty = Certainty::lower_bound;
    best.argument += " (sampled " + std::to_string(cfg.subset_samples) + " unions)";
    return best;
}

ConstantEstimate diagonalizability_constant(const DiagonalizableOperator& op, const Exponent& p,
                                            const SearchConfig& cfg) {
    const Eigen::Index n = op.n();
    const Matrix& u = op.u();
    const Matrix& u_inv = op.u_inv();

    auto objective = [&](const RealVector& logd) {
        const RealVector dv = logd.array().exp();
        const Matrix scaled = dv.asDiagonal() * u;
        const Matrix scaled_inv = u_inv * dv.cwiseInverse().asDiagonal();
        return opnorm_upper_bound(scaled, p) * opnorm_upper_bound(scaled_inv, p);
    };

    std::vector<RealVector> starts;
    starts.push_back(RealVector::Zero(n));
    // Balance row i of U against column i of U⁻¹.
    RealVector balanced(n);
    for (Eigen::Index i = 0; i < n; ++i)
        balanced[i] = 0.5 * (std::log(u_inv.col(i).norm()) - std::log(u.row(i).norm()));
    balanced.array() -= balanced[0];
    starts.push_back(balanced);
    Rng rng(derive_seed(cfg.seed, "diagonal_scaling", static_cast<std::uint64_t>(n)));
    std::normal_distribution<double> jitter(0.0, 0.5);
    for (int r = 2; r < cfg.scaling_restarts; ++r) {
        RealVector s = balanced;
        for (Eigen::Index i = 1; i < n; ++i) s[i] += jitter(rng);
        starts.push_back(s);
    }

    RealVector best_d = starts.front();
    double best = objective(best_d);
    for (RealVector d : starts) {
        double g = objective(d);
        double h = 1.0;
        for (int sweep = 0; sweep < cfg.scaling_sweeps && g > 1.0 + 1e-15; ++sweep) {
            bool improved = false;
            // d_0 fixes the gauge: K is invariant under a common rescaling.
            for (Eigen::Index i = 1; i < n; ++i) {
                for (double dir : {1.0, -1.0}) {
                    double step = h;
                    RealVector trial = d;
                    trial[i] += dir * step;
                    double gt = objective(trial);
                    if (!(gt < g)) continue;
                    do {
                        d = trial;
                        g = gt;
                        improved = true;
                        step *= 2.0;
                        trial[i] = d[i] + dir * step;
                        gt = objective(trial);
                    } while (gt < g);
                    break;
                }
            }
            if (!improved) {
                h *= 0.25;
                if (h < 1e-7) break;
            }
        }
        if (g < best) {
            best = g;
            best_d = d;
        }
    }

    std::ostringstream os;
    os << "D = diag(exp(";
    for (Eigen::Index i = 0; i < n; ++i) os << (i ? "," : "") << best_d[i];
    os << "))";
    return {best, Certainty::upper_bound, os.str()};
}

}  // namespace doilab
