#include "doilab/opnorm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "doilab/errors.hpp"
#include "doilab/random.hpp"

namespace doilab {

const char* to_string(Certainty c) noexcept {
    switch (c) {
        case Certainty::exact: return "exact";
        case Certainty::lower_bound: return "lower_bound";
        case Certainty::upper_bound: return "upper_bound";
    }
    return "unknown";
}

namespace {

Vector basis_vector(Eigen::Index n, Eigen::Index k) {
    Vector e = Vector::Zero(n);
    e[k] = 1.0;
    return e;
}

Vector normalized(const Vector& x, const Exponent& p) {
    const double nrm = vector_norm(x, p);
    return nrm > 0.0 ? Vector(x / nrm) : x;
}

NormEstimate max_column_norm(const Matrix& s, const Exponent& q) {
    NormEstimate est{0.0, Certainty::exact, basis_vector(s.cols(), 0), "max_column_norm"};
    for (Eigen::Index k = 0; k < s.cols(); ++k) {
        const double v = vector_norm(s.col(k), q);
        if (v > est.value) {
            est.value = v;
            est.witness = basis_vector(s.cols(), k);
        }
    }
    return est;
}

NormEstimate max_row_dual_norm(const Matrix& s, const Exponent& p) {
    const Exponent pstar = p.conjugate();
    NormEstimate est{0.0, Certainty::exact, basis_vector(s.cols(), 0), "max_row_dual_norm"};
    Eigen::Index best = -1;
    for (Eigen::Index j = 0; j < s.rows(); ++j) {
        const double v = vector_norm(s.row(j).transpose(), pstar);
        if (v > est.value) {
            est.value = v;
            best = j;
        }
    }
    if (best >= 0) {
        // Hölder equality case: x = J_{p*}(conj(row)).
        const Vector row = s.row(best).transpose().conjugate();
        const Vector x = p.is_infinite() ? duality_map(row, 1.0)
                                         : duality_map(row, pstar.value());
        est.witness = normalized(x, p);
    }
    return est;
}

NormEstimate spectral_norm(const Matrix& s) {
    Eigen::BDCSVD<Matrix> svd(s, Eigen::ComputeThinV);
    NormEstimate est{svd.singularValues()[0], Certainty::exact, svd.matrixV().col(0),
                     "singular_value"};
    return est;
}

}  // namespace

std::vector<Vector> multistart_vectors(Eigen::Index n, const SearchConfig& cfg) {
    const int total = std::max(1, cfg.restarts);
    std::vector<Vector> starts;
    starts.reserve(static_cast<std::size_t>(total));
    starts.push_back(Vector::Ones(n));
    const Eigen::Index basis = std::min<Eigen::Index>(n, std::max(0, total / 2 - 1));
    for (Eigen::Index k = 0; k < basis && static_cast<int>(starts.size()) < total; ++k)
        starts.push_back(basis_vector(n, k));
    Rng rng(derive_seed(cfg.seed, "multistart", static_cast<std::uint64_t>(n)));
    while (static_cast<int>(starts.size()) < total) starts.push_back(complex_gaussian(rng, n, 1).col(0));
    return starts;
}

PowerIterationResult power_iteration_pq(const Matrix& s, const Exponent& p, const Exponent& q,
                                        const Vector& x0, double tol, int max_iter) {
    require_valid(s, "power_iteration_pq");
    if (x0.size() != s.cols()) throw DomainError("power_iteration_pq: start vector has wrong size");
    if (p.is_one()) throw DomainError("power_iteration_pq: p = 1 is handled by the exact branch");
    if (q.is_infinite()) throw DomainError("power_iteration_pq: q = inf is handled by the exact branch");
    const double x0_norm = vector_norm(x0, p);
    if (!(x0_norm > 0.0)) throw DomainError("power_iteration_pq: start vector has zero p-norm");

    // J_{p*} exponent: p* - 1 = 1/(p-1); the phase map for p = ∞.
    const double dual_exp = p.is_infinite() ? 1.0 : p.conjugate().value();
    const double q_exp = q.value();

    PowerIterationResult res;
    Vector x = x0 / x0_norm;
    double f = vector_norm(s * x, q);
    res.history.push_back(f);
    res.value = f;
    res.witness = x;
    if (max_abs(s) == 0.0) {
        res.converged = true;
        return res;
    }
    for (int it = 1; it <= max_iter; ++it) {
        const Vector y = s * x;
        const Vector z = s.adjoint() * duality_map(y, q_exp);
        if (z.cwiseAbs().maxCoeff() == 0.0) {
            res.converged = true;
            break;
        }
        Vector next = duality_map(z, dual_exp);
        next /= vector_norm(next, p);
        const double f_next = vector_norm(s * next, q);
        res.iterations = it;
        if (f_next < f) {
            // Only rounding can decrease the objective; keep the better iterate.
            res.converged = true;
            break;
        }
        res.history.push_back(f_next);
        const bool small_step = (f_next - f) <= tol * f_next;
        x = std::move(next);
        f = f_next;
        res.value = f;
        res.witness = x;
        if (small_step) {
            res.converged = true;
            break;
        }
    }
    return res;
}

NormEstimate opnorm(const Matrix& s, const Exponent& p, const Exponent& q, const SearchConfig& cfg) {
    require_valid(s, "opnorm");
    if (p.is_one()) return max_column_norm(s, q);
    if (q.is_infinite()) return max_row_dual_norm(s, p);
    if (p.equals(2.0) && q.equals(2.0)) return spectral_norm(s);

    NormEstimate best{-1.0, Certainty::lower_bound, Vector(), "power_iteration"};
    bool all_converged = true;
    for (const Vector& x0 : multistart_vectors(s.cols(), cfg)) {
        PowerIterationResult r = power_iteration_pq(s, p, q, x0, cfg.iter_tol, cfg.max_iter);
        if (r.value > best.value) {
            best.value = r.value;
            best.witness = std::move(r.witness);
            all_converged = r.converged;
        }
    }
    if (!all_converged) best.method = "power_iteration(max_iter reached)";
    return best;
}

namespace {

// Point of the unit 2-sphere in R^n from n-1 hyperspherical angles.
void sphere_point(const std::vector<double>& angles, Eigen::VectorXd& u) {
    const std::size_t n = angles.size() + 1;
    double sin_prod = 1.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        u[static_cast<Eigen::Index>(i)] = sin_prod * std::cos(angles[i]);
        sin_prod *= std::sin(angles[i]);
    }
    u[static_cast<Eigen::Index>(n - 1)] = sin_prod;
}

}  // namespace

NormEstimate opnorm_bruteforce(const Matrix& s, const Exponent& p, const Exponent& q, int resolution) {
    require_valid(s, "opnorm_bruteforce");
    const Eigen::Index n = s.cols();

    if (p.is_infinite()) {
        if (!is_real(s)) throw DomainError("opnorm_bruteforce: p = inf branch requires a real matrix");
        if (n > 24) throw CapacityError("opnorm_bruteforce: sign enumeration limited to 24 columns");
        NormEstimate est{-1.0, Certainty::exact, Vector(), "sign_vector_enumeration"};
        // x and -x give the same norm, so fix x_0 = +1.
        const std::uint64_t count = std::uint64_t{1} << (n - 1);
        Vector x(n);
        for (std::uint64_t mask = 0; mask < count; ++mask) {
            x[0] = 1.0;
            for (Eigen::Index k = 1; k < n; ++k) x[k] = ((mask >> (k - 1)) & 1U) ? -1.0 : 1.0;
            const double v = vector_norm(s * x, q);
            if (v > est.value) {
                est.value = v;
                est.witness = x;
            }
        }
        return est;
    }

    if (n > 4) throw CapacityError("opnorm_bruteforce: grid search limited to 4 columns");
    if (resolution < 1) throw DomainError("opnorm_bruteforce: resolution must be positive");

    NormEstimate est{-1.0, n == 1 ? Certainty::exact : Certainty::lower_bound, Vector(),
                     "sphere_grid"};
    const double pv = p.value();
    const std::size_t dims = static_cast<std::size_t>(n - 1);
    std::vector<int> idx(dims, 0);
    std::vector<double> angles(dims, 0.0);
    Eigen::VectorXd u(n);
    Vector x(n);
    // Angles in [0, π]: the last one covers the half-sphere u_n >= 0, which
    // suffices because ‖S(-x)‖ = ‖Sx‖.
    const double step = std::numbers::pi / resolution;
    while (true) {
        for (std::size_t i = 0; i < dims; ++i) angles[i] = step * idx[i];
        sphere_point(angles, u);
        // Map the 2-sphere onto the p-sphere: |x_i|^p = u_i^2.
        for (Eigen::Index i = 0; i < n; ++i) {
            const double a = std::abs(u[i]);
            x[i] = (u[i] < 0 ? -1.0 : 1.0) * std::pow(a, 2.0 / pv);
        }
        const double xn = vector_norm(x, p);
        if (xn > 0.0) {
            const double v = vector_norm(s * x, q) / xn;
            if (v > est.value) {
                est.value = v;
                est.witness = x / xn;
            }
        }
        std::size_t d = 0;
        while (d < dims && ++idx[d] > resolution) idx[d++] = 0;
        if (d == dims) break;
    }
    if (dims == 0) {
        est.value = vector_norm(s.col(0), q);
        est.witness = Vector::Ones(1);
    }
    return est;
}

}  // namespace doilab

namespace doilab {

double opnorm_upper_bound(const Matrix& m, const Exponent& p) {
    require_valid(m, "opnorm_upper_bound");
    const double n1 = m.cwiseAbs().colwise().sum().maxCoeff();
    const double ninf = m.cwiseAbs().rowwise().sum().maxCoeff();
    if (p.is_one()) return n1;
    if (p.is_infinite()) return ninf;
    // Largest eigenvalue of MᴴM; cheaper than a full SVD and accurate for σ_max.
    const Matrix gram = m.rows() >= m.cols() ? Matrix(m.adjoint() * m) : Matrix(m * m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
    const double n2 = std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
    const double pv = p.value();
    if (pv == 2.0) return n2;
    const double inv = 1.0 / pv;
    // Interpolation between 1 and ∞ is always available.
    double bound = std::pow(n1, inv) * std::pow(ninf, 1.0 - inv);
    if (pv < 2.0) {
        const double theta = 2.0 * (1.0 - inv);  // 1/p = (1-θ)/1 + θ/2
        bound = std::min(bound, std::pow(n1, 1.0 - theta) * std::pow(n2, theta));
    } else {
        const double theta = 1.0 - 2.0 * inv;  // 1/p = (1-θ)/2 + θ/∞
        bound = std::min(bound, std::pow(n2, 1.0 - theta) * std::pow(ninf, theta));
    }
    return bound;
}

}  // namespace doilab
