#include "doilab/schur.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "doilab/errors.hpp"
#include "doilab/random.hpp"

namespace doilab {

Matrix schur_product(const Matrix& m, const Matrix& s) {
    if (m.rows() != s.rows() || m.cols() != s.cols())
        throw DomainError("schur_product: shape mismatch");
    return m.cwiseProduct(s);
}

Matrix divided_difference_matrix(const ScalarFunction& f, const Vector& lambdas, const Vector& mus) {
    Matrix phi(mus.size(), lambdas.size());
    Vector f_lambda(lambdas.size());
    Vector f_mu(mus.size());
    for (Eigen::Index j = 0; j < lambdas.size(); ++j) f_lambda[j] = f.eval(lambdas[j]);
    for (Eigen::Index k = 0; k < mus.size(); ++k) f_mu[k] = f.eval(mus[k]);
    if (!f_lambda.allFinite() || !f_mu.allFinite())
        throw DomainError("divided_difference_matrix: f undefined on the given points");
    for (Eigen::Index j = 0; j < lambdas.size(); ++j)
        for (Eigen::Index k = 0; k < mus.size(); ++k)
            phi(k, j) = mus[k] == lambdas[j] ? f.diagonal(lambdas[j])
                                             : (f_mu[k] - f_lambda[j]) / (mus[k] - lambdas[j]);
    return phi;
}

Matrix standard_truncation_mask(Eigen::Index n) {
    Matrix m = Matrix::Zero(n, n);
    m.triangularView<Eigen::Upper>().setOnes();
    return m;
}

Matrix standard_truncation(const Matrix& s, Eigen::Index n) {
    if (n < 1 || n > std::min(s.rows(), s.cols()))
        throw DomainError("standard_truncation: n out of range");
    Matrix out = Matrix::Zero(s.rows(), s.cols());
    out.topLeftCorner(n, n).triangularView<Eigen::Upper>() = s.topLeftCorner(n, n);
    return out;
}

Matrix sequence_truncation_mask(const RealVector& lambdas, const RealVector& mus, Eigen::Index n) {
    if (n < 0 || lambdas.size() < n || mus.size() < n)
        throw DomainError("sequence_truncation: sequences shorter than n");
    Matrix m(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n; ++k) m(k, j) = mus[k] <= lambdas[j] ? 1.0 : 0.0;
    return m;
}

Matrix sequence_truncation(const Matrix& s, const RealVector& lambdas, const RealVector& mus,
                           Eigen::Index n) {
    if (s.rows() < n || s.cols() < n) throw DomainError("sequence_truncation: matrix smaller than n");
    Matrix out = Matrix::Zero(s.rows(), s.cols());
    out.topLeftCorner(n, n) = sequence_truncation_mask(lambdas, mus, n).cwiseProduct(s.topLeftCorner(n, n));
    return out;
}

StaircaseDescriptor canonicalize_mask(const RealVector& lambdas, const RealVector& mus) {
    // Merge both sequences in increasing order; at ties μ precedes λ because
    // μ_k <= λ_j holds with equality. Consecutive runs of μ's (rows) and λ's
    // (columns) share a row, resp. column, pattern.
    enum Tag { kRow = 0, kCol = 1 };
    std::vector<std::tuple<double, int, Eigen::Index>> merged;
    for (Eigen::Index k = 0; k < mus.size(); ++k) merged.emplace_back(mus[k], kRow, k);
    for (Eigen::Index j = 0; j < lambdas.size(); ++j) merged.emplace_back(lambdas[j], kCol, j);
    std::sort(merged.begin(), merged.end());

    struct Step {
        std::vector<Eigen::Index> rows;
        std::vector<Eigen::Index> cols;
    };
    std::vector<Step> steps;
    int prev = -1;
    for (const auto& [value, tag, index] : merged) {
        if (tag == kRow) {
            if (prev != kRow) steps.push_back({});
            steps.back().rows.push_back(index);
        } else {
            // A column run closes the step opened by the preceding row run;
            // a leading column run gets a step of its own.
            if (steps.empty()) steps.push_back({});
            steps.back().cols.push_back(index);
        }
        prev = tag;
    }

    const std::size_t limit = static_cast<std::size_t>(std::max(lambdas.size(), mus.size()));
    if (steps.size() > limit && !steps.empty() && steps.front().rows.empty())
        steps.erase(steps.begin());  // all-zero columns
    if (steps.size() > limit && !steps.empty() && steps.back().cols.empty())
        steps.pop_back();  // all-zero rows

    StaircaseDescriptor d;
    d.n = static_cast<int>(steps.size());
    d.row_map.assign(static_cast<std::size_t>(mus.size()), 0);
    d.col_map.assign(static_cast<std::size_t>(lambdas.size()), 0);
    for (std::size_t t = 0; t < steps.size(); ++t) {
        for (Eigen::Index k : steps[t].rows) d.row_map[static_cast<std::size_t>(k)] = static_cast<int>(t + 1);
        for (Eigen::Index j : steps[t].cols) d.col_map[static_cast<std::size_t>(j)] = static_cast<int>(t + 1);
    }
    return d;
}

Matrix reconstruct_mask(const StaircaseDescriptor& d) {
    const auto rows = static_cast<Eigen::Index>(d.row_map.size());
    const auto cols = static_cast<Eigen::Index>(d.col_map.size());
    Matrix m = Matrix::Zero(rows, cols);
    for (Eigen::Index k = 0; k < rows; ++k)
        for (Eigen::Index j = 0; j < cols; ++j) {
            const int r = d.row_map[static_cast<std::size_t>(k)];
            const int c = d.col_map[static_cast<std::size_t>(j)];
            if (r > 0 && c > 0 && r <= c) m(k, j) = 1.0;
        }
    return m;
}

Matrix repeat_first_column(const Matrix& m) {
    if (m.size() == 0) throw DomainError("repeat_first_column: empty matrix");
    Matrix out(m.rows(), m.cols() + 1);
    out.col(0) = m.col(0);
    out.rightCols(m.cols()) = m;
    return out;
}

Matrix hilbert_witness(Eigen::Index rows, Eigen::Index cols) {
    Matrix h = Matrix::Zero(rows, cols);
    for (Eigen::Index j = 0; j < rows; ++j)
        for (Eigen::Index k = 0; k < cols; ++k)
            if (j != k) h(j, k) = 1.0 / static_cast<double>(j - k);
    return h;
}

namespace {

struct Ratio {
    double value = -1.0;
    NormEstimate num;
    NormEstimate den;
};

Ratio evaluate_ratio(const Matrix& m, const Matrix& s, const Exponent& p, const Exponent& q,
                     const SearchConfig& cfg) {
    Ratio r;
    r.den = opnorm(s, p, q, cfg);
    if (!(r.den.value > 0.0)) return r;
    r.num = opnorm(m.cwiseProduct(s), p, q, cfg);
    r.value = r.num.value / r.den.value;
    return r;
}

// Rank-one direction w·xᴴ along which Re⟨(N)x, w⟩ grows, where x is the
// domain witness of N and w = J_q(Nx) is its norming functional.
Matrix norming_direction(const Matrix& n, const Vector& x, const Exponent& q) {
    const Vector y = n * x;
    const Vector w = q.is_infinite() ? Vector(y.unaryExpr([](Complex z) { return phase(z); }))
                                     : duality_map(y, q.value());
    return w * x.adjoint();
}

// Partial isometry U·Vᴴ from the nonzero singular triples of g; it maximizes
// Re tr(gᴴS) over ‖S‖_{2->2} <= 1.
Matrix polar_factor(const Matrix& g) {
    Eigen::BDCSVD<Matrix> svd(g, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    Eigen::Index r = 0;
    while (r < sv.size() && sv[r] > sv[0] * 1e-12) ++r;
    return svd.matrixU().leftCols(r) * svd.matrixV().leftCols(r).adjoint();
}

// Conditional-gradient ascent of the convex map S -> ‖M∗S‖_{2->2} on the unit
// ball: each step moves to the polar factor of the gradient M̄∗(u·vᴴ), which
// never decreases the objective.
Ratio polar_ascent(const Matrix& m, Matrix& s, Ratio cur, const SearchConfig& cfg) {
    const Exponent two(2.0);
    for (int it = 0; it < cfg.polar_steps; ++it) {
        const Vector u = m.cwiseProduct(s) * cur.num.witness;
        if (u.norm() == 0.0) break;
        const Matrix g = m.conjugate().cwiseProduct((u / u.norm()) * cur.num.witness.adjoint());
        Matrix next = polar_factor(g);
        Ratio r = evaluate_ratio(m, next, two, two, cfg);
        if (!(r.value > cur.value)) break;
        const bool small = r.value - cur.value <= cfg.iter_tol * r.value;
        cur = std::move(r);
        s = std::move(next);
        if (small) break;
    }
    return cur;
}

}  // namespace

MultiplierEstimate multiplier_norm(const MultiplierMask& mask, const Exponent& p, const Exponent& q,
                                   const SearchConfig& cfg, const std::vector<Matrix>& extra_witnesses) {
    const Matrix& m = mask.m;
    require_valid(m, "multiplier_norm");

    Eigen::Index jmax = 0, kmax = 0;
    const double entry_max = m.cwiseAbs().maxCoeff(&jmax, &kmax);
    MultiplierEstimate best;
    best.value = entry_max;
    best.witness = Matrix::Zero(m.rows(), m.cols());
    best.witness(jmax, kmax) = 1.0;
    best.method = "max_entry";
    if (p.is_one() || q.is_infinite()) {
        best.certainty = Certainty::exact;
        return best;
    }
    best.certainty = Certainty::lower_bound;

    std::vector<Matrix> library;
    library.push_back(hilbert_witness(m.rows(), m.cols()));
    library.push_back(Matrix::Ones(m.rows(), m.cols()));
    Rng rng(derive_seed(cfg.seed, "multiplier_witness",
                        static_cast<std::uint64_t>(m.rows() * 1000003 + m.cols())));
    for (int r = 2; r < cfg.multiplier_restarts; ++r) library.push_back(complex_gaussian(rng, m.rows(), m.cols()));
    for (const Matrix& w : extra_witnesses) {
        if (w.rows() != m.rows() || w.cols() != m.cols())
            throw DomainError("multiplier_norm: extra witness has the wrong shape");
        library.push_back(w);
    }

    for (std::size_t w = 0; w < library.size(); ++w) {
        Matrix s = library[w];
        if (max_abs(s) == 0.0) continue;
        Ratio cur = evaluate_ratio(m, s, p, q, cfg);
        if (cur.value < 0.0) continue;
        if (p.equals(2.0) && q.equals(2.0)) cur = polar_ascent(m, s, std::move(cur), cfg);
        double eta = 0.5;
        for (int step = 0; step < cfg.ascent_steps && eta > 1e-4; ++step) {
            const double scale = s.norm();
            std::vector<Matrix> moves;
            // Grow the multiplied matrix along its norming direction.
            Matrix g = m.conjugate().cwiseProduct(norming_direction(m.cwiseProduct(s), cur.num.witness, q));
            if (g.norm() > 0.0) moves.push_back(s + (eta * scale / g.norm()) * g);
            // Shrink S along its own norming direction.
            Matrix h = norming_direction(s, cur.den.witness, q);
            if (h.norm() > 0.0) moves.push_back(s - (eta * scale / h.norm()) * h);
            Matrix noise = complex_gaussian(rng, m.rows(), m.cols());
            moves.push_back(s + (eta * scale / noise.norm()) * noise);

            bool accepted = false;
            for (const Matrix& cand : moves) {
                Ratio r = evaluate_ratio(m, cand, p, q, cfg);
                if (r.value > cur.value) {
                    cur = std::move(r);
                    s = cand;
                    accepted = true;
                }
            }
            if (!accepted) eta *= 0.5;
        }
        if (cur.value > best.value) {
            best.value = cur.value;
            best.witness = s;
            best.method = "ratio_ascent";
        }
    }
    return best;
}

}  // namespace doilab
