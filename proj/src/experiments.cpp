#include "doilab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "doilab/doi.hpp"
#include "doilab/errors.hpp"
#include "doilab/opnorm.hpp"
#include "doilab/psumming.hpp"
#include "doilab/random.hpp"
#include "doilab/schur.hpp"
#include "doilab/spectral.hpp"

namespace doilab {

namespace {

constexpr const char* kTruncation = "truncation-growth";
constexpr const char* kCommutator = "commutator-ratios";
constexpr const char* kMixed = "p2q2-mixed";
constexpr const char* kPSumming = "psumming-check";
constexpr const char* kIdentity = "doi-identity";

// Runs task(i) for i in [0, count) on all hardware threads. Each task writes
// only its own slot, so the outcome does not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task) {
    const std::size_t workers =
        std::min<std::size_t>(count, std::max(1U, std::thread::hardware_concurrency()));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto loop = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                task(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        loop();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(loop);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
}

std::uint64_t cell_index(std::size_t group, int n, int trial) {
    return (static_cast<std::uint64_t>(group) << 40) ^ (static_cast<std::uint64_t>(n) << 20) ^
           static_cast<std::uint64_t>(trial);
}

// Searches inside experiments run with a smaller scaling budget: the samplers
// already guarantee K̂ <= kConditionCap at the identity scaling.
SearchConfig experiment_search(const ExperimentConfig& cfg, std::uint64_t seed) {
    SearchConfig s = cfg.search;
    s.seed = seed;
    s.scaling_restarts = 2;
    s.scaling_sweeps = 6;
    return s;
}

ResultRow make_row(const char* experiment, int n, std::optional<Exponent> p, std::optional<Exponent> q,
                   int trial, std::string metric, double value, std::string certainty, std::uint64_t seed) {
    return ResultRow{experiment, n, p, q, trial, std::move(metric), value, std::move(certainty), seed};
}

RealVector uniform_spectrum(Rng& rng, Eigen::Index n) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    RealVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = dist(rng);
    return v;
}

// A = U⁻¹ diag(λ) U with U = I + δG, rejected until the unscaled bound
// ‖U‖_p·‖U⁻¹‖_p (>= K̂) is at most kConditionCap.
std::optional<DiagonalizableOperator> sample_operator(Rng& rng, const RealVector& lambdas, const Exponent& p) {
    const Eigen::Index n = lambdas.size();
    double delta = 0.2 / static_cast<double>(n);
    for (int attempt = 0; attempt < 8; ++attempt) {
        const Matrix u = Matrix::Identity(n, n) + delta * complex_gaussian(rng, n, n);
        if (attempt % 2 == 1) delta *= 0.5;
        Matrix u_inv;
        try {
            u_inv = inverse(u);
        } catch (const DomainError&) {
            continue;
        }
        if (opnorm_upper_bound(u, p) * opnorm_upper_bound(u_inv, p) > kConditionCap) continue;
        try {
            return DiagonalizableOperator(lambdas.cast<Complex>(), u, u_inv);
        } catch (const DomainError&) {
            continue;
        }
    }
    return std::nullopt;
}

// Dense Gaussian S concentrates as n grows and misses the extremal
// directions, so trials cycle through dense, rank-one and single-entry S.
Matrix sample_witness(Rng& rng, int n, int trial) {
    switch (trial % 3) {
        case 1: return complex_gaussian(rng, n, n);
        case 2: return complex_gaussian(rng, n, 1) * complex_gaussian(rng, n, 1).adjoint();
        default: {
            std::uniform_int_distribution<int> pick(0, n - 1);
            Matrix s = Matrix::Zero(n, n);
            const int k = pick(rng);
            s(k, pick(rng)) = 1.0;
            return s;
        }
    }
}

std::string dump_instance(const std::string& what, const DiagonalizableOperator& a,
                          const DiagonalizableOperator& b, const Matrix& s) {
    const Eigen::IOFormat fmt(Eigen::FullPrecision, 0, ", ", ";\n", "[", "]", "[", "]");
    std::ostringstream os;
    os << what << "\nlambda_A =\n" << a.lambdas().transpose().format(fmt) << "\nU_A =\n"
       << a.u().format(fmt) << "\nlambda_B =\n" << b.lambdas().transpose().format(fmt) << "\nU_B =\n"
       << b.u().format(fmt) << "\nS =\n" << s.format(fmt) << '\n';
    return os.str();
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  ///< root-mean-square
};

LineFit fit_log(const std::vector<std::pair<int, double>>& points) {
    LineFit fit;
    const double m = static_cast<double>(points.size());
    if (points.empty()) return fit;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [n, v] : points) {
        const double x = std::log(static_cast<double>(n));
        sx += x;
        sy += v;
        sxx += x * x;
        sxy += x * v;
    }
    const double den = m * sxx - sx * sx;
    fit.slope = den > 0.0 ? (m * sxy - sx * sy) / den : 0.0;
    fit.intercept = (sy - fit.slope * sx) / m;
    double ss = 0.0;
    for (const auto& [n, v] : points) {
        const double r = v - (fit.slope * std::log(static_cast<double>(n)) + fit.intercept);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / m);
    return fit;
}

std::string pair_key(const Exponent& p, const Exponent& q) {
    return "(" + p.to_string() + "," + q.to_string() + ")";
}

}  // namespace

ExperimentResult run_truncation_growth(const ExperimentConfig& cfg) {
    struct Cell {
        std::size_t pair;
        int n;
    };
    std::vector<Cell> cells;
    for (std::size_t i = 0; i < cfg.pq_pairs.size(); ++i)
        for (int n : cfg.dims) cells.push_back({i, n});

    std::vector<ResultRow> slots(cells.size());
    parallel_for(cells.size(), [&](std::size_t c) {
        const auto& [p, q] = cfg.pq_pairs[cells[c].pair];
        const int n = cells[c].n;
        const std::uint64_t seed = derive_seed(cfg.seed, kTruncation, cell_index(cells[c].pair, n, 0));
        const MultiplierEstimate est =
            multiplier_norm({standard_truncation_mask(n), std::nullopt, std::nullopt}, p, q,
                            experiment_search(cfg, seed));
        slots[c] = make_row(kTruncation, n, p, q, 0, "multiplier_norm", est.value, to_string(est.certainty), seed);
    });

    ExperimentResult out;
    out.rows = slots;
    for (std::size_t i = 0; i < cfg.pq_pairs.size(); ++i) {
        const auto& [p, q] = cfg.pq_pairs[i];
        std::vector<std::pair<int, double>> points;
        double vmax = 0.0, vmin = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < cells.size(); ++c)
            if (cells[c].pair == i) {
                points.emplace_back(cells[c].n, slots[c].value);
                vmax = std::max(vmax, slots[c].value);
                vmin = std::min(vmin, slots[c].value);
            }
        const LineFit fit = fit_log(points);
        const bool growth_expected = !p.is_one() && !q.is_infinite() && q <= p;
        const bool law = growth_expected ? fit.slope > 0.0 : std::abs(fit.slope) <= cfg.tol * vmax;
        const double range = vmax > 0.0 ? (vmax - vmin) / vmax : 0.0;
        out.rows.push_back(make_row(kTruncation, 0, p, q, 0, "fit_slope", fit.slope, "derived", cfg.seed));
        out.rows.push_back(make_row(kTruncation, 0, p, q, 0, "fit_intercept", fit.intercept, "derived", cfg.seed));
        out.rows.push_back(make_row(kTruncation, 0, p, q, 0, "fit_residual", fit.residual, "derived", cfg.seed));
        out.rows.push_back(make_row(kTruncation, 0, p, q, 0, "range_fraction", range, "derived", cfg.seed));
        out.rows.push_back(make_row(kTruncation, 0, p, q, 0, "law_check", law ? 1.0 : 0.0, "derived", cfg.seed));
        out.summary[kTruncation][pair_key(p, q)] = {{"slope", fit.slope},
                                                    {"intercept", fit.intercept},
                                                    {"residual", fit.residual},
                                                    {"range_fraction", range},
                                                    {"growth_expected", growth_expected},
                                                    {"law_check", law}};
    }
    sort_rows(out.rows);
    return out;
}

namespace {

// λ_j = 2^{j-n} > 0, μ = −λ, U = V = I and BS − SA equal to the Hilbert-type
// matrix 1/(k−j). Then f(B)S − Sf(A) for f = |·| is close to the Schur
// product of that matrix with the sign pattern of k − j.
CommutatorReport adversarial_instance(int n, const SearchConfig& search) {
    Vector lambdas(n);
    for (int j = 0; j < n; ++j) lambdas[j] = std::ldexp(1.0, j + 1 - n);
    const Matrix r = hilbert_witness(n, n);
    Matrix s(n, n);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) s(k, j) = -r(k, j) / (lambdas[k] + lambdas[j]);
    const DiagonalizableOperator a(lambdas, Matrix::Identity(n, n), Matrix::Identity(n, n));
    const DiagonalizableOperator b(-lambdas, Matrix::Identity(n, n), Matrix::Identity(n, n));
    const Exponent two(2.0);
    return commutator_transform(a, b, s, abs_value(), two, two, search, ConstantsMode::diagonalizability);
}

}  // namespace

ExperimentResult run_commutator_ratios(const ExperimentConfig& cfg) {
    struct Cell {
        std::size_t pair;
        int n;
        int trial;  // 0 is the identity control
    };
    std::vector<Cell> cells;
    for (std::size_t i = 0; i < cfg.pq_pairs.size(); ++i)
        for (int n : cfg.dims)
            for (int t = 0; t <= cfg.trials; ++t) cells.push_back({i, n, t});

    std::vector<std::vector<ResultRow>> slots(cells.size());
    parallel_for(cells.size(), [&](std::size_t c) {
        const auto& [p, q] = cfg.pq_pairs[cells[c].pair];
        const int n = cells[c].n;
        const int trial = cells[c].trial;
        const std::uint64_t seed = derive_seed(cfg.seed, kCommutator, cell_index(cells[c].pair, n, trial));
        Rng rng(seed);
        auto& rows = slots[c];
        const auto a = sample_operator(rng, uniform_spectrum(rng, n), p);
        const auto b = sample_operator(rng, uniform_spectrum(rng, n), q);
        if (!a || !b) {
            rows.push_back(make_row(kCommutator, n, p, q, trial, "rejection_exhausted", 1.0, "flagged", seed));
            return;
        }
        const Matrix s = trial == 0 ? complex_gaussian(rng, n, n) : sample_witness(rng, n, trial);
        const SearchConfig search = experiment_search(cfg, seed);
        if (trial == 0) {
            const CommutatorReport rep =
                commutator_transform(*a, *b, s, identity_function(), p, q, search, ConstantsMode::none);
            const bool exact = rep.lhs_certainty == Certainty::exact && rep.rhs_certainty == Certainty::exact;
            rows.push_back(make_row(kCommutator, n, p, q, 0, "identity_control_ratio", rep.ratio,
                                    exact ? "exact" : "flagged", seed));
            return;
        }
        const CommutatorReport rep =
            commutator_transform(*a, *b, s, abs_value(), p, q, search, ConstantsMode::diagonalizability);
        const bool exact = rep.lhs_certainty == Certainty::exact && rep.rhs_certainty == Certainty::exact;
        const double k = rep.constants.k_a * rep.constants.k_b;
        rows.push_back(make_row(kCommutator, n, p, q, trial, "ratio", rep.ratio, exact ? "exact" : "flagged", seed));
        // Dividing by upper bounds for K_A, K_B gives a lower bound.
        rows.push_back(make_row(kCommutator, n, p, q, trial, "normalized_ratio", rep.ratio / k,
                                exact ? "lower_bound" : "flagged", seed));
        rows.push_back(make_row(kCommutator, n, p, q, trial, "k_a", rep.constants.k_a, "upper_bound", seed));
        rows.push_back(make_row(kCommutator, n, p, q, trial, "k_b", rep.constants.k_b, "upper_bound", seed));
    });

    // Adversarial (2,2) instances, one per dimension.
    std::vector<int> adversarial_dims;
    for (const auto& [p, q] : cfg.pq_pairs)
        if (p.equals(2.0) && q.equals(2.0)) adversarial_dims = cfg.dims;
    std::vector<ResultRow> adversarial(adversarial_dims.size());
    parallel_for(adversarial_dims.size(), [&](std::size_t i) {
        const int n = adversarial_dims[i];
        const std::uint64_t seed = derive_seed(cfg.seed, "commutator-adversarial", static_cast<std::uint64_t>(n));
        const CommutatorReport rep = adversarial_instance(n, experiment_search(cfg, seed));
        adversarial[i] = make_row(kCommutator, n, Exponent(2.0), Exponent(2.0), 0, "adversarial_normalized_ratio",
                                  rep.ratio / (rep.constants.k_a * rep.constants.k_b), "exact", seed);
    });

    ExperimentResult out;
    std::map<std::pair<std::size_t, int>, double> max_ratio;
    for (std::size_t c = 0; c < cells.size(); ++c)
        for (ResultRow& r : slots[c]) {
            if (r.metric == "normalized_ratio") {
                double& m = max_ratio[{cells[c].pair, cells[c].n}];
                m = std::max(m, r.value);
            }
            out.rows.push_back(std::move(r));
        }
    for (const auto& [key, value] : max_ratio) {
        const auto& [p, q] = cfg.pq_pairs[key.first];
        out.rows.push_back(make_row(kCommutator, key.second, p, q, 0, "max_normalized_ratio", value, "derived",
                                    cfg.seed));
        out.summary[kCommutator][pair_key(p, q)]["max_normalized_ratio"][std::to_string(key.second)] = value;
    }
    for (ResultRow& r : adversarial) {
        out.summary[kCommutator]["adversarial_(2,2)"][std::to_string(r.n)] = r.value;
        out.rows.push_back(std::move(r));
    }
    sort_rows(out.rows);
    return out;
}

ExperimentResult run_p2q2_mixed(const ExperimentConfig& cfg) {
    struct Cell {
        int n;
        int trial;
    };
    std::vector<Cell> cells;
    for (int n : cfg.dims)
        for (int t = 1; t <= cfg.trials; ++t) cells.push_back({n, t});

    const Exponent two(2.0);
    const Exponent lower(2.0 - cfg.eps);
    const Exponent upper(2.0 + cfg.eps);
    std::vector<std::vector<ResultRow>> slots(cells.size());
    parallel_for(cells.size(), [&](std::size_t c) {
        const int n = cells[c].n;
        const int trial = cells[c].trial;
        const std::uint64_t seed = derive_seed(cfg.seed, kMixed, cell_index(0, n, trial));
        Rng rng(seed);
        const Matrix u = random_unitary(rng, n);
        const Matrix v = random_unitary(rng, n);
        const DiagonalizableOperator a(uniform_spectrum(rng, n).cast<Complex>(), u, u.adjoint());
        const DiagonalizableOperator b(uniform_spectrum(rng, n).cast<Complex>(), v, v.adjoint());
        const SearchConfig search = experiment_search(cfg, seed);

        const Matrix diff_abs = functional_calculus(b, abs_value()) - functional_calculus(a, abs_value());
        const NormEstimate lhs = opnorm(diff_abs, two, two, search);
        const Matrix d = v * (assemble(b) - assemble(a)) * u.adjoint();
        const NormEstimate m1 = opnorm(d, two, lower, search);
        const NormEstimate m2 = opnorm(d, upper, two, search);
        const double mn = std::min(m1.value, m2.value);
        auto& rows = slots[c];
        rows.push_back(make_row(kMixed, n, two, two, trial, "lhs", lhs.value, to_string(lhs.certainty), seed));
        rows.push_back(make_row(kMixed, n, two, lower, trial, "mixed_norm", m1.value, to_string(m1.certainty), seed));
        rows.push_back(make_row(kMixed, n, upper, two, trial, "mixed_norm", m2.value, to_string(m2.certainty), seed));
        const bool bounded = m1.certainty != Certainty::upper_bound && m2.certainty != Certainty::upper_bound;
        rows.push_back(make_row(kMixed, n, two, two, trial, "implied_constant",
                                mn > 0.0 ? lhs.value / mn : std::numeric_limits<double>::infinity(),
                                mn > 0.0 && bounded ? "upper_bound" : "flagged", seed));
    });

    ExperimentResult out;
    std::map<int, double> worst;
    for (auto& rows : slots)
        for (ResultRow& r : rows) {
            if (r.metric == "implied_constant") worst[r.n] = std::max(worst[r.n], r.value);
            out.rows.push_back(std::move(r));
        }
    for (const auto& [n, value] : worst) out.summary[kMixed]["max_implied_constant"][std::to_string(n)] = value;
    out.summary[kMixed]["eps"] = cfg.eps;
    sort_rows(out.rows);
    return out;
}

ExperimentResult run_psumming_check(const ExperimentConfig& cfg) {
    std::vector<double> ps;
    for (const auto& [p, q] : cfg.pq_pairs)
        for (const Exponent& e : {p, q})
            if (e.is_finite() && e.value() > 1.0) ps.push_back(e.value());
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());

    struct Cell {
        std::size_t p_index;
        int n;
        int trial;  // 0 uses S = 0
    };
    std::vector<Cell> cells;
    for (std::size_t i = 0; i < ps.size(); ++i)
        for (int n : cfg.dims)
            for (int t = 0; t <= cfg.trials; ++t) cells.push_back({i, n, t});

    std::vector<std::vector<ResultRow>> rows(cells.size());
    std::vector<std::vector<std::string>> dumps(cells.size());
    parallel_for(cells.size(), [&](std::size_t c) {
        const PSummingContext ctx(ps[cells[c].p_index]);
        const int n = cells[c].n;
        const int trial = cells[c].trial;
        const std::uint64_t seed = derive_seed(cfg.seed, kPSumming, cell_index(cells[c].p_index, n, trial));
        Rng rng(seed);
        const Exponent pstar = ctx.domain();
        const Exponent p = ctx.codomain();
        const auto a = sample_operator(rng, uniform_spectrum(rng, n), pstar);
        const auto b = sample_operator(rng, uniform_spectrum(rng, n), p);
        if (!a || !b) {
            rows[c].push_back(make_row(kPSumming, n, pstar, p, trial, "rejection_exhausted", 1.0, "flagged", seed));
            return;
        }
        const Matrix s = trial == 0 ? Matrix::Zero(n, n) : complex_gaussian(rng, n, n);
        const SearchConfig search = experiment_search(cfg, seed);
        const double k_a = diagonalizability_constant(*a, pstar, search).value;
        const double k_b = diagonalizability_constant(*b, p, search).value;
        for (const ScalarFunction& f : {abs_value(), identity_function()}) {
            const LipschitzCheck chk = lipschitz_commutator_check(*a, *b, s, f, 1.0, ctx, k_a, k_b);
            const std::string prefix = f.name + "_";
            rows[c].push_back(make_row(kPSumming, n, pstar, p, trial, prefix + "satisfied",
                                       chk.satisfied ? 1.0 : 0.0, "derived", seed));
            rows[c].push_back(make_row(kPSumming, n, pstar, p, trial, prefix + "tightness",
                                       chk.bound > 0.0 ? chk.lhs / chk.bound : 0.0, "lower_bound", seed));
            if (!chk.satisfied) {
                std::ostringstream what;
                what.precision(17);
                what << "psumming-check violation: f=" << f.name << " p=" << ctx.p() << " n=" << n
                     << " trial=" << trial << " seed=" << seed << " lhs=" << chk.lhs << " bound=" << chk.bound
                     << " K_A=" << k_a << " K_B=" << k_b;
                dumps[c].push_back(dump_instance(what.str(), *a, *b, s));
            }
        }
    });

    ExperimentResult out;
    std::size_t checked = 0, satisfied = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        for (ResultRow& r : rows[c]) {
            if (r.metric.size() > 10 && r.metric.ends_with("_satisfied")) {
                ++checked;
                satisfied += r.value == 1.0 ? 1 : 0;
            }
            out.rows.push_back(std::move(r));
        }
        for (std::string& d : dumps[c]) out.violations.push_back(std::move(d));
    }
    out.summary[kPSumming] = {{"checked", checked}, {"satisfied", satisfied}, {"p_values", ps}};
    sort_rows(out.rows);
    return out;
}

namespace {

enum class CollisionKind { none, repeated, shared, equal };

CollisionKind collision_kind(int trial) {
    switch (trial % 4) {
        case 1: return CollisionKind::repeated;
        case 2: return CollisionKind::shared;
        case 3: return CollisionKind::equal;
        default: return CollisionKind::none;
    }
}

RealVector with_repeats(Rng& rng, Eigen::Index n) {
    const Eigen::Index distinct = std::max<Eigen::Index>(1, n / 2);
    const RealVector values = uniform_spectrum(rng, distinct);
    std::uniform_int_distribution<Eigen::Index> pick(0, distinct - 1);
    RealVector out(n);
    for (Eigen::Index i = 0; i < n; ++i) out[i] = values[pick(rng)];
    return out;
}

DiagonalizableOperator identity_operator(Rng& rng, const RealVector& lambdas) {
    const Eigen::Index n = lambdas.size();
    const double delta = 0.3 / std::sqrt(static_cast<double>(n));
    for (;;) {
        const Matrix u = Matrix::Identity(n, n) + delta * complex_gaussian(rng, n, n);
        try {
            return DiagonalizableOperator(lambdas.cast<Complex>(), u);
        } catch (const DomainError&) {
        }
    }
}

}  // namespace

ExperimentResult run_doi_identity(const ExperimentConfig& cfg) {
    struct Cell {
        int n;
        int trial;  // 0 is the f = identity control
    };
    std::vector<Cell> cells;
    for (int n : cfg.dims)
        for (int t = 0; t <= cfg.trials; ++t) cells.push_back({n, t});

    std::vector<std::vector<ResultRow>> rows(cells.size());
    std::vector<std::string> dumps(cells.size());
    const Exponent one(1.0);
    parallel_for(cells.size(), [&](std::size_t c) {
        const int n = cells[c].n;
        const int trial = cells[c].trial;
        const std::uint64_t seed = derive_seed(cfg.seed, kIdentity, cell_index(0, n, trial));
        Rng rng(seed);
        const CollisionKind kind = trial == 0 ? CollisionKind::none : collision_kind(trial);
        RealVector lambdas, mus;
        switch (kind) {
            case CollisionKind::none:
                lambdas = uniform_spectrum(rng, n);
                mus = uniform_spectrum(rng, n);
                break;
            case CollisionKind::repeated:
                lambdas = with_repeats(rng, n);
                mus = with_repeats(rng, n);
                break;
            case CollisionKind::shared: {
                lambdas = uniform_spectrum(rng, n);
                mus = uniform_spectrum(rng, n);
                std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
                for (Eigen::Index i = 0; i < std::max<Eigen::Index>(1, n / 2); ++i) mus[pick(rng)] = lambdas[pick(rng)];
                break;
            }
            case CollisionKind::equal:
                lambdas = with_repeats(rng, n);
                mus = lambdas;
                break;
        }
        const DiagonalizableOperator a = identity_operator(rng, lambdas);
        const DiagonalizableOperator b = identity_operator(rng, mus);
        const Matrix s = complex_gaussian(rng, n, n);
        const ScalarFunction f = trial == 0 ? identity_function() : abs_value();
        const CommutatorReport rep =
            commutator_transform(a, b, s, f, one, one, experiment_search(cfg, seed), ConstantsMode::none);
        rows[c].push_back(make_row(kIdentity, n, std::nullopt, std::nullopt, trial, "identity_residual",
                                   rep.identity_residual, "exact", seed));
        rows[c].push_back(make_row(kIdentity, n, std::nullopt, std::nullopt, trial, "residual_budget",
                                   1e-9 * rep.identity_scale, "derived", seed));
        rows[c].push_back(make_row(kIdentity, n, std::nullopt, std::nullopt, trial, "collision",
                                   kind == CollisionKind::none ? 0.0 : 1.0, "derived", seed));
        if (!rep.identity_holds()) {
            std::ostringstream what;
            what.precision(17);
            what << "doi-identity violation: f=" << f.name << " n=" << n << " trial=" << trial << " seed=" << seed
                 << " residual=" << rep.identity_residual << " budget=" << 1e-9 * rep.identity_scale;
            dumps[c] = dump_instance(what.str(), a, b, s);
        }
    });

    ExperimentResult out;
    std::size_t collisions = 0;
    double worst = 0.0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        double residual = 0.0, budget = 1.0;
        for (ResultRow& r : rows[c]) {
            if (r.metric == "collision") collisions += r.value == 1.0 ? 1 : 0;
            if (r.metric == "identity_residual") residual = r.value;
            if (r.metric == "residual_budget") budget = r.value;
            out.rows.push_back(std::move(r));
        }
        worst = std::max(worst, residual / budget);
        if (!dumps[c].empty()) out.violations.push_back(std::move(dumps[c]));
    }
    out.summary[kIdentity] = {{"instances", cells.size()},
                              {"collision_instances", collisions},
                              {"max_residual_over_budget", worst}};
    sort_rows(out.rows);
    return out;
}

ExperimentResult run_all(const ExperimentConfig& cfg) {
    ExperimentResult out = run_truncation_growth(cfg);
    out.append(run_commutator_ratios(cfg));
    out.append(run_p2q2_mixed(cfg));
    out.append(run_psumming_check(cfg));
    out.append(run_doi_identity(cfg));
    sort_rows(out.rows);
    return out;
}

}  // namespace doilab
