#include <gtest/gtest.h>

#include <cmath>

#include "doilab/errors.hpp"
#include "doilab/spectral.hpp"
#include "test_support.hpp"

namespace doilab {
namespace {

using testing::hadamard2;

const Exponent kTwo(2.0);

Vector vec(std::initializer_list<Complex> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (Complex z : v) out[i++] = z;
    return out;
}

double max_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

// Well-conditioned random operator: U = I + 0.3·G/√n.
DiagonalizableOperator random_operator(Rng& rng, Eigen::Index n, bool repeated = false) {
    Vector lambdas = complex_gaussian(rng, n, 1).col(0);
    if (repeated)
        for (Eigen::Index i = 1; i < n; i += 2) lambdas[i] = lambdas[i - 1];
    const Matrix u = Matrix::Identity(n, n) + (0.3 / std::sqrt(double(n))) * complex_gaussian(rng, n, n);
    return DiagonalizableOperator(lambdas, u);
}

TEST(Assemble, Examples) {
    const DiagonalizableOperator d(vec({1, 2}), Matrix::Identity(2, 2));
    Matrix expected = Matrix::Zero(2, 2);
    expected(0, 0) = 1;
    expected(1, 1) = 2;
    EXPECT_EQ(assemble(d), expected);

    const DiagonalizableOperator h(vec({1, -1}), hadamard2());
    Matrix swap(2, 2);
    swap << 0, 1, 1, 0;
    EXPECT_LE(max_diff(assemble(h), swap), 1e-15);

    Rng rng(2);
    const DiagonalizableOperator z(vec({0, 0}), Matrix::Identity(2, 2) + 0.2 * complex_gaussian(rng, 2, 2));
    EXPECT_EQ(max_diff(assemble(z), Matrix::Zero(2, 2)), 0.0);
}

TEST(Operator, ValidatesInverse) {
    EXPECT_THROW(DiagonalizableOperator(vec({1, 2}), Matrix::Ones(2, 2)), DomainError);
    EXPECT_THROW(DiagonalizableOperator(vec({1, 2}), Matrix::Identity(2, 2), 2.0 * Matrix::Identity(2, 2)),
                 DomainError);
    EXPECT_THROW(DiagonalizableOperator(vec({1, 2, 3}), Matrix::Identity(2, 2)), DomainError);
    EXPECT_THROW(DiagonalizableOperator(Vector(), Matrix()), DomainError);
}

TEST(Operator, FromMatrixDiagonalizes) {
    Rng rng(8);
    const Matrix a = complex_gaussian(rng, 5, 5);
    const DiagonalizableOperator op = DiagonalizableOperator::from_matrix(a);
    EXPECT_LE(max_diff(assemble(op), a), 1e-10);
    const Matrix d = op.u() * a * op.u_inv();
    EXPECT_LE(max_diff(d, Matrix(op.lambdas().asDiagonal())), 1e-10);
}

TEST(FunctionalCalculus, Examples) {
    Rng rng(4);
    const DiagonalizableOperator op = random_operator(rng, 4);
    EXPECT_LE(max_diff(functional_calculus(op, identity_function()), assemble(op)), 1e-14);

    const DiagonalizableOperator d(vec({1, -1}), Matrix::Identity(2, 2));
    EXPECT_EQ(functional_calculus(d, abs_value()), Matrix(Matrix::Identity(2, 2)));

    // |A| = sqrt(AᴴA) = I for the swap matrix.
    const DiagonalizableOperator h(vec({1, -1}), hadamard2());
    EXPECT_LE(max_diff(functional_calculus(h, abs_value()), Matrix::Identity(2, 2)), 1e-15);
}

TEST(FunctionalCalculus, RejectsUndefinedValues) {
    const DiagonalizableOperator d(vec({0, 1}), Matrix::Identity(2, 2));
    EXPECT_THROW(functional_calculus(d, [](Complex z) { return 1.0 / z; }), DomainError);
}

TEST(FunctionalCalculus, IsMultiplicative) {
    Rng rng(12);
    auto f = [](Complex z) { return 1.0 + 2.0 * z - z * z; };
    auto g = [](Complex z) { return Complex(0.5, -1) + z * z * z; };
    for (int t = 0; t < 20; ++t) {
        const DiagonalizableOperator op = random_operator(rng, 2 + t % 6, t % 2 == 1);
        const Matrix fg = functional_calculus(op, [&](Complex z) { return f(z) * g(z); });
        EXPECT_LE(max_diff(fg, functional_calculus(op, f) * functional_calculus(op, g)), 1e-9);
    }
}

TEST(SpectralProjection, Examples) {
    Rng rng(6);
    const DiagonalizableOperator op = random_operator(rng, 3);
    EXPECT_LE(max_diff(spectral_projection(op, {0, 1, 2}), Matrix::Identity(3, 3)), 1e-12);
    EXPECT_EQ(spectral_projection(op, {}), Matrix(Matrix::Zero(3, 3)));

    const DiagonalizableOperator h(vec({1, -1}), hadamard2());
    EXPECT_LE(max_diff(spectral_projection(h, {0}), 0.5 * Matrix::Ones(2, 2)), 1e-15);
}

TEST(SpectralProjection, RejectsSplitEigenvalues) {
    const DiagonalizableOperator op(vec({1, 1, 2}), Matrix::Identity(3, 3));
    EXPECT_THROW(spectral_projection(op, {0}), DomainError);
    EXPECT_THROW(spectral_projection(op, {5}), DomainError);
    EXPECT_NO_THROW(spectral_projection(op, {0, 1}));
}

TEST(SpectralProjection, IndicatorCalculusAndMultiplicativity) {
    Rng rng(10);
    for (int t = 0; t < 20; ++t) {
        const DiagonalizableOperator op = random_operator(rng, 6, t % 2 == 0);
        const auto groups = op.eigenvalue_groups();
        auto union_of = [&](unsigned mask) {
            std::vector<std::size_t> s;
            for (std::size_t g = 0; g < groups.size(); ++g)
                if ((mask >> g) & 1U) s.insert(s.end(), groups[g].begin(), groups[g].end());
            std::sort(s.begin(), s.end());
            return s;
        };
        const unsigned full = (1U << groups.size()) - 1;
        const unsigned a = (7U * t + 3) & full;
        const unsigned b = (5U * t + 6) & full;
        const Matrix ea = spectral_projection(op, union_of(a));
        const Matrix eb = spectral_projection(op, union_of(b));
        EXPECT_LE(max_diff(ea * ea, ea), 1e-9);
        EXPECT_LE(max_diff(ea * eb, spectral_projection(op, union_of(a & b))), 1e-9);
        // Indicator function of the same set through the functional calculus.
        const auto sigma = union_of(a);
        const Matrix via_f = functional_calculus(op, [&](Complex z) {
            for (std::size_t j : sigma)
                if (op.lambdas()[static_cast<Eigen::Index>(j)] == z) return Complex(1.0);
            return Complex(0.0);
        });
        EXPECT_EQ(via_f, ea);
    }
}

TEST(SpectralConstant, Examples) {
    Rng rng(3);
    const DiagonalizableOperator d(complex_gaussian(rng, 5, 1).col(0), Matrix::Identity(5, 5));
    for (double p : {1.0, 1.5, 2.0, 4.0}) EXPECT_NEAR(spectral_constant(d, Exponent(p)).value, 1.0, 1e-12);
    EXPECT_NEAR(spectral_constant(d, Exponent::infinity()).value, 1.0, 1e-12);

    const DiagonalizableOperator unitary(complex_gaussian(rng, 4, 1).col(0), random_unitary(rng, 4));
    const ConstantEstimate nu = spectral_constant(unitary, kTwo);
    EXPECT_NEAR(nu.value, 1.0, 1e-9);
    EXPECT_EQ(nu.certainty, Certainty::exact);
}

// E({1}) = [[1,1],[0,0]] has singular values √2 and 0 (SVD oracle on the
// 2×2 projection); E({-1}) = [[0,-1],[0,1]] has the same norm.
TEST(SpectralConstant, ObliqueProjection) {
    Matrix u(2, 2);
    u << 1, 1, 0, 1;
    const DiagonalizableOperator op(vec({1, -1}), u);
    Matrix expected(2, 2);
    expected << 1, 1, 0, 0;
    EXPECT_LE(max_diff(spectral_projection(op, {0}), expected), 1e-15);
    Eigen::JacobiSVD<Matrix> svd(expected);
    EXPECT_NEAR(svd.singularValues()[0], std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(spectral_constant(op, kTwo).value, std::sqrt(2.0), 1e-12);
}

TEST(SpectralConstant, SampledBeyondCap) {
    Rng rng(21);
    const DiagonalizableOperator op = random_operator(rng, 7);
    SearchConfig cfg;
    cfg.exhaustive_cap = 3;
    cfg.subset_samples = 64;
    const ConstantEstimate sampled = spectral_constant(op, kTwo, cfg);
    EXPECT_EQ(sampled.certainty, Certainty::lower_bound);
    EXPECT_LE(sampled.value, spectral_constant(op, kTwo).value + 1e-12);
}

TEST(DiagonalizabilityConstant, Examples) {
    Rng rng(5);
    EXPECT_NEAR(diagonalizability_constant(DiagonalizableOperator(vec({1, 2, 3}), Matrix::Identity(3, 3)), kTwo).value,
                1.0, 1e-12);
    const DiagonalizableOperator unitary(complex_gaussian(rng, 4, 1).col(0), random_unitary(rng, 4));
    EXPECT_NEAR(diagonalizability_constant(unitary, kTwo).value, 1.0, 1e-9);

    Matrix scaled = Matrix::Zero(2, 2);
    scaled(0, 0) = 1;
    scaled(1, 1) = 10;
    const ConstantEstimate k = diagonalizability_constant(DiagonalizableOperator(vec({1, 2}), scaled), kTwo);
    EXPECT_NEAR(k.value, 1.0, 1e-9);
    EXPECT_EQ(k.certainty, Certainty::upper_bound);
}

TEST(DiagonalizabilityConstant, ImprovesOnUnscaledCondition) {
    Rng rng(17);
    for (int t = 0; t < 10; ++t) {
        const Eigen::Index n = 4;
        RealVector d = RealVector::Random(n).array().exp().matrix() * 5.0;
        const Matrix u = d.cast<Complex>().asDiagonal() * (Matrix::Identity(n, n) + 0.2 * complex_gaussian(rng, n, n));
        const DiagonalizableOperator op(complex_gaussian(rng, n, 1).col(0), u);
        for (double p : {1.0, 2.0, 3.0}) {
            const Exponent e(p);
            const double k = diagonalizability_constant(op, e).value;
            EXPECT_GE(k, 1.0 - 1e-12);
            EXPECT_LE(k, opnorm_upper_bound(u, e) * opnorm_upper_bound(op.u_inv(), e) + 1e-12);
        }
    }
}

TEST(Constants, SpectralBelowDiagonalizability) {
    Rng rng(23);
    for (int t = 0; t < 40; ++t) {
        const DiagonalizableOperator op = random_operator(rng, 2 + t % 5, t % 3 == 0);
        for (double p : {1.0, 1.5, 2.0, 3.0}) {
            const Exponent e(p);
            EXPECT_LE(spectral_constant(op, e).value, diagonalizability_constant(op, e).value + 1e-9);
        }
    }
}

}  // namespace
}  // namespace doilab
