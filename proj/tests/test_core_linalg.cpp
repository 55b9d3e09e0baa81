#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "doilab/errors.hpp"
#include "doilab/exponent.hpp"
#include "doilab/linalg.hpp"
#include "doilab/opnorm.hpp"
#include "test_support.hpp"

namespace doilab {
namespace {

using testing::rel_diff;

const Exponent kOne(1.0);
const Exponent kTwo(2.0);
const Exponent kInf = Exponent::infinity();

TEST(Exponent, ParsesAndConjugates) {
    EXPECT_TRUE(Exponent::parse("inf").is_infinite());
    EXPECT_TRUE(Exponent::parse("∞").is_infinite());
    EXPECT_EQ(Exponent::parse("2.5").value(), 2.5);
    EXPECT_EQ(kOne.conjugate(), kInf);
    EXPECT_EQ(kInf.conjugate(), kOne);
    EXPECT_DOUBLE_EQ(Exponent(3.0).conjugate().value(), 1.5);
    for (double p : {1.0, 1.25, 2.0, 3.0, 7.5}) {
        const Exponent e(p);
        EXPECT_NEAR(e.conjugate().conjugate().value(), p, 1e-12);
        EXPECT_NEAR(e.reciprocal() + e.conjugate().reciprocal(), 1.0, 1e-12);
    }
    EXPECT_EQ(Exponent(1.5).to_string(), "1.5");
    EXPECT_EQ(kInf.to_string(), "inf");
}

TEST(Exponent, RejectsInvalidValues) {
    EXPECT_THROW(Exponent(0.5), DomainError);
    EXPECT_THROW(Exponent(std::nan("")), DomainError);
    EXPECT_THROW(Exponent::parse("abc"), DomainError);
    EXPECT_TRUE(Exponent(std::numeric_limits<double>::infinity()).is_infinite());
}

TEST(VectorNorm, Examples) {
    Vector a(2);
    a << 3, 4;
    EXPECT_DOUBLE_EQ(vector_norm(a, kTwo), 5.0);
    EXPECT_DOUBLE_EQ(vector_norm(Vector::Ones(3), kOne), 3.0);
    Vector c(3);
    c << 1, Complex(0, -2), 2;
    EXPECT_DOUBLE_EQ(vector_norm(c, kInf), 2.0);
    EXPECT_THROW(vector_norm(Vector(), kTwo), DomainError);
}

TEST(VectorNorm, NoOverflowForHugeEntries) {
    Vector v = Vector::Constant(4, 1e300);
    EXPECT_NEAR(vector_norm(v, kTwo) / 2e300, 1.0, 1e-14);
}

TEST(OpNorm, SpecExamples) {
    EXPECT_DOUBLE_EQ(opnorm(Matrix::Identity(2, 2), kTwo, kTwo).value, 1.0);

    Matrix h(2, 2);
    h << 1, 1, 1, -1;
    const NormEstimate e = opnorm(h, kTwo, kTwo);
    EXPECT_NEAR(e.value, std::sqrt(2.0), 1e-14);
    EXPECT_EQ(e.certainty, Certainty::exact);

    const NormEstimate ones = opnorm(Matrix::Ones(2, 2), kInf, kOne);
    EXPECT_NEAR(ones.value, 4.0, 1e-12);
    EXPECT_EQ(ones.certainty, Certainty::lower_bound);
    EXPECT_NEAR(ones.value, opnorm_bruteforce(Matrix::Ones(2, 2), kInf, kOne).value, 1e-12);

    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 2;
    d(1, 1) = 3;
    const NormEstimate col = opnorm(d, kOne, Exponent(4.0));
    EXPECT_DOUBLE_EQ(col.value, 3.0);
    EXPECT_EQ(col.certainty, Certainty::exact);
}

TEST(OpNorm, RejectsEmptyAndNonFinite) {
    EXPECT_THROW(opnorm(Matrix(), kTwo, kTwo), DomainError);
    Matrix m = Matrix::Ones(2, 2);
    m(0, 1) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(opnorm(m, kTwo, kTwo), DomainError);
}

TEST(OpNorm, WitnessReproducesValue) {
    Rng rng(42);
    const std::vector<std::pair<Exponent, Exponent>> pairs{
        {kOne, kTwo}, {kTwo, kInf}, {kTwo, kTwo}, {Exponent(3.0), Exponent(1.5)}, {kInf, kOne}, {Exponent(1.5), kInf}};
    for (int t = 0; t < 20; ++t) {
        const Matrix s = complex_gaussian(rng, 3 + t % 3, 2 + t % 4);
        for (const auto& [p, q] : pairs) {
            const NormEstimate e = opnorm(s, p, q);
            const double replay = vector_norm(s * e.witness, q) / vector_norm(e.witness, p);
            EXPECT_LE(rel_diff(replay, e.value), 1e-9) << p.to_string() << "->" << q.to_string();
        }
    }
}

TEST(OpNorm, ScalingRelation) {
    Rng rng(7);
    const Complex c(-2.5, 1.5);
    for (int t = 0; t < 10; ++t) {
        const Matrix s = complex_gaussian(rng, 4, 4);
        for (const auto& [p, q] : std::vector<std::pair<Exponent, Exponent>>{
                 {kOne, Exponent(3.0)}, {Exponent(1.5), kInf}, {kTwo, kTwo}, {Exponent(3.0), Exponent(2.0)}}) {
            const double a = opnorm(c * s, p, q).value;
            const double b = std::abs(c) * opnorm(s, p, q).value;
            EXPECT_LE(rel_diff(a, b), 1e-8);
        }
    }
}

TEST(OpNorm, MonotoneInQOnExactBranches) {
    Rng rng(11);
    const std::vector<double> qs{1.0, 1.5, 2.0, 3.0, 8.0};
    for (int t = 0; t < 20; ++t) {
        const Matrix s = complex_gaussian(rng, 5, 4);
        double prev = std::numeric_limits<double>::infinity();
        for (double q : qs) {
            const double v = opnorm(s, kOne, Exponent(q)).value;
            EXPECT_LE(v, prev);
            prev = v;
        }
        EXPECT_LE(opnorm(s, kOne, kInf).value, prev);
    }
}

TEST(PowerIteration, Examples) {
    Vector x0(2);
    x0 << 0.3, -1.0;
    EXPECT_NEAR(power_iteration_pq(Matrix::Identity(2, 2), kTwo, kTwo, x0, 1e-12, 100).value, 1.0, 1e-14);

    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 1;
    d(1, 1) = 5;
    const auto r = power_iteration_pq(d, Exponent(3.0), Exponent(3.0), Vector::Ones(2), 1e-14, 500);
    EXPECT_NEAR(r.value, 5.0, 1e-8);
    EXPECT_NEAR(std::abs(r.witness[1]), 1.0, 1e-6);

    Matrix h(2, 2);
    h << 1, 1, 1, -1;
    Vector e1 = Vector::Zero(2);
    e1[0] = 1;
    EXPECT_NEAR(power_iteration_pq(h, kTwo, kTwo, e1, 1e-14, 100).value, std::sqrt(2.0), 1e-8);
}

TEST(PowerIteration, ZeroMatrixReturnsNormalizedStart) {
    Vector x0(3);
    x0 << 1, 2, 2;
    const auto r = power_iteration_pq(Matrix::Zero(2, 3), kTwo, Exponent(3.0), x0, 1e-10, 10);
    EXPECT_EQ(r.value, 0.0);
    EXPECT_NEAR((r.witness - x0 / 3.0).norm(), 0.0, 1e-15);
}

TEST(PowerIteration, RejectsExactBranchesAndBadStarts) {
    const Matrix s = Matrix::Ones(2, 2);
    EXPECT_THROW(power_iteration_pq(s, kOne, kTwo, Vector::Ones(2), 1e-10, 10), DomainError);
    EXPECT_THROW(power_iteration_pq(s, kTwo, kInf, Vector::Ones(2), 1e-10, 10), DomainError);
    EXPECT_THROW(power_iteration_pq(s, kTwo, kTwo, Vector::Zero(2), 1e-10, 10), DomainError);
    EXPECT_THROW(power_iteration_pq(s, kTwo, kTwo, Vector::Ones(3), 1e-10, 10), DomainError);
}

TEST(PowerIteration, ObjectiveIsNondecreasing) {
    Rng rng(3);
    const std::vector<std::pair<double, double>> pairs{{1.5, 1.2}, {3.0, 1.5}, {4.0, 2.0}, {1.3, 6.0}};
    for (int t = 0; t < 40; ++t) {
        const Matrix s = complex_gaussian(rng, 6, 5);
        const auto& [p, q] = pairs[static_cast<std::size_t>(t) % pairs.size()];
        const auto r =
            power_iteration_pq(s, Exponent(p), Exponent(q), complex_gaussian(rng, 5, 1).col(0), 0.0, 200);
        for (std::size_t k = 1; k < r.history.size(); ++k) EXPECT_GE(r.history[k], r.history[k - 1] - 1e-12);
    }
}

TEST(BruteForce, Examples) {
    const NormEstimate ones = opnorm_bruteforce(Matrix::Ones(2, 2), kInf, kOne);
    EXPECT_DOUBLE_EQ(ones.value, 4.0);
    EXPECT_EQ(ones.certainty, Certainty::exact);
    EXPECT_DOUBLE_EQ(opnorm_bruteforce(Matrix::Identity(3, 3), kInf, kInf).value, 1.0);
    Matrix h(2, 2);
    h << 1, 1, 1, -1;
    EXPECT_GE(opnorm_bruteforce(h, kTwo, kTwo, 720).value, std::sqrt(2.0) - 1e-4);
}

TEST(BruteForce, CapacityLimits) {
    EXPECT_THROW(opnorm_bruteforce(Matrix::Ones(2, 5), kTwo, kTwo), CapacityError);
    EXPECT_THROW(opnorm_bruteforce(Matrix::Ones(2, 25), kInf, kOne), CapacityError);
    Matrix c = Matrix::Ones(2, 2);
    c(0, 0) = Complex(0, 1);
    EXPECT_THROW(opnorm_bruteforce(c, kInf, kOne), DomainError);
}

// Complex unimodular inputs beat real sign vectors for ∞->1 on complex
// scalars: [[1,1],[1,-1]] has complex norm 2√2 versus 2 over the reals.
TEST(BruteForce, RealSignVectorsAreExactOnlyOverTheReals) {
    Matrix h(2, 2);
    h << 1, 1, 1, -1;
    EXPECT_DOUBLE_EQ(opnorm_bruteforce(h, kInf, kOne).value, 2.0);
    EXPECT_NEAR(opnorm(h, kInf, kOne).value, 2.0 * std::sqrt(2.0), 1e-9);
}

TEST(UpperBound, DominatesAndIsExactAtEndpoints) {
    Rng rng(5);
    for (int t = 0; t < 30; ++t) {
        const Matrix s = complex_gaussian(rng, 4, 4);
        for (double p : {1.0, 1.5, 2.0, 3.0}) {
            const Exponent e(p);
            const double ub = opnorm_upper_bound(s, e);
            EXPECT_GE(ub, opnorm(s, e, e).value * (1 - 1e-12));
            if (p == 1.0 || p == 2.0) EXPECT_LE(rel_diff(ub, opnorm(s, e, e).value), 1e-12);
        }
        EXPECT_LE(rel_diff(opnorm_upper_bound(s, kInf), opnorm(s, kInf, kInf).value), 1e-12);
    }
}

TEST(DualityMap, AttainsHolderEquality) {
    Rng rng(9);
    for (double r : {1.5, 2.0, 4.0}) {
        const Vector v = complex_gaussian(rng, 6, 1).col(0);
        const Vector j = duality_map(v, r);
        const double pairing = std::abs(j.dot(v));
        const double holder = vector_norm(v, Exponent(r)) * vector_norm(j, Exponent(r).conjugate());
        EXPECT_NEAR(pairing, holder, 1e-12 * holder);
        EXPECT_NEAR(j.dot(v).imag(), 0.0, 1e-12 * holder);
    }
    EXPECT_EQ(duality_map(Vector::Zero(3), 2.0), Vector::Zero(3));
}

TEST(Inverse, RejectsSingular) {
    EXPECT_THROW(inverse(Matrix::Ones(3, 3)), DomainError);
    Rng rng(1);
    const Matrix a = complex_gaussian(rng, 4, 4);
    EXPECT_LE((a * inverse(a) - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Random, DeriveSeedSeparatesLabelsAndIndices) {
    EXPECT_NE(derive_seed(1, "a", 0), derive_seed(1, "b", 0));
    EXPECT_NE(derive_seed(1, "a", 0), derive_seed(1, "a", 1));
    EXPECT_NE(derive_seed(1, "a", 0), derive_seed(2, "a", 0));
    EXPECT_EQ(derive_seed(9, "x", 5), derive_seed(9, "x", 5));
    Rng rng(4);
    const Matrix u = random_unitary(rng, 5);
    EXPECT_LE((u.adjoint() * u - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-12);
}

}  // namespace
}  // namespace doilab
