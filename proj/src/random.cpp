#include "doilab/random.hpp"

namespace doilab {

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::string_view label, std::uint64_t index) noexcept {
    // FNV-1a over the label keeps derived streams stable across platforms.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return mix64(mix64(base ^ h) + index);
}

Matrix complex_gaussian(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> n01(0.0, 1.0);
    const double s = 1.0 / std::sqrt(2.0);
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) {
            const double re = n01(rng);
            const double im = n01(rng);
            m(i, j) = Complex(s * re, s * im);
        }
    return m;
}

Matrix real_gaussian(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> n01(0.0, 1.0);
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = Complex(n01(rng), 0.0);
    return m;
}

Matrix random_unitary(Rng& rng, Eigen::Index n) {
    const Matrix g = complex_gaussian(rng, n, n);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(n, n);
    // Fix column phases with diag(R) so the distribution does not depend on
    // the Householder sign convention.
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < n; ++j) q.col(j) *= phase(r(j, j));
    return q;
}

}  // namespace doilab
