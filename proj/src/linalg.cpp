#include "doilab/linalg.hpp"

#include <cmath>
#include <string>

#include "doilab/errors.hpp"

namespace doilab {

double vector_norm(const Vector& x, const Exponent& p) {
    if (x.size() == 0) throw DomainError("vector_norm: empty vector");
    if (p.is_infinite()) return x.cwiseAbs().maxCoeff();
    const double pv = p.value();
    if (pv == 1.0) return x.cwiseAbs().sum();
    if (pv == 2.0) return x.stableNorm();
    // Scale by the max modulus so |x_j|^p neither overflows nor underflows.
    const double scale = x.cwiseAbs().maxCoeff();
    if (scale == 0.0) return 0.0;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) acc += std::pow(std::abs(x[i]) / scale, pv);
    return scale * std::pow(acc, 1.0 / pv);
}

double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double entrywise_norm(const Matrix& m, double p) {
    const double scale = max_abs(m);
    if (scale == 0.0) return 0.0;
    double acc = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) acc += std::pow(std::abs(m(i, j)) / scale, p);
    return scale * std::pow(acc, 1.0 / p);
}

void require_valid(const Matrix& m, const char* what) {
    if (m.size() == 0) throw DomainError(std::string(what) + ": empty matrix");
    if (!m.allFinite()) throw DomainError(std::string(what) + ": non-finite entry");
}

bool is_real(const Matrix& m, double tol) {
    return m.size() == 0 || m.imag().cwiseAbs().maxCoeff() <= tol;
}

Complex phase(Complex z) {
    const double r = std::abs(z);
    return r == 0.0 ? Complex(0.0) : z / r;
}

Vector duality_map(const Vector& v, double r) {
    Vector out(v.size());
    const double scale = v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
    if (scale == 0.0) return Vector::Zero(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double a = std::abs(v[i]);
        out[i] = a == 0.0 ? Complex(0.0) : (v[i] / a) * std::pow(a / scale, r - 1.0);
    }
    return out;
}

Matrix inverse(const Matrix& m) {
    if (m.rows() != m.cols()) throw DomainError("inverse: matrix is not square");
    Eigen::FullPivLU<Matrix> lu(m);
    if (!lu.isInvertible()) throw DomainError("inverse: matrix is singular");
    return lu.inverse();
}

}  // namespace doilab
