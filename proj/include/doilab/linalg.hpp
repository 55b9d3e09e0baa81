#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

#include "doilab/exponent.hpp"

namespace doilab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// (Σ|x_j|^p)^{1/p}, or max|x_j| for p = ∞. Throws DomainError on empty x.
double vector_norm(const Vector& x, const Exponent& p);

/// Entrywise max modulus; 0 for an empty matrix.
double max_abs(const Matrix& m);

/// Entrywise (Σ|m_jk|^p)^{1/p} for finite p.
double entrywise_norm(const Matrix& m, double p);

/// Throws DomainError if m is empty or has a non-finite entry.
void require_valid(const Matrix& m, const char* what);

bool is_real(const Matrix& m, double tol = 0.0);

/// Duality map v_i -> phase(v_i)·|v_i|^{r-1}; r = 1 gives the phase vector.
/// The input is rescaled by its max modulus first so large r cannot overflow.
Vector duality_map(const Vector& v, double r);

/// Inverse through a full-pivot LU; throws DomainError when singular.
Matrix inverse(const Matrix& m);

/// Complex unit-modulus phase of z (0 for z == 0).
Complex phase(Complex z);

}  // namespace doilab
