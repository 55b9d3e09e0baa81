#pragma once

#include <optional>
#include <string>
#include <vector>

#include "doilab/linalg.hpp"
#include "doilab/opnorm.hpp"
#include "doilab/scalar_function.hpp"
#include "doilab/search_config.hpp"

namespace doilab {

/// A Schur multiplier M acting by S -> M∗S. Rows live in the output (μ)
/// space, columns in the input (λ) space; the labels are informational.
struct MultiplierMask {
    Matrix m;
    std::optional<RealVector> row_labels;
    std::optional<RealVector> col_labels;
};

/// Embedding of a {μ_k <= λ_j} mask into the standard staircase of size N:
/// mask(k, j) = 1 iff row_map[k] <= col_map[j]. Maps are 1-based; 0 marks a
/// dropped (all-zero) row or column.
struct StaircaseDescriptor {
    int n = 0;
    std::vector<int> row_map;
    std::vector<int> col_map;
};

/// Entrywise product {m_jk · s_jk}.
Matrix schur_product(const Matrix& m, const Matrix& s);

/// Φ with Φ(k, j) = φ_f(λ_j, μ_k) = (f(μ_k) − f(λ_j)) / (μ_k − λ_j), and
/// f.diagonal(λ_j) where μ_k = λ_j. Rows follow μ, columns follow λ.
Matrix divided_difference_matrix(const ScalarFunction& f, const Vector& lambdas, const Vector& mus);

/// 0/1 mask of the standard truncation: 1 iff k <= j (upper triangle with diagonal).
Matrix standard_truncation_mask(Eigen::Index n);

/// Keeps entry (k, j) iff k <= j and both k, j < n.
Matrix standard_truncation(const Matrix& s, Eigen::Index n);

/// 0/1 mask of size n x n with entry (k, j) = 1 iff μ_k <= λ_j.
Matrix sequence_truncation_mask(const RealVector& lambdas, const RealVector& mus, Eigen::Index n);

/// Keeps entry (k, j), k, j < n, iff μ_k <= λ_j.
Matrix sequence_truncation(const Matrix& s, const RealVector& lambdas, const RealVector& mus,
                           Eigen::Index n);

/// Reduces the {μ_k <= λ_j} mask to a standard staircase by sorting,
/// merging repeated rows/columns and placing all-zero rows (columns) below
/// (left of) the staircase. N never exceeds max(#λ, #μ); when it would,
/// all-zero columns and then all-zero rows are dropped instead.
StaircaseDescriptor canonicalize_mask(const RealVector& lambdas, const RealVector& mus);

/// The 0/1 mask described by a StaircaseDescriptor.
Matrix reconstruct_mask(const StaircaseDescriptor& d);

/// M̃ with m̃_{j,1} = m_{j,1} and m̃_{j,k} = m_{j,k-1} for k >= 2.
Matrix repeat_first_column(const Matrix& m);

/// h_jk = 1/(j − k) off the diagonal, 0 on it.
Matrix hilbert_witness(Eigen::Index rows, Eigen::Index cols);

/// A multiplier-norm value with the matrix S that realizes it.
struct MultiplierEstimate {
    double value = 0.0;
    Certainty certainty = Certainty::exact;
    Matrix witness;
    std::string method;
};

/// ‖M‖_(p,q) = sup ‖M∗S‖_{p->q} / ‖S‖_{p->q}.
///
/// p = 1 or q = ∞: exactly max|m_jk| (the exact norm formulas decouple by
/// column, resp. row). Otherwise a lower bound: the larger of max|m_jk| and
/// the best ratio found by ascent from the witness library (Hilbert-type,
/// all-ones, seeded complex Gaussians, and any extra_witnesses).
/// For pairs without an exact S-norm the ratio is an estimate whose
/// denominator is itself a lower bound.
MultiplierEstimate multiplier_norm(const MultiplierMask& mask, const Exponent& p, const Exponent& q,
                                   const SearchConfig& cfg = {},
                                   const std::vector<Matrix>& extra_witnesses = {});

}  // namespace doilab
