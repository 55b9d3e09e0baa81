#pragma once

#include <string>
#include <vector>

#include "doilab/exponent.hpp"
#include "doilab/linalg.hpp"
#include "doilab/search_config.hpp"

namespace doilab {

enum class Certainty { exact, lower_bound, upper_bound };

const char* to_string(Certainty c) noexcept;

/// A norm value together with how much it can be trusted.
///
/// For p->q operator norms the witness is a domain vector with
/// ‖S·witness‖_q / ‖witness‖_p equal to value (up to rounding).
struct NormEstimate {
    double value = 0.0;
    Certainty certainty = Certainty::exact;
    Vector witness;
    std::string method;
};

struct PowerIterationResult {
    double value = 0.0;
    Vector witness;  ///< unit p-norm
    int iterations = 0;
    bool converged = false;
    std::vector<double> history;  ///< ‖S x_k‖_q for k = 0, 1, ...
};

/// ‖S‖_{p->q}. Closed forms (certainty exact) for p = 1 (max column q-norm),
/// q = ∞ (max row p*-norm) and p = q = 2 (largest singular value); every other
/// pair is a multistart power-iteration lower bound.
NormEstimate opnorm(const Matrix& s, const Exponent& p, const Exponent& q,
                    const SearchConfig& cfg = {});

/// Nonlinear power method for max ‖Sx‖_q subject to ‖x‖_p = 1:
///   x <- normalize_p( J_{p*}( Sᴴ J_q(Sx) ) ),  J_r(v)_i = phase(v_i)|v_i|^{r-1}.
/// The objective is nondecreasing along the iteration. Accepts 1 < p <= ∞
/// (p = ∞ uses the phase map) and 1 <= q < ∞.
PowerIterationResult power_iteration_pq(const Matrix& s, const Exponent& p, const Exponent& q,
                                        const Vector& x0, double tol, int max_iter);

/// Independent oracle. For p = ∞ and real S: exact maximum over the vertices
/// {±1}^n of the real ∞-ball (real scalars). Otherwise a lower bound from a
/// deterministic hyperspherical grid of the real unit p-sphere with
/// `resolution` subdivisions per angle; the domain dimension must be <= 4.
NormEstimate opnorm_bruteforce(const Matrix& s, const Exponent& p, const Exponent& q,
                               int resolution = 360);

/// Starting vectors used by the multistart search (all-ones, basis vectors,
/// seeded complex Gaussians).
std::vector<Vector> multistart_vectors(Eigen::Index n, const SearchConfig& cfg);

}  // namespace doilab

namespace doilab {

/// Certified upper bound on ‖M‖_{p->p}: exact for p ∈ {1, 2, ∞}, otherwise
/// the smaller of the Riesz–Thorin interpolation bounds between the
/// neighbouring exact exponents.
double opnorm_upper_bound(const Matrix& m, const Exponent& p);

}  // namespace doilab
