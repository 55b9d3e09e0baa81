#pragma once

#include <cstdint>

namespace doilab {

/// Budgets and seeds for every search-based estimator in the library.
/// Estimates are deterministic functions of (inputs, SearchConfig).
struct SearchConfig {
    int restarts = 32;          ///< multistart count for heuristic p->q norms
    int max_iter = 1000;        ///< power-iteration cap per start
    double iter_tol = 1e-10;    ///< relative objective change that stops an iteration
    std::uint64_t seed = 0x5eedULL;

    int exhaustive_cap = 12;    ///< max #distinct eigenvalues for exhaustive ν(A)
    int subset_samples = 4096;  ///< random subsets when ν(A) is sampled

    int scaling_restarts = 3;   ///< multistarts for the K_A diagonal-scaling search
    int scaling_sweeps = 12;    ///< coordinate-descent sweeps per start

    int multiplier_restarts = 4;  ///< witnesses refined by ratio ascent
    int ascent_steps = 12;        ///< accepted/rejected perturbations per witness
    int polar_steps = 100;        ///< conditional-gradient steps per witness at (2,2)
};

}  // namespace doilab
