#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "doilab/linalg.hpp"

namespace doilab {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for a sub-stream identified by (base seed, label, index).
std::uint64_t derive_seed(std::uint64_t base, std::string_view label, std::uint64_t index) noexcept;

/// Entries i.i.d. standard complex Gaussian (E|z|^2 = 1).
Matrix complex_gaussian(Rng& rng, Eigen::Index rows, Eigen::Index cols);

/// Entries i.i.d. N(0,1), zero imaginary part.
Matrix real_gaussian(Rng& rng, Eigen::Index rows, Eigen::Index cols);

/// Haar-like unitary from the QR factor of a complex Gaussian matrix.
Matrix random_unitary(Rng& rng, Eigen::Index n);

}  // namespace doilab
