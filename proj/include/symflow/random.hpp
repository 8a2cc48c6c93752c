#pragma once

#include <cstdint>
#include <random>

#include "symflow/linalg.hpp"

namespace symflow {

using Rng = std::mt19937_64;

/// Per-sample seed derived from a master seed by a counter-based split
/// (splitmix64 finalizer), so sample i can be regenerated on its own.
std::uint64_t split_seed(std::uint64_t master, std::uint64_t index) noexcept;

Mat gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng, double scale = 1.0);

/// exp(J S) for symmetric Gaussian S scaled by sigma; a random element of Sp(2n)
/// near the identity.
Mat random_symplectic(int n, Rng& rng, double sigma = 0.5);

/// exp(xi) for a random skew xi commuting with J; a random element of U(n)
/// acting on R^2n.
Mat random_unitary(int n, Rng& rng, double sigma = 1.0);

}  // namespace symflow
