#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "biduct/qcore.hpp"

namespace biduct {

using Rng = std::mt19937_64;

/// Generator seeded from (seed, stream) so independent workers get
/// reproducible, decorrelated streams regardless of scheduling.
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

Vector random_gaussian_vector(int d, Rng& rng);
/// Haar-random unit vector.
Vector haar_vector(int d, Rng& rng);
/// Haar-random unitary via QR of a Ginibre matrix with phase correction.
Matrix haar_unitary(int d, Rng& rng);
/// Random density matrix G G^dagger / tr with G a d x rank Ginibre matrix.
Matrix random_density_matrix(int d, Rng& rng, int rank = -1);
/// Uniform point on the probability simplex.
std::vector<double> random_probabilities(std::size_t n, Rng& rng);

}  // namespace biduct
