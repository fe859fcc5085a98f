#pragma once

#include <cstdint>
#include <random>

#include "schurdil/linalg.hpp"

namespace schurdil {

using Rng = std::mt19937_64;

/// Child seed for stream `index` of a parent seed (splitmix64 mixing).
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index);

/// Entries with independent standard normal real and imaginary parts.
CMatrix random_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng);
CVector random_gaussian_vector(Eigen::Index n, Rng& rng);

/// Haar-distributed unitary (QR of a Gaussian matrix with phase correction).
CMatrix random_unitary(Eigen::Index n, Rng& rng);

/// Random Hermitian matrix (G + G^*)/2.
CMatrix random_hermitian(Eigen::Index n, Rng& rng);

/// Random PSD matrix G G^*.
CMatrix random_psd(Eigen::Index n, Rng& rng);

}  // namespace schurdil
