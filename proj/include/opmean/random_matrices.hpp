#pragma once

#include <cstdint>
#include <random>

#include "opmean/hermitian.hpp"

namespace opmean {

using Rng = std::mt19937_64;

/// splitmix64 of (master, index); the per-trial generator seed.
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index);

/// Hermitian part of a matrix with independent standard normal real and imaginary parts.
HermitianMatrix random_hermitian(Rng& rng, int n);

/// Haar-like unitary from the QR factorization of a complex Gaussian matrix.
CMatrix random_unitary(Rng& rng, int n);

inline constexpr double kBandLow = 0.05;
inline constexpr double kBandHigh = 0.45;

/// random_hermitian with its spectrum mapped affinely onto [lo, hi].
HermitianMatrix random_band_matrix(Rng& rng, int n, double lo = kBandLow, double hi = kBandHigh);

enum class PairMode { independent, perturbation, commuting };
const char* to_string(PairMode mode);

struct MatrixPair {
  HermitianMatrix a;
  HermitianMatrix b;
  PairMode mode;
};

/// Pair with both spectra in [lo, hi].
/// perturbation: B = A + eps E, eps log-uniform in [1e-4, 1e-1], |E|_2 = 1, spectrum clamped back into the band.
/// commuting: B shares the eigenvectors of A.
MatrixPair random_band_pair(Rng& rng, int n, PairMode mode, double lo = kBandLow,
                            double hi = kBandHigh);

/// Positive definite matrix with log-uniform spectrum in [1, kappa], kappa log-uniform in [1, max_condition].
HermitianMatrix random_pd(Rng& rng, int n, double max_condition = 1e4);

}  // namespace opmean
