#pragma once

#include <cstdint>
#include <random>

#include "roofkit/hermitian.hpp"

namespace roofkit {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer: stateless mixing of (seed, stream) into a sub-seed.
/// Restart i of a run seeded with s always draws from derive_seed(s, i),
/// independent of scheduling.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream) { return Rng(derive_seed(seed, stream)); }

inline Eigen::MatrixXcd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng, bool real_only = false) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXcd g(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      const double re = normal(rng);
      const double im = real_only ? 0.0 : normal(rng);
      g(r, c) = {re, im};
    }
  }
  return g;
}

/// Orthonormalize the columns of a tall matrix by Householder QR, with the
/// diagonal of R made real positive so the map is well defined.
inline Eigen::MatrixXcd orthonormalize(const Eigen::MatrixXcd& a) {
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(a.rows(), a.cols());
  const auto& r = qr.matrixQR();
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    const double mag = std::abs(r(c, c));
    if (mag > 0) q.col(c) *= r(c, c) / mag;
  }
  return q;
}

inline Eigen::MatrixXcd random_isometry(Eigen::Index rows, Eigen::Index cols, Rng& rng, bool real_only = false) {
  return orthonormalize(gaussian_matrix(rows, cols, rng, real_only));
}

inline PureState<double> random_pure_state(Eigen::Index d, Rng& rng, bool real_only = false) {
  return PureState<double>(gaussian_matrix(d, 1, rng, real_only).col(0));
}

/// Hilbert-Schmidt (induced Ginibre) random state of the given rank.
inline DensityMatrix<double> random_density(Eigen::Index d, Eigen::Index rank, Rng& rng, bool real_only = false) {
  const Eigen::MatrixXcd g = gaussian_matrix(d, rank, rng, real_only);
  Eigen::MatrixXcd rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix<double>(rho);
}

}  // namespace roofkit
