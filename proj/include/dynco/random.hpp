#ifndef DYNCO_RANDOM_HPP
#define DYNCO_RANDOM_HPP

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "dynco/linalg.hpp"

namespace dynco {

using Rng = std::mt19937_64;

/// Seed for the `index`-th independent stream derived from `seed`
/// (splitmix64 finalizer). Workers seed from this so results do not depend
/// on how work is partitioned.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline ComplexMatrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

/// Columns of `g` orthonormalized (Gram-Schmidt via Householder QR, with the
/// phases fixed so the map g -> isometry is continuous and Haar for Gaussian g).
inline ComplexMatrix orthonormalize_columns(const ComplexMatrix& g) {
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(g.rows(), g.cols());
  const ComplexMatrix r = qr.matrixQR();
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

/// Haar-random isometry with `cols` columns in dimension `rows`.
inline ComplexMatrix random_isometry(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  return orthonormalize_columns(complex_gaussian(rows, cols, rng));
}

inline ComplexMatrix random_unitary(Eigen::Index dim, Rng& rng) {
  return random_isometry(dim, dim, rng);
}

inline ComplexVector random_pure_vector(Eigen::Index dim, Rng& rng) {
  ComplexVector v = complex_gaussian(dim, 1, rng).col(0);
  return v / v.norm();
}

/// Random Hermitian matrix with i.i.d. Gaussian entries (GUE up to scale).
inline ComplexMatrix random_hermitian(Eigen::Index dim, Rng& rng) {
  const ComplexMatrix g = complex_gaussian(dim, dim, rng);
  return (g + g.adjoint()) / 2.0;
}

/// Random permutation of 0..n-1.
inline std::vector<Eigen::Index> random_permutation(Eigen::Index n, Rng& rng) {
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

}  // namespace dynco

#endif  // DYNCO_RANDOM_HPP
