#ifndef DYNCO_STATE_HPP
#define DYNCO_STATE_HPP

#include <string>

#include "dynco/linalg.hpp"
#include "dynco/random.hpp"

namespace dynco {

inline constexpr double kStateTol = 1e-9;

/// Positive semidefinite, unit-trace operator.
class DensityMatrix {
 public:
  explicit DensityMatrix(const ComplexMatrix& m, double tol = kStateTol) {
    require_well_formed(m, "DensityMatrix");
    if (m.rows() != m.cols()) throw DimensionError("DensityMatrix: matrix is not square");
    const HermitianView h(m, tol);
    const double tr = h.matrix().trace().real();
    if (std::abs(tr - 1.0) > tol) {
      throw ValidationError("DensityMatrix: trace " + std::to_string(tr) + " differs from 1");
    }
    const double lo = min_eigenvalue(h);
    if (lo < -tol) {
      throw ValidationError("DensityMatrix: negative eigenvalue " + std::to_string(lo));
    }
    matrix_ = h.matrix();
  }

  static DensityMatrix pure(const ComplexVector& psi) {
    const ComplexVector v = psi / psi.norm();
    return DensityMatrix(v * v.adjoint());
  }

  static DensityMatrix basis(Eigen::Index dim, Eigen::Index i) {
    return DensityMatrix(basis_projector(dim, i));
  }

  static DensityMatrix maximally_mixed(Eigen::Index dim) {
    return DensityMatrix(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
  }

  const ComplexMatrix& matrix() const { return matrix_; }
  Eigen::Index dim() const { return matrix_.rows(); }

 private:
  ComplexMatrix matrix_;
};

inline DensityMatrix random_pure_state(Eigen::Index dim, Rng& rng) {
  return DensityMatrix::pure(random_pure_vector(dim, rng));
}

/// Mixed state from the Hilbert-Schmidt ensemble (Ginibre G G^dagger / tr).
inline DensityMatrix random_mixed_state(Eigen::Index dim, Rng& rng) {
  const ComplexMatrix g = complex_gaussian(dim, dim, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(rho);
}

}  // namespace dynco

#endif  // DYNCO_STATE_HPP
