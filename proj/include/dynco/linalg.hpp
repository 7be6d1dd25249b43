#ifndef DYNCO_LINALG_HPP
#define DYNCO_LINALG_HPP

// Dense complex matrix substrate. All operands here are small (a few dozen
// rows at most), so everything is dense and row/column layout follows Eigen.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>

#include <Eigen/Dense>

#include "dynco/errors.hpp"

namespace dynco {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr double kHermiticityTol = 1e-10;

/// Largest entry modulus, the "max norm" used for every tolerance check.
inline double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool all_finite(const ComplexMatrix& m) {
  return m.allFinite();
}

/// Throws ValidationError unless the matrix is non-empty with finite entries.
inline void require_well_formed(const ComplexMatrix& m, const char* what) {
  if (m.rows() == 0 || m.cols() == 0) {
    throw ValidationError(std::string(what) + ": empty matrix");
  }
  if (!all_finite(m)) {
    throw ValidationError(std::string(what) + ": non-finite entry");
  }
}

inline double hermiticity_defect(const ComplexMatrix& m) {
  return max_abs(m - m.adjoint());
}

/// A square matrix certified Hermitian within a tolerance. Holds the
/// symmetrized copy (M + M^dagger)/2 so downstream eigensolvers see exact
/// Hermitian input even when M carries solver noise.
class HermitianView {
 public:
  explicit HermitianView(const ComplexMatrix& m, double tol = kHermiticityTol) {
    require_well_formed(m, "HermitianView");
    if (m.rows() != m.cols()) {
      throw DimensionError("HermitianView: matrix is not square");
    }
    const double defect = hermiticity_defect(m);
    if (defect > tol) {
      throw ValidationError("HermitianView: hermiticity defect " + std::to_string(defect) +
                            " exceeds tolerance");
    }
    matrix_ = (m + m.adjoint()) / 2.0;
  }

  const ComplexMatrix& matrix() const { return matrix_; }
  Eigen::Index dim() const { return matrix_.rows(); }

 private:
  ComplexMatrix matrix_;
};

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

enum class Subsystem { A, B };

/// Partial trace of an operator on A (x) B, keeping `keep`. Basis index of
/// |a>|b> is a * dim_b + b.
inline ComplexMatrix partial_trace(const ComplexMatrix& m, Eigen::Index dim_a, Eigen::Index dim_b,
                                   Subsystem keep) {
  if (dim_a < 1 || dim_b < 1 || m.rows() != dim_a * dim_b || m.cols() != dim_a * dim_b) {
    throw DimensionError("partial_trace: matrix is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected square of side " +
                         std::to_string(dim_a * dim_b));
  }
  if (keep == Subsystem::A) {
    ComplexMatrix out = ComplexMatrix::Zero(dim_a, dim_a);
    for (Eigen::Index i = 0; i < dim_a; ++i) {
      for (Eigen::Index j = 0; j < dim_a; ++j) {
        Complex acc = 0.0;
        for (Eigen::Index b = 0; b < dim_b; ++b) acc += m(i * dim_b + b, j * dim_b + b);
        out(i, j) = acc;
      }
    }
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(dim_b, dim_b);
  for (Eigen::Index a = 0; a < dim_a; ++a) {
    out += m.block(a * dim_b, a * dim_b, dim_b, dim_b);
  }
  return out;
}

struct EigenDecomposition {
  RealVector values;     // ascending
  ComplexMatrix vectors; // columns are eigenvectors
};

inline EigenDecomposition eig_hermitian(const HermitianView& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m.matrix());
  if (solver.info() != Eigen::Success) {
    throw ValidationError("eig_hermitian: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

inline double trace_norm_hermitian(const HermitianView& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m.matrix(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().sum();
}

inline double min_eigenvalue(const HermitianView& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m.matrix(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

/// Projector onto the span of eigenvectors with eigenvalue >= 0.
inline ComplexMatrix nonnegative_projector(const HermitianView& m) {
  const auto eig = eig_hermitian(m);
  ComplexMatrix p = ComplexMatrix::Zero(m.dim(), m.dim());
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    if (eig.values(k) >= 0.0) p += eig.vectors.col(k) * eig.vectors.col(k).adjoint();
  }
  return p;
}

inline ComplexMatrix basis_projector(Eigen::Index dim, Eigen::Index i) {
  ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
  p(i, i) = 1.0;
  return p;
}

inline ComplexMatrix matrix_unit(Eigen::Index dim, Eigen::Index i, Eigen::Index j) {
  ComplexMatrix e = ComplexMatrix::Zero(dim, dim);
  e(i, j) = 1.0;
  return e;
}

namespace pauli {
inline ComplexMatrix x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}
inline ComplexMatrix y() {
  ComplexMatrix m(2, 2);
  m << 0.0, Complex(0, -1), Complex(0, 1), 0.0;
  return m;
}
inline ComplexMatrix z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}
}  // namespace pauli

}  // namespace dynco

#endif  // DYNCO_LINALG_HPP
