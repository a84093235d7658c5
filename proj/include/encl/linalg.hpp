#pragma once

// Dense symmetric linear algebra used throughout the library. Everything here
// is a pure function of its arguments.

#include <Eigen/Dense>
#include <initializer_list>

#include "encl/errors.hpp"

namespace encl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Relative threshold used for pivot and kernel classification.
inline constexpr double kDefaultTol = 1e-10;

/// Real symmetric matrix. Entry (i,j) and (j,i) are bitwise identical.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(Index n) : m_(Matrix::Zero(n, n)) {}

  /// Mirrors the upper triangle of `m` into the lower one.
  static SymMatrix from_upper(const Matrix& m);
  /// Accepts `m` only if it is exactly symmetric; throws std::invalid_argument otherwise.
  static SymMatrix checked(Matrix m);
  /// Averages `m` with its transpose, provided max|m - m^T| <= rel_tol * max|m|.
  static SymMatrix symmetrized(const Matrix& m, double rel_tol);
  static SymMatrix identity(Index n);
  static SymMatrix diagonal(const Vector& d);
  static SymMatrix diagonal(std::initializer_list<double> d);

  Index size() const noexcept { return m_.rows(); }
  const Matrix& dense() const noexcept { return m_; }
  double operator()(Index i, Index j) const { return m_(i, j); }
  /// Largest absolute entry.
  double max_norm() const;

  /// T^T M T.
  SymMatrix congruence(const Matrix& t) const;

  friend SymMatrix operator+(const SymMatrix& a, const SymMatrix& b);
  friend SymMatrix operator-(const SymMatrix& a, const SymMatrix& b);
  friend SymMatrix operator-(const SymMatrix& a);
  friend SymMatrix operator*(double s, const SymMatrix& a);

 private:
  explicit SymMatrix(Matrix m, int) : m_(std::move(m)) {}
  Matrix m_;
};

/// Eigenvalues ascending; columns of `vectors` are B-orthonormal.
struct EigenPairs {
  Vector values;
  Matrix vectors;
};

/// Lower factor L with L L^T = M. Fails when a pivot is <= tol * max diagonal.
Matrix cholesky_spd(const SymMatrix& m, double tol = kDefaultTol);

/// Standard symmetric eigenproblem.
EigenPairs sym_eig(const SymMatrix& a);
Vector sym_eigenvalues(const SymMatrix& a);

/// Solves A x = lambda B x for symmetric A and positive definite B by
/// Cholesky reduction.
EigenPairs sym_generalized_eig(const SymMatrix& a, const SymMatrix& b, double tol = kDefaultTol);

/// Near-null space of a positive semidefinite matrix together with its
/// orthogonal complement (both with orthonormal columns).
struct KernelSplit {
  Index deficiency = 0;
  Matrix kernel;
  Matrix complement;
  Vector spectrum;  // all eigenvalues, ascending
};

/// Eigenvalues <= tol * max(1, ||M||) span the kernel; throws NegativeEigenvalue
/// when the smallest eigenvalue is below -tol * ||M||.
KernelSplit kernel_basis(const SymMatrix& m, double tol = kDefaultTol);

/// G^{-1/2} by spectral decomposition.
SymMatrix inv_sqrt(const SymMatrix& g, double tol = kDefaultTol);
/// G^{1/2} by spectral decomposition.
SymMatrix sqrt_spd(const SymMatrix& g, double tol = kDefaultTol);

}  // namespace encl
