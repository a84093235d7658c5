#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "encl/linalg.hpp"

namespace encl {

/// Matrix representation of a trial subspace L = span{b_1..b_n} of D(A):
///   m0(i,j) = <b_i, b_j>        Gram matrix, positive definite
///   m1(i,j) = <A b_i, b_j>
///   m2(i,j) = <A b_i, A b_j>    positive semidefinite
class TrialForms {
 public:
  TrialForms() = default;
  TrialForms(SymMatrix m0, SymMatrix m1, SymMatrix m2);

  Index dim() const noexcept { return m0_.size(); }
  const SymMatrix& m0() const noexcept { return m0_; }
  const SymMatrix& m1() const noexcept { return m1_; }
  const SymMatrix& m2() const noexcept { return m2_; }

  /// Forms of -A on the same trial space. Right-side statements about A are
  /// left-side statements about -A at -t.
  TrialForms negated() const;
  /// Forms of the trial basis b' = b T.
  TrialForms change_basis(const Matrix& t) const;

 private:
  SymMatrix m0_, m1_, m2_;
};

/// q_t and l_t at a shift t.
struct ShiftedForms {
  double t = 0.0;
  SymMatrix qt;  // M2 - 2t M1 + t^2 M0
  SymMatrix lt;  // M1 - t M0
};

ShiftedForms shift(const TrialForms& forms, double t);

/// The forms expressed in an M0-orthonormal basis: k1 = L^{-1} M1 L^{-T},
/// k2 = L^{-1} M2 L^{-T}, where M0 = L L^T. Computing this once makes every
/// subsequent shift an O(n^2) update plus a standard eigenproblem.
class NormalizedForms {
 public:
  explicit NormalizedForms(const TrialForms& forms, double tol = kDefaultTol);

  Index dim() const noexcept { return k1_.size(); }
  const Matrix& chol() const noexcept { return chol_; }
  const SymMatrix& k1() const noexcept { return k1_; }
  const SymMatrix& k2() const noexcept { return k2_; }

  SymMatrix q(double t) const;  // L^{-1} Q_t L^{-T}
  SymMatrix l(double t) const;  // L^{-1} L_t L^{-T}
  /// Maps coefficient vectors in the normalized basis back to the original one.
  Matrix to_original(const Matrix& y) const;
  /// Normalized forms of -A.
  NormalizedForms negated() const;

 private:
  Matrix chol_;
  SymMatrix k1_, k2_;
};

/// Writes the ".forms" text format: `n`, then `%M0`, `%M1`, `%M2` sections of
/// 1-based upper-triangle entries `i j value`. Zero entries are omitted and
/// values use the shortest representation that round-trips exactly.
void write_forms(std::ostream& os, const TrialForms& forms);
void write_forms_file(const std::string& path, const TrialForms& forms);
TrialForms read_forms(std::istream& is);
TrialForms read_forms_file(const std::string& path);

}  // namespace encl
