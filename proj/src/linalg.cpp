#include "encl/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace encl {

NotPositiveDefinite::NotPositiveDefinite(std::ptrdiff_t pivot, double value)
    : NotPositiveDefinite("matrix", pivot, value) {}

NotPositiveDefinite::NotPositiveDefinite(const std::string& context, std::ptrdiff_t pivot,
                                         double value)
    : Error([&] {
        std::ostringstream os;
        os << context << " is not positive definite: pivot " << pivot + 1 << " = " << value;
        return os.str();
      }()),
      pivot_(pivot),
      value_(value) {}

NegativeEigenvalue::NegativeEigenvalue(double value)
    : Error([&] {
        std::ostringstream os;
        os << "matrix expected positive semidefinite has eigenvalue " << value;
        return os.str();
      }()),
      value_(value) {}

GapViolation::GapViolation(std::size_t index)
    : Error("spectral gap violated (delta <= d) at index " + std::to_string(index + 1)),
      index_(index) {}

UnsupportedOrder::UnsupportedOrder(int order)
    : Error("unsupported element order " + std::to_string(order)) {}

FormatError::FormatError(std::size_t line, const std::string& what)
    : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

ConfigError::ConfigError(std::string field, const std::string& what)
    : Error(field + ": " + what), field_(std::move(field)) {}

// ---------------------------------------------------------------------------

SymMatrix SymMatrix::from_upper(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("SymMatrix: matrix is not square");
  Matrix s = m.triangularView<Eigen::Upper>();
  s.triangularView<Eigen::StrictlyLower>() = m.transpose().triangularView<Eigen::StrictlyLower>();
  return SymMatrix(std::move(s), 0);
}

SymMatrix SymMatrix::checked(Matrix m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("SymMatrix: matrix is not square");
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = j + 1; i < m.rows(); ++i)
      if (m(i, j) != m(j, i)) throw std::invalid_argument("SymMatrix: matrix is not symmetric");
  return SymMatrix(std::move(m), 0);
}

SymMatrix SymMatrix::symmetrized(const Matrix& m, double rel_tol) {
  if (m.rows() != m.cols()) throw std::invalid_argument("SymMatrix: matrix is not square");
  const double scale = m.cwiseAbs().maxCoeff();
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > rel_tol * scale) {
    std::ostringstream os;
    os << "SymMatrix: asymmetry " << asym << " exceeds " << rel_tol << " * " << scale;
    throw std::invalid_argument(os.str());
  }
  return from_upper(0.5 * (m + m.transpose()));
}

SymMatrix SymMatrix::identity(Index n) { return SymMatrix(Matrix::Identity(n, n), 0); }

SymMatrix SymMatrix::diagonal(const Vector& d) { return SymMatrix(Matrix(d.asDiagonal()), 0); }

SymMatrix SymMatrix::diagonal(std::initializer_list<double> d) {
  Vector v(static_cast<Index>(d.size()));
  Index i = 0;
  for (double x : d) v(i++) = x;
  return diagonal(v);
}

double SymMatrix::max_norm() const { return m_.size() == 0 ? 0.0 : m_.cwiseAbs().maxCoeff(); }

SymMatrix SymMatrix::congruence(const Matrix& t) const {
  return from_upper(t.transpose() * m_ * t);
}

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) { return SymMatrix(a.m_ + b.m_, 0); }
SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) { return SymMatrix(a.m_ - b.m_, 0); }
SymMatrix operator-(const SymMatrix& a) { return SymMatrix(-a.m_, 0); }
SymMatrix operator*(double s, const SymMatrix& a) { return SymMatrix(s * a.m_, 0); }

// ---------------------------------------------------------------------------

Matrix cholesky_spd(const SymMatrix& m, double tol) {
  const Index n = m.size();
  const Matrix& a = m.dense();
  const double max_diag = n == 0 ? 0.0 : a.diagonal().cwiseAbs().maxCoeff();
  const double threshold = tol * max_diag;
  Matrix l = Matrix::Zero(n, n);
  for (Index k = 0; k < n; ++k) {
    const double pivot = a(k, k) - l.row(k).head(k).squaredNorm();
    if (!(pivot > threshold)) throw NotPositiveDefinite(k, pivot);
    const double lkk = std::sqrt(pivot);
    l(k, k) = lkk;
    if (k + 1 < n) {
      l.col(k).tail(n - k - 1) =
          (a.col(k).tail(n - k - 1) - l.bottomLeftCorner(n - k - 1, k) * l.row(k).head(k).transpose()) /
          lkk;
    }
  }
  return l;
}

EigenPairs sym_eig(const SymMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.dense(), Eigen::ComputeEigenvectors);
  return {es.eigenvalues(), es.eigenvectors()};
}

Vector sym_eigenvalues(const SymMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.dense(), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

EigenPairs sym_generalized_eig(const SymMatrix& a, const SymMatrix& b, double tol) {
  if (a.size() != b.size()) throw std::invalid_argument("sym_generalized_eig: size mismatch");
  const Matrix l = cholesky_spd(b, tol);
  const auto lower = l.triangularView<Eigen::Lower>();
  // C = L^{-1} A L^{-T}
  Matrix c = lower.solve(a.dense());
  c = lower.solve(c.transpose().eval());
  const SymMatrix reduced = SymMatrix::from_upper(0.5 * (c + c.transpose()));
  EigenPairs ep = sym_eig(reduced);
  ep.vectors = l.transpose().triangularView<Eigen::Upper>().solve(ep.vectors);
  return ep;
}

KernelSplit kernel_basis(const SymMatrix& m, double tol) {
  const EigenPairs ep = sym_eig(m);
  const Index n = m.size();
  KernelSplit out;
  out.spectrum = ep.values;
  if (n == 0) return out;
  const double norm = std::max(std::abs(ep.values(0)), std::abs(ep.values(n - 1)));
  if (ep.values(0) < -tol * norm) throw NegativeEigenvalue(ep.values(0));
  const double threshold = tol * std::max(1.0, norm);
  Index k = 0;
  while (k < n && ep.values(k) <= threshold) ++k;
  out.deficiency = k;
  out.kernel = ep.vectors.leftCols(k);
  out.complement = ep.vectors.rightCols(n - k);
  return out;
}

namespace {

template <class Fn>
SymMatrix spectral_function(const SymMatrix& g, double tol, Fn fn) {
  cholesky_spd(g, tol);  // positivity check with pivot diagnostics
  const EigenPairs ep = sym_eig(g);
  if (ep.values.size() > 0 && !(ep.values(0) > tol * ep.values(ep.values.size() - 1)))
    throw NotPositiveDefinite(0, ep.values(0));
  const Vector f = ep.values.unaryExpr(fn);
  return SymMatrix::from_upper(ep.vectors * f.asDiagonal() * ep.vectors.transpose());
}

}  // namespace

SymMatrix inv_sqrt(const SymMatrix& g, double tol) {
  return spectral_function(g, tol, [](double x) { return 1.0 / std::sqrt(x); });
}

SymMatrix sqrt_spd(const SymMatrix& g, double tol) {
  return spectral_function(g, tol, [](double x) { return std::sqrt(x); });
}

}  // namespace encl
