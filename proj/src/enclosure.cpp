#include "encl/enclosure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace encl {

const char* to_string(Side side) { return side == Side::Left ? "left" : "right"; }

const char* to_string(Detectability d) {
  switch (d) {
    case Detectability::AllAbove:
      return "all_above";
    case Detectability::AllBelow:
      return "all_below";
    case Detectability::Mixed:
      return "mixed";
  }
  return "?";
}

bool EnclosureSet::any_inconsistent() const {
  return std::any_of(rows.begin(), rows.end(), [](const Enclosure& e) { return e.inconsistent(); });
}

Vector ritz_values(const TrialForms& forms, double tol) {
  return sym_generalized_eig(forms.m1(), forms.m0(), tol).values;
}

// ---------------------------------------------------------------------------
// Local counting function

Vector counting_function(const NormalizedForms& forms, double t, double tol) {
  const Vector mu2 = sym_eigenvalues(forms.q(t));
  const Index n = mu2.size();
  if (n == 0) return mu2;
  const double scale = std::max(std::abs(mu2(0)), std::abs(mu2(n - 1)));
  if (mu2(0) < -tol * scale) throw NegativeEigenvalue(mu2(0));
  return mu2.cwiseMax(0.0).cwiseSqrt();
}

CountingValues local_counting(const NormalizedForms& forms, double t, double tol) {
  const EigenPairs ep = sym_eig(forms.q(t));
  const Index n = ep.values.size();
  CountingValues out;
  out.t = t;
  if (n > 0) {
    const double scale = std::max(std::abs(ep.values(0)), std::abs(ep.values(n - 1)));
    if (ep.values(0) < -tol * scale) throw NegativeEigenvalue(ep.values(0));
  }
  out.f = ep.values.cwiseMax(0.0).cwiseSqrt();
  out.u = forms.to_original(ep.vectors);
  return out;
}

CountingValues local_counting(const TrialForms& forms, double t, double tol) {
  return local_counting(NormalizedForms(forms, tol), t, tol);
}

// ---------------------------------------------------------------------------
// Zimmermann-Mertins pencil

namespace {

struct PencilSolution {
  Signature signature;
  Vector tau;      // ascending, all deflated-pencil eigenvalues
  Matrix vectors;  // normalized coordinates, Q_t-orthonormal
  Vector residual;
  double zero_threshold = 0.0;
};

PencilSolution solve_pencil(const NormalizedForms& forms, double t, double tol) {
  const SymMatrix q = forms.q(t);
  const SymMatrix l = forms.l(t);
  const KernelSplit ks = kernel_basis(q, tol);

  PencilSolution out;
  out.signature.n_inf = ks.deficiency;
  if (ks.complement.cols() == 0) return out;

  // Without deflation the pencil is solved in the normalized basis directly;
  // otherwise it is restricted to the orthogonal complement of ker Q_t.
  const bool deflate = ks.deficiency > 0;
  const SymMatrix qd = deflate ? q.congruence(ks.complement) : q;
  const SymMatrix ld = deflate ? l.congruence(ks.complement) : l;
  EigenPairs ep = sym_generalized_eig(ld, qd, tol);

  const double qn = q.max_norm();
  out.zero_threshold = qn > 0.0 ? tol * (l.max_norm() / qn) : 0.0;
  out.tau = ep.values;
  out.residual.resize(ep.values.size());
  for (Index k = 0; k < ep.values.size(); ++k) {
    const Vector y = ep.vectors.col(k);
    out.residual(k) = (ld.dense() * y - ep.values(k) * (qd.dense() * y)).norm();
  }
  out.vectors = deflate ? Matrix(ks.complement * ep.vectors) : std::move(ep.vectors);

  for (Index k = 0; k < out.tau.size(); ++k) {
    const double tau = out.tau(k);
    if (tau < -out.zero_threshold)
      ++out.signature.n_minus;
    else if (tau > out.zero_threshold)
      ++out.signature.n_plus;
    else
      ++out.signature.n_zero;
  }
  return out;
}

}  // namespace

Signature signature(const TrialForms& forms, double t, double tol) {
  return solve_pencil(NormalizedForms(forms, tol), t, tol).signature;
}

ZmSpectrum zm_eigen(const NormalizedForms& forms, double t, double tol) {
  PencilSolution ps = solve_pencil(forms, t, tol);
  if (ps.tau.size() == 0) {
    std::ostringstream os;
    os << "shift t = " << t << " is an eigenvalue for every trial vector";
    throw DegenerateShift(os.str());
  }
  const Signature& sig = ps.signature;

  ZmSpectrum out;
  out.t = t;
  out.signature = sig;
  out.tau_minus = ps.tau.head(sig.n_minus);
  out.residual_minus = ps.residual.head(sig.n_minus);
  out.vec_minus = forms.to_original(ps.vectors.leftCols(sig.n_minus));
  // Positive eigenvalues sit at the end of the ascending array; reverse them.
  out.tau_plus = ps.tau.tail(sig.n_plus).reverse();
  out.residual_plus = ps.residual.tail(sig.n_plus).reverse();
  out.vec_plus = forms.to_original(ps.vectors.rightCols(sig.n_plus).rowwise().reverse());
  return out;
}

ZmSpectrum zm_eigen(const TrialForms& forms, double t, double tol) {
  return zm_eigen(NormalizedForms(forms, tol), t, tol);
}

std::vector<double> zm_bounds_one_sided(const ZmSpectrum& zm, Side side) {
  const Vector& tau = side == Side::Left ? zm.tau_minus : zm.tau_plus;
  if (tau.size() == 0) {
    std::ostringstream os;
    os << "no spectrum detected to the " << to_string(side) << " of t = " << zm.t;
    throw EmptySide(os.str());
  }
  std::vector<double> out(static_cast<std::size_t>(tau.size()));
  for (Index j = 0; j < tau.size(); ++j) out[static_cast<std::size_t>(j)] = zm.t + 1.0 / tau(j);
  return out;
}

std::vector<double> zm_bounds_one_sided(const TrialForms& forms, double t, Side side, double tol) {
  return zm_bounds_one_sided(zm_eigen(forms, t, tol), side);
}

EnclosureSet zm_enclosures(const TrialForms& forms, Window window, Index j_max, double tol) {
  if (!(window.a < window.b)) throw std::invalid_argument("zm_enclosures: window needs a < b");
  const NormalizedForms nf(forms, tol);
  const ZmSpectrum from_a = zm_eigen(nf, window.a, tol);
  const ZmSpectrum from_b = zm_eigen(nf, window.b, tol);
  const std::vector<double> uppers = zm_bounds_one_sided(from_a, Side::Right);
  const std::vector<double> lowers_by_j = zm_bounds_one_sided(from_b, Side::Left);

  // uppers ascend with j; lowers descend with j.
  std::vector<double> upper_in;
  std::vector<double> upper_res;
  for (std::size_t j = 0; j < uppers.size() && uppers[j] < window.b; ++j) {
    upper_in.push_back(uppers[j]);
    upper_res.push_back(from_a.residual_plus(static_cast<Index>(j)));
  }
  std::vector<double> lower_in;
  std::vector<double> lower_res;
  for (std::size_t j = 0; j < lowers_by_j.size() && lowers_by_j[j] > window.a; ++j) {
    lower_in.push_back(lowers_by_j[j]);
    lower_res.push_back(from_b.residual_minus(static_cast<Index>(j)));
  }
  std::reverse(lower_in.begin(), lower_in.end());
  std::reverse(lower_res.begin(), lower_res.end());

  EnclosureSet out;
  out.upper_count = static_cast<Index>(upper_in.size());
  out.lower_count = static_cast<Index>(lower_in.size());
  const std::size_t pairs =
      std::min({upper_in.size(), lower_in.size(), static_cast<std::size_t>(std::max<Index>(j_max, 0))});
  for (std::size_t k = 0; k < pairs; ++k) {
    Enclosure e;
    e.j = static_cast<Index>(k + 1);
    e.lower = lower_in[k];
    e.upper = upper_in[k];
    e.t_lower_from = window.b;
    e.t_upper_from = window.a;
    e.solver_residual = std::max(lower_res[k], upper_res[k]);
    if (e.lower > e.upper) e.flags |= kInconsistent;
    if (out.count_mismatch()) e.flags |= kCountMismatch;
    out.rows.push_back(e);
  }
  return out;
}

// ---------------------------------------------------------------------------

Matrix orthonormalize(const Matrix& w, const SymMatrix& m0, double tol) {
  if (w.rows() != m0.size()) throw std::invalid_argument("orthonormalize: size mismatch");
  const SymMatrix g = SymMatrix::from_upper(w.transpose() * m0.dense() * w);
  return w * inv_sqrt(g, tol).dense();
}

ResidualBounds residual_bounds(const Vector& f, const Vector& d, const Vector& delta) {
  const Index m = f.size();
  if (d.size() != m || delta.size() != m)
    throw std::invalid_argument("residual_bounds: arrays must have equal length");
  for (Index j = 0; j < m; ++j) {
    if (!(delta(j) > d(j))) throw GapViolation(static_cast<std::size_t>(j));
    if (d(j) < 0.0) throw std::invalid_argument("residual_bounds: negative distance");
    if (f(j) < d(j) * (1.0 - 1e-12) - 1e-14)
      throw std::invalid_argument("residual_bounds: F_j below d_j");
  }

  ResidualBounds out;
  constexpr double inf = std::numeric_limits<double>::infinity();
  out.eps = Vector::Constant(m, inf);
  out.graph_bounds = Vector::Constant(m, inf);
  for (Index j = 0; j < m; ++j) {
    const double dj2 = d(j) * d(j);
    const double gap2 = delta(j) * delta(j) - dj2;
    const double excess = std::max(0.0, f(j) * f(j) - dj2);
    double e2 = excess / gap2;
    for (Index k = 0; k < j; ++k) {
      const double ek2 = out.eps(k) * out.eps(k);
      e2 += ek2 / (1.0 - ek2) * (1.0 + (dj2 - d(k) * d(k)) / gap2);
    }
    const double ej = std::sqrt(e2);
    if (!(ej < 1.0)) {
      out.valid = false;
      break;
    }
    out.eps(j) = ej;
    out.graph_bounds(j) = std::sqrt(excess + dj2 * e2);
  }
  return out;
}

Detectability check_detectability(const TrialForms& forms, double t, double tol) {
  const Vector ritz = ritz_values(forms, tol);
  if (ritz.size() == 0 || ritz(0) > t) return Detectability::AllAbove;
  if (ritz(ritz.size() - 1) < t) return Detectability::AllBelow;
  return Detectability::Mixed;
}

}  // namespace encl
