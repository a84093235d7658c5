#pragma once

// Local counting functions, the Zimmermann-Mertins pencil and the certified
// eigenvalue bounds derived from it.
//
// Notation: for a shift t, q_t(u,v) = <(A-t)u,(A-t)v> and l_t(u,v) = <(A-t)u,v>.
// F^j(t) is the square root of the j-th eigenvalue of q_t against <.,.> on the
// trial space; it dominates the distance from t to the j-th nearest spectral
// point. The pencil tau q_t = l_t yields bounds t + 1/tau: negative tau give
// lower bounds for the eigenvalues left of t, positive tau upper bounds for
// the eigenvalues right of t.

#include <cstdint>
#include <string>
#include <vector>

#include "encl/forms.hpp"

namespace encl {

enum class Side { Left, Right };

const char* to_string(Side side);

struct CountingValues {
  double t = 0.0;
  Vector f;  // F^1(t) <= ... <= F^n(t)
  Matrix u;  // column j is an M0-orthonormal eigenvector for F^j(t)
};

/// Eigenvalue counts of the pencil at t; the four entries always sum to n.
struct Signature {
  Index n_inf = 0;    // dim ker Q_t: t is an eigenvalue captured by the trial space
  Index n_zero = 0;   // zero eigenvalues of the deflated pencil
  Index n_minus = 0;
  Index n_plus = 0;

  Index total() const noexcept { return n_inf + n_zero + n_minus + n_plus; }
  friend bool operator==(const Signature&, const Signature&) = default;
};

struct ZmSpectrum {
  double t = 0.0;
  Vector tau_minus;  // ascending: tau_1^- <= ... < 0
  Vector tau_plus;   // descending: tau_1^+ >= ... > 0
  Matrix vec_minus;  // columns in the original trial basis, Q_t-orthonormal
  Matrix vec_plus;
  Vector residual_minus;  // |l y - tau q y| per pair, normalized coordinates
  Vector residual_plus;
  Signature signature;

  bool deflated() const noexcept { return signature.n_inf > 0; }
};

enum class Detectability { AllAbove, AllBelow, Mixed };

const char* to_string(Detectability d);

struct Window {
  double a = 0.0;
  double b = 0.0;
};

enum EnclosureFlag : std::uint32_t {
  kNone = 0,
  kInconsistent = 1u << 0,   // lower > upper
  kCountMismatch = 1u << 1,  // upper and lower bound counts in the window differ
};

struct Enclosure {
  Index j = 0;  // 1-based rank within the window
  double lower = 0.0;
  double upper = 0.0;
  double t_lower_from = 0.0;
  double t_upper_from = 0.0;
  std::uint32_t flags = kNone;
  double solver_residual = 0.0;

  double width() const noexcept { return upper - lower; }
  bool inconsistent() const noexcept { return (flags & kInconsistent) != 0; }
  bool contains(double x) const noexcept { return lower <= x && x <= upper; }
};

struct EnclosureSet {
  std::vector<Enclosure> rows;
  Index upper_count = 0;  // certified upper bounds below b
  Index lower_count = 0;  // certified lower bounds above a

  bool count_mismatch() const noexcept { return upper_count != lower_count; }
  bool any_inconsistent() const;
};

struct ResidualBounds {
  Vector eps;
  Vector graph_bounds;
  bool valid = true;  // false once some eps_j >= 1; later entries are +inf
};

/// Eigenvalues of the pencil (M1, M0): the Rayleigh-Ritz values of the trial space.
Vector ritz_values(const TrialForms& forms, double tol = kDefaultTol);

CountingValues local_counting(const TrialForms& forms, double t, double tol = kDefaultTol);
CountingValues local_counting(const NormalizedForms& forms, double t, double tol = kDefaultTol);
/// F^1(t)..F^n(t) only.
Vector counting_function(const NormalizedForms& forms, double t, double tol = kDefaultTol);

Signature signature(const TrialForms& forms, double t, double tol = kDefaultTol);

ZmSpectrum zm_eigen(const TrialForms& forms, double t, double tol = kDefaultTol);
ZmSpectrum zm_eigen(const NormalizedForms& forms, double t, double tol = kDefaultTol);

/// t + 1/tau_j for the requested side, ordered by j. Throws EmptySide when the
/// pencil has no eigenvalue of that sign.
std::vector<double> zm_bounds_one_sided(const TrialForms& forms, double t, Side side,
                                        double tol = kDefaultTol);
std::vector<double> zm_bounds_one_sided(const ZmSpectrum& zm, Side side);

/// Upper bounds from t = a (right side), lower bounds from t = b (left side);
/// the k-th smallest upper below b is paired with the k-th smallest lower above a.
EnclosureSet zm_enclosures(const TrialForms& forms, Window window, Index j_max,
                           double tol = kDefaultTol);

/// V = W G^{-1/2} with G = W^T M0 W.
Matrix orthonormalize(const Matrix& w, const SymMatrix& m0, double tol = kDefaultTol);

/// Eigenvector residuals: f = F^j(t), d = distances to the j-th nearest spectral
/// point, delta = distances to the rest of the spectrum. d and delta are inputs
/// and are never estimated here.
ResidualBounds residual_bounds(const Vector& f, const Vector& d, const Vector& delta);

Detectability check_detectability(const TrialForms& forms, double t, double tol = kDefaultTol);

}  // namespace encl
