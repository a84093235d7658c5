#pragma once

// Geometric route to the same bounds: for the left side, find the shift s < t
// closest to t with t - s = F^j(s). Then s - F^j(s) is a lower bound for the
// j-th eigenvalue left of t, and s coincides with t + 1/(2 tau_j^-) from the
// pencil. The right side is handled by passing to -A.

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "encl/enclosure.hpp"

namespace encl {

struct FixedPointResult {
  Index j = 0;  // 1-based
  Side side = Side::Left;
  double t = 0.0;
  double s_hat = 0.0;       // midpoint of the final bracket
  double f_at_root = 0.0;   // F^j(s_hat)
  double bound = 0.0;       // certified bound, taken at the bracket end where the
                            // fixed-point inequality is known to hold
  int iterations = 0;
  double bracket_width = 0.0;
  double bracket_lo = 0.0;  // shifts (not offsets); s_hat lies between them
  double bracket_hi = 0.0;
  std::vector<std::pair<double, double>> history;  // bracket per iteration
};

struct FixedPointOptions {
  /// Absolute bracket width; defaults to 1e-12 times the Ritz-value span.
  std::optional<double> fp_tol;
  int max_iterations = 400;
  double tol = kDefaultTol;
};

/// Bisection on g(alpha) = F^j(t + alpha) + alpha over alpha <= 0 (left side).
/// g is nondecreasing with Lipschitz constant 2; the bracket keeps g <= 0 at
/// its far end and g > 0 at its near end, so it converges to the root closest
/// to t. Throws NoSignChange when the side is undetectable for index j.
FixedPointResult optimal_shift(const TrialForms& forms, double t, Index j, Side side,
                               const FixedPointOptions& opts = {});
FixedPointResult optimal_shift(const NormalizedForms& forms, double t, Index j, Side side,
                               const FixedPointOptions& opts = {});

struct DpBound {
  Index j = 0;
  std::optional<FixedPointResult> result;
  std::string error;  // set when result is empty

  bool ok() const noexcept { return result.has_value(); }
};

/// Hierarchical bounds for j = 1..j_max; failures are reported per index.
std::vector<DpBound> dp_bounds(const TrialForms& forms, double t, Index j_max, Side side,
                               const FixedPointOptions& opts = {});

/// |s_hat - (t + 1/(2 tau_j))| comparing the fixed point with the pencil.
double equivalence_gap(const TrialForms& forms, double t, Index j, Side side,
                       const FixedPointOptions& opts = {});

struct CurveSample {
  double s = 0.0;
  double f = 0.0;
};

struct FCurve {
  std::vector<CurveSample> samples;
  bool lipschitz_ok = true;  // |F(s)-F(s')| <= |s-s'| between neighbours
  bool monotone_ok = true;   // s +- F(s) nondecreasing between neighbours
};

FCurve f_curve(const TrialForms& forms, Index j, std::span<const double> grid,
               double tol = kDefaultTol);

/// Default scale used for brackets and tolerances: the spread of the Ritz
/// values, or the distance from t to them when the spread is zero.
double bracket_span(const Vector& ritz, double t);

}  // namespace encl
