#include "encl/davies_plum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace encl {

double bracket_span(const Vector& ritz, double t) {
  if (ritz.size() == 0) return 1.0;
  const double spread = ritz.maxCoeff() - ritz.minCoeff();
  if (spread > 0.0) return spread;
  const double dist = std::max(std::abs(t - ritz.minCoeff()), std::abs(t - ritz.maxCoeff()));
  return dist > 0.0 ? dist : 1.0;
}

namespace {

FixedPointResult solve_left(const NormalizedForms& nf, double t, Index j,
                            const FixedPointOptions& opts) {
  const Index n = nf.dim();
  if (j < 1 || j > n) {
    std::ostringstream os;
    os << "index j = " << j << " outside 1.." << n;
    throw NoSignChange(os.str());
  }
  const Vector ritz = sym_eigenvalues(nf.k1());
  const double span = bracket_span(ritz, t);
  const double fp_tol = opts.fp_tol.value_or(1e-12 * span);

  auto f = [&](double s) { return counting_function(nf, s, opts.tol)(j - 1); };
  auto g = [&](double alpha) { return f(t + alpha) + alpha; };

  FixedPointResult r;
  r.j = j;
  r.side = Side::Left;
  r.t = t;

  const double g0 = f(t);
  if (g0 <= 0.0) {
    // t itself is captured by the trial space: the fixed point is t.
    r.s_hat = r.bracket_lo = r.bracket_hi = t;
    r.bound = t;
    return r;
  }
  // g decreases to ritz_j - t as alpha -> -inf, so a root exists only below it.
  if (!(ritz(j - 1) < t)) {
    std::ostringstream os;
    os << "no fixed point for j = " << j << " to the left of t = " << t;
    throw NoSignChange(os.str());
  }

  double lo = -span;
  double hi = 0.0;
  int doublings = 0;
  while (g(lo) > 0.0) {
    hi = lo;
    lo *= 2.0;
    if (++doublings > 64) {
      std::ostringstream os;
      os << "bracket expansion failed for j = " << j << " at t = " << t;
      throw NoSignChange(os.str());
    }
  }

  int it = 0;
  r.history.emplace_back(t + lo, t + hi);
  while (hi - lo > fp_tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket at floating-point resolution
    if (g(mid) <= 0.0)
      lo = mid;
    else
      hi = mid;
    r.history.emplace_back(t + lo, t + hi);
    if (++it > opts.max_iterations) throw MaxIterations("fixed-point bisection did not converge");
  }

  r.iterations = it + doublings;
  r.bracket_lo = t + lo;
  r.bracket_hi = t + hi;
  r.bracket_width = hi - lo;
  r.s_hat = t + 0.5 * (lo + hi);
  r.f_at_root = f(r.s_hat);
  r.bound = r.bracket_lo - f(r.bracket_lo);
  return r;
}

FixedPointResult mirror(FixedPointResult r) {
  r.side = Side::Right;
  r.t = -r.t;
  r.s_hat = -r.s_hat;
  r.bound = -r.bound;
  const double lo = -r.bracket_hi;
  r.bracket_hi = -r.bracket_lo;
  r.bracket_lo = lo;
  for (auto& [a, b] : r.history) {
    const double na = -b;
    b = -a;
    a = na;
  }
  return r;
}

}  // namespace

FixedPointResult optimal_shift(const NormalizedForms& forms, double t, Index j, Side side,
                               const FixedPointOptions& opts) {
  if (side == Side::Left) return solve_left(forms, t, j, opts);
  return mirror(solve_left(forms.negated(), -t, j, opts));
}

FixedPointResult optimal_shift(const TrialForms& forms, double t, Index j, Side side,
                               const FixedPointOptions& opts) {
  return optimal_shift(NormalizedForms(forms, opts.tol), t, j, side, opts);
}

std::vector<DpBound> dp_bounds(const TrialForms& forms, double t, Index j_max, Side side,
                               const FixedPointOptions& opts) {
  const NormalizedForms nf(forms, opts.tol);
  std::vector<DpBound> out;
  for (Index j = 1; j <= j_max; ++j) {
    DpBound b;
    b.j = j;
    try {
      b.result = optimal_shift(nf, t, j, side, opts);
    } catch (const Error& e) {
      b.error = e.what();
    }
    out.push_back(std::move(b));
  }
  return out;
}

double equivalence_gap(const TrialForms& forms, double t, Index j, Side side,
                       const FixedPointOptions& opts) {
  const NormalizedForms nf(forms, opts.tol);
  const ZmSpectrum zm = zm_eigen(nf, t, opts.tol);
  const Vector& tau = side == Side::Left ? zm.tau_minus : zm.tau_plus;
  if (j < 1 || j > tau.size()) {
    std::ostringstream os;
    os << "pencil has fewer than " << j << " eigenvalues on the " << to_string(side) << " of t = " << t;
    throw EmptySide(os.str());
  }
  const FixedPointResult fp = optimal_shift(nf, t, j, side, opts);
  return std::abs(fp.s_hat - (t + 0.5 / tau(j - 1)));
}

FCurve f_curve(const TrialForms& forms, Index j, std::span<const double> grid, double tol) {
  FCurve out;
  if (grid.empty()) return out;
  const NormalizedForms nf(forms, tol);
  if (j < 1 || j > nf.dim()) throw std::invalid_argument("f_curve: index out of range");
  out.samples.reserve(grid.size());
  for (double s : grid) out.samples.push_back({s, counting_function(nf, s, tol)(j - 1)});
  for (std::size_t k = 1; k < out.samples.size(); ++k) {
    const auto& p = out.samples[k - 1];
    const auto& q = out.samples[k];
    const double ds = q.s - p.s;
    const double slack = 1e-9 * (1.0 + std::max(std::abs(p.f), std::abs(q.f)));
    if (std::abs(q.f - p.f) > std::abs(ds) + slack) out.lipschitz_ok = false;
    if (ds >= 0.0 && ((q.s + q.f) - (p.s + p.f) < -slack || (q.s - q.f) - (p.s - p.f) < -slack))
      out.monotone_ok = false;
  }
  return out;
}

}  // namespace encl
