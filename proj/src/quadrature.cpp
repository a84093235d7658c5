#include "encl/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace encl {

std::vector<QuadPoint1D> gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  std::vector<QuadPoint1D> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    // Newton iteration on P_n starting from the Chebyshev-like guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 1 ? x : p1;
      const double pnm1 = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pnm1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    out[static_cast<std::size_t>(i)] = {0.5 * (1.0 - x), 0.5 * w};
  }
  return out;
}

std::vector<QuadPoint2D> triangle_rule(int degree) {
  // The collapse map adds one degree in the first direction.
  const int n = degree / 2 + 2;
  const auto g = gauss_legendre(n);
  std::vector<QuadPoint2D> out;
  out.reserve(g.size() * g.size());
  for (const auto& a : g) {
    for (const auto& b : g) {
      // (a,b) in the unit square -> (x,y) = (a, b (1-a)), Jacobian (1-a).
      out.push_back({a.x, b.x * (1.0 - a.x), a.w * b.w * (1.0 - a.x)});
    }
  }
  return out;
}

}  // namespace encl
