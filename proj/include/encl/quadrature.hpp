#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace encl {

struct QuadPoint1D {
  double x;  // in [0, 1]
  double w;
};

/// n-point Gauss-Legendre rule on [0,1]; exact for polynomials of degree 2n-1.
std::vector<QuadPoint1D> gauss_legendre(int n);

struct QuadPoint2D {
  double x, y;  // reference triangle (0,0), (1,0), (0,1)
  double w;
};

/// Collapsed (Duffy) Gauss rule on the reference triangle, exact for total
/// degree <= `degree`.
std::vector<QuadPoint2D> triangle_rule(int degree);

/// Reproducible uniform draws in [-1, 1) that do not depend on the standard
/// library's distribution implementations.
class JitterSource {
 public:
  explicit JitterSource(std::uint64_t seed) : engine_(seed) {}
  double symmetric() { return 2.0 * static_cast<double>(engine_() >> 11) * 0x1.0p-53 - 1.0; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace encl
