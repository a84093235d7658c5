#pragma once

// Two-dimensional resonant cavity on (0,pi)^2:
//   M(E, H) = (rot H, rot E),  rot H = (dH/dy, -dH/dx),  rot E = dE2/dx - dE1/dy,
// with vanishing tangential E on the boundary, discretised by nodal Lagrange
// elements in all three components. Nonzero spectrum: +-sqrt(l^2 + m^2) with
// one mode per ordered pair (l, m) != (0, 0); 0 has infinite multiplicity.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "encl/forms.hpp"

namespace encl::maxwell2d {

struct Point2 {
  double x = 0.0, y = 0.0;
};

enum class BoundarySide : int { X0 = 0, XPi = 1, Y0 = 2, YPi = 3 };

struct BoundaryEdge {
  int a = 0, b = 0;
  BoundarySide side = BoundarySide::X0;
};

struct TriMesh {
  int nx = 0;
  std::vector<Point2> vertices;
  std::vector<std::array<int, 3>> triangles;  // counterclockwise
  std::vector<BoundaryEdge> boundary_edges;

  double h() const;          // longest edge
  double min_angle() const;  // radians
  double area() const;
  double signed_area(std::size_t tri) const;
};

/// nx-by-nx grid, each square cut along its (0,0)-(1,1) diagonal. Interior
/// vertices move by at most jitter * pi / nx; the amplitude is halved until
/// every triangle keeps a positive orientation.
TriMesh structured_tri_mesh(int nx, double jitter = 0.0, std::uint64_t seed = 0);

void write_mesh(std::ostream& os, const TriMesh& mesh);

struct MaxwellModel {
  TriMesh mesh;
  int order = 1;
  TrialForms forms;  // dofs ordered E1 | E2 | H
  Index n_e1 = 0, n_e2 = 0, n_h = 0;
  double h = 0.0;
};

MaxwellModel assemble_2d(const TriMesh& mesh, int order);

struct ExactEigenvalue {
  double value = 0.0;
  int multiplicity = 0;
  bool infinite = false;  // the kernel
};

/// All exact eigenvalues in [-max_val, max_val], ascending.
std::vector<ExactEigenvalue> exact_spectrum_2d(double max_val);

/// Distance from x to the nearest exact eigenvalue (0 included).
double distance_to_spectrum_2d(double x);

/// Uncertified Rayleigh-Ritz values of the pencil (M1, M0).
Vector galerkin_spectrum(const MaxwellModel& model);

}  // namespace encl::maxwell2d
