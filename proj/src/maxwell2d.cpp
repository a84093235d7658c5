#include "encl/maxwell2d.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <ostream>

#include "encl/enclosure.hpp"
#include "encl/quadrature.hpp"

namespace encl::maxwell2d {

namespace {

double edge_length(const Point2& p, const Point2& q) { return std::hypot(q.x - p.x, q.y - p.y); }

unsigned side_bit(BoundarySide s) { return 1u << static_cast<int>(s); }

// Reference P_r basis on the triangle (0,0),(1,0),(0,1). Local node order:
// vertices 0,1,2, then for r = 2 the midpoints of edges (0,1), (1,2), (2,0).
struct TriBasis {
  int order;
  int count() const { return order == 1 ? 3 : 6; }

  void eval(double xi, double eta, double* val, double (*grad)[2]) const {
    const double l[3] = {1.0 - xi - eta, xi, eta};
    const double dl[3][2] = {{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}};
    if (order == 1) {
      for (int a = 0; a < 3; ++a) {
        val[a] = l[a];
        grad[a][0] = dl[a][0];
        grad[a][1] = dl[a][1];
      }
      return;
    }
    for (int a = 0; a < 3; ++a) {
      val[a] = l[a] * (2.0 * l[a] - 1.0);
      for (int d = 0; d < 2; ++d) grad[a][d] = (4.0 * l[a] - 1.0) * dl[a][d];
    }
    constexpr int edges[3][2] = {{0, 1}, {1, 2}, {2, 0}};
    for (int e = 0; e < 3; ++e) {
      const int p = edges[e][0], q = edges[e][1];
      val[3 + e] = 4.0 * l[p] * l[q];
      for (int d = 0; d < 2; ++d) grad[3 + e][d] = 4.0 * (dl[p][d] * l[q] + l[p] * dl[q][d]);
    }
  }
};

}  // namespace

double TriMesh::h() const {
  double h = 0.0;
  for (const auto& t : triangles)
    for (int k = 0; k < 3; ++k)
      h = std::max(h, edge_length(vertices[static_cast<std::size_t>(t[static_cast<std::size_t>(k)])],
                                  vertices[static_cast<std::size_t>(t[static_cast<std::size_t>((k + 1) % 3)])]));
  return h;
}

double TriMesh::signed_area(std::size_t tri) const {
  const auto& t = triangles[tri];
  const Point2& a = vertices[static_cast<std::size_t>(t[0])];
  const Point2& b = vertices[static_cast<std::size_t>(t[1])];
  const Point2& c = vertices[static_cast<std::size_t>(t[2])];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

double TriMesh::area() const {
  double s = 0.0;
  for (std::size_t k = 0; k < triangles.size(); ++k) s += signed_area(k);
  return s;
}

double TriMesh::min_angle() const {
  double best = std::numbers::pi;
  for (const auto& t : triangles) {
    for (int k = 0; k < 3; ++k) {
      const Point2& p = vertices[static_cast<std::size_t>(t[static_cast<std::size_t>(k)])];
      const Point2& q = vertices[static_cast<std::size_t>(t[static_cast<std::size_t>((k + 1) % 3)])];
      const Point2& r = vertices[static_cast<std::size_t>(t[static_cast<std::size_t>((k + 2) % 3)])];
      const double ux = q.x - p.x, uy = q.y - p.y, vx = r.x - p.x, vy = r.y - p.y;
      const double ang = std::atan2(std::abs(ux * vy - uy * vx), ux * vx + uy * vy);
      best = std::min(best, ang);
    }
  }
  return best;
}

TriMesh structured_tri_mesh(int nx, double jitter, std::uint64_t seed) {
  if (nx < 2) throw std::invalid_argument("structured_tri_mesh: nx must be >= 2");
  if (!(jitter >= 0.0 && jitter < 0.5))
    throw std::invalid_argument("structured_tri_mesh: jitter must be in [0, 0.5)");
  const double h = std::numbers::pi / nx;
  auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };

  TriMesh mesh;
  mesh.nx = nx;
  for (int j = 0; j < nx; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j), v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      mesh.triangles.push_back({v00, v10, v11});
      mesh.triangles.push_back({v00, v11, v01});
    }
  }
  for (int k = 0; k < nx; ++k) {
    mesh.boundary_edges.push_back({vid(k, 0), vid(k + 1, 0), BoundarySide::Y0});
    mesh.boundary_edges.push_back({vid(k, nx), vid(k + 1, nx), BoundarySide::YPi});
    mesh.boundary_edges.push_back({vid(0, k), vid(0, k + 1), BoundarySide::X0});
    mesh.boundary_edges.push_back({vid(nx, k), vid(nx, k + 1), BoundarySide::XPi});
  }

  double amplitude = jitter * h / std::numbers::sqrt2;  // per coordinate
  for (;;) {
    mesh.vertices.assign(static_cast<std::size_t>((nx + 1) * (nx + 1)), Point2{});
    JitterSource rng(seed);
    for (int j = 0; j <= nx; ++j) {
      for (int i = 0; i <= nx; ++i) {
        Point2 p{i == nx ? std::numbers::pi : i * h, j == nx ? std::numbers::pi : j * h};
        if (i > 0 && i < nx && j > 0 && j < nx && amplitude > 0.0) {
          p.x += amplitude * rng.symmetric();
          p.y += amplitude * rng.symmetric();
        }
        mesh.vertices[static_cast<std::size_t>(vid(i, j))] = p;
      }
    }
    bool ok = true;
    for (std::size_t k = 0; k < mesh.triangles.size() && ok; ++k)
      ok = mesh.signed_area(k) > 1e-3 * h * h;
    if (ok) break;
    amplitude *= 0.5;
  }
  return mesh;
}

void write_mesh(std::ostream& os, const TriMesh& mesh) {
  os.precision(17);
  os << "vertices " << mesh.vertices.size() << '\n';
  for (const auto& p : mesh.vertices) os << p.x << ' ' << p.y << '\n';
  os << "triangles " << mesh.triangles.size() << '\n';
  for (const auto& t : mesh.triangles) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  os << "boundary " << mesh.boundary_edges.size() << '\n';
  for (const auto& e : mesh.boundary_edges) os << e.a << ' ' << e.b << ' ' << static_cast<int>(e.side) << '\n';
}

MaxwellModel assemble_2d(const TriMesh& mesh, int order) {
  if (order < 1 || order > 2) throw UnsupportedOrder(order);

  // Nodes: vertices, then (order 2) one per edge. Each node records the
  // boundary sides it lies on.
  const int nv = static_cast<int>(mesh.vertices.size());
  std::vector<unsigned> sides(static_cast<std::size_t>(nv), 0u);
  for (const auto& e : mesh.boundary_edges) {
    sides[static_cast<std::size_t>(e.a)] |= side_bit(e.side);
    sides[static_cast<std::size_t>(e.b)] |= side_bit(e.side);
  }
  std::vector<std::array<int, 6>> tri_nodes(mesh.triangles.size());
  int n_nodes = nv;
  if (order == 2) {
    std::map<std::pair<int, int>, int> edge_node;
    for (const auto& e : mesh.boundary_edges) {
      const auto key = std::minmax(e.a, e.b);
      auto [it, inserted] = edge_node.emplace(key, n_nodes);
      if (inserted) {
        ++n_nodes;
        sides.push_back(0u);
      }
      sides[static_cast<std::size_t>(it->second)] |= side_bit(e.side);
    }
    for (std::size_t k = 0; k < mesh.triangles.size(); ++k) {
      const auto& t = mesh.triangles[k];
      constexpr int local_edges[3][2] = {{0, 1}, {1, 2}, {2, 0}};
      for (int e = 0; e < 3; ++e) {
        const auto key = std::minmax(t[static_cast<std::size_t>(local_edges[e][0])],
                                     t[static_cast<std::size_t>(local_edges[e][1])]);
        auto [it, inserted] = edge_node.emplace(key, n_nodes);
        if (inserted) {
          ++n_nodes;
          sides.push_back(0u);
        }
        tri_nodes[k][static_cast<std::size_t>(3 + e)] = it->second;
      }
    }
  }
  for (std::size_t k = 0; k < mesh.triangles.size(); ++k)
    for (std::size_t a = 0; a < 3; ++a) tri_nodes[k][a] = mesh.triangles[k][a];

  // Tangential constraints: E1 vanishes on y = 0, pi; E2 on x = 0, pi.
  const unsigned y_sides = side_bit(BoundarySide::Y0) | side_bit(BoundarySide::YPi);
  const unsigned x_sides = side_bit(BoundarySide::X0) | side_bit(BoundarySide::XPi);
  std::vector<Index> e1(static_cast<std::size_t>(n_nodes), -1), e2(static_cast<std::size_t>(n_nodes), -1),
      hd(static_cast<std::size_t>(n_nodes), -1);
  Index next = 0;
  for (int g = 0; g < n_nodes; ++g)
    if (!(sides[static_cast<std::size_t>(g)] & y_sides)) e1[static_cast<std::size_t>(g)] = next++;
  const Index n_e1 = next;
  for (int g = 0; g < n_nodes; ++g)
    if (!(sides[static_cast<std::size_t>(g)] & x_sides)) e2[static_cast<std::size_t>(g)] = next++;
  const Index n_e2 = next - n_e1;
  for (int g = 0; g < n_nodes; ++g) hd[static_cast<std::size_t>(g)] = next++;
  const Index n = next;

  const TriBasis basis{order};
  const int nloc = basis.count();
  const auto quad = triangle_rule(2 * order);

  Matrix m0 = Matrix::Zero(n, n), m1 = Matrix::Zero(n, n), m2 = Matrix::Zero(n, n);
  std::vector<double> val(6);
  std::vector<std::array<double, 2>> gref(6), gx(6);
  for (std::size_t k = 0; k < mesh.triangles.size(); ++k) {
    const auto& t = mesh.triangles[k];
    const Point2& p0 = mesh.vertices[static_cast<std::size_t>(t[0])];
    const Point2& p1 = mesh.vertices[static_cast<std::size_t>(t[1])];
    const Point2& p2 = mesh.vertices[static_cast<std::size_t>(t[2])];
    const double j00 = p1.x - p0.x, j01 = p2.x - p0.x, j10 = p1.y - p0.y, j11 = p2.y - p0.y;
    const double det = j00 * j11 - j01 * j10;
    if (!(det > 0.0)) throw std::invalid_argument("assemble_2d: degenerate or inverted triangle");
    // J^{-T}
    const double i00 = j11 / det, i01 = -j10 / det, i10 = -j01 / det, i11 = j00 / det;

    Matrix mass = Matrix::Zero(nloc, nloc), dxdx = mass, dydy = mass, dxdy = mass, dxv = mass, dyv = mass;
    for (const auto& q : quad) {
      basis.eval(q.x, q.y, val.data(), reinterpret_cast<double(*)[2]>(gref.data()));
      for (int a = 0; a < nloc; ++a) {
        gx[static_cast<std::size_t>(a)][0] = i00 * gref[static_cast<std::size_t>(a)][0] + i01 * gref[static_cast<std::size_t>(a)][1];
        gx[static_cast<std::size_t>(a)][1] = i10 * gref[static_cast<std::size_t>(a)][0] + i11 * gref[static_cast<std::size_t>(a)][1];
      }
      const double w = q.w * det;
      for (int a = 0; a < nloc; ++a) {
        const auto sa = static_cast<std::size_t>(a);
        for (int b = 0; b < nloc; ++b) {
          const auto sb = static_cast<std::size_t>(b);
          mass(a, b) += w * val[sa] * val[sb];
          dxdx(a, b) += w * gx[sa][0] * gx[sb][0];
          dydy(a, b) += w * gx[sa][1] * gx[sb][1];
          dxdy(a, b) += w * gx[sa][0] * gx[sb][1];  // int d_x phi_a d_y phi_b
          dxv(a, b) += w * gx[sa][0] * val[sb];     // int d_x phi_a phi_b
          dyv(a, b) += w * gx[sa][1] * val[sb];     // int d_y phi_a phi_b
        }
      }
    }

    for (int a = 0; a < nloc; ++a) {
      const auto ga = static_cast<std::size_t>(tri_nodes[k][static_cast<std::size_t>(a)]);
      for (int b = 0; b < nloc; ++b) {
        const auto gb = static_cast<std::size_t>(tri_nodes[k][static_cast<std::size_t>(b)]);
        const Index e1a = e1[ga], e1b = e1[gb], e2a = e2[ga], e2b = e2[gb], ha = hd[ga], hb = hd[gb];
        // Gram
        if (e1a >= 0 && e1b >= 0) m0(e1a, e1b) += mass(a, b);
        if (e2a >= 0 && e2b >= 0) m0(e2a, e2b) += mass(a, b);
        m0(ha, hb) += mass(a, b);
        // <rot E, rot E'>, rot(phi,0) = -d_y phi, rot(0,phi) = d_x phi
        if (e1a >= 0 && e1b >= 0) m2(e1a, e1b) += dydy(a, b);
        if (e2a >= 0 && e2b >= 0) m2(e2a, e2b) += dxdx(a, b);
        if (e1a >= 0 && e2b >= 0) m2(e1a, e2b) -= dxdy(b, a);
        if (e2a >= 0 && e1b >= 0) m2(e2a, e1b) -= dxdy(a, b);
        // <rot H, rot H'> = int grad H . grad H'
        m2(ha, hb) += dxdx(a, b) + dydy(a, b);
        // <A b_a, b_b>: A(E1 phi) = (0,0,-d_y phi), A(E2 phi) = (0,0,d_x phi),
        // A(H psi) = (d_y psi, -d_x psi, 0).
        if (e1a >= 0) m1(e1a, hb) -= dyv(a, b);
        if (e2a >= 0) m1(e2a, hb) += dxv(a, b);
        if (e1b >= 0) m1(ha, e1b) += dyv(a, b);
        if (e2b >= 0) m1(ha, e2b) -= dxv(a, b);
      }
    }
  }

  MaxwellModel model;
  model.mesh = mesh;
  model.order = order;
  model.n_e1 = n_e1;
  model.n_e2 = n_e2;
  model.n_h = n - n_e1 - n_e2;
  model.h = mesh.h();
  model.forms = TrialForms(SymMatrix::symmetrized(m0, 1e-13), SymMatrix::symmetrized(m1, 1e-12),
                           SymMatrix::symmetrized(m2, 1e-12));
  return model;
}

std::vector<ExactEigenvalue> exact_spectrum_2d(double max_val) {
  if (!(max_val > 0.0)) throw std::invalid_argument("exact_spectrum_2d: max_val must be positive");
  std::map<long, int> by_square;
  const long lmax = static_cast<long>(std::floor(max_val));
  const double cap = max_val * max_val * (1.0 + 1e-14);
  for (long l = 0; l <= lmax; ++l)
    for (long m = 0; m <= lmax; ++m)
      if ((l != 0 || m != 0) && static_cast<double>(l * l + m * m) <= cap) ++by_square[l * l + m * m];

  std::vector<ExactEigenvalue> out;
  for (auto it = by_square.rbegin(); it != by_square.rend(); ++it)
    out.push_back({-std::sqrt(static_cast<double>(it->first)), it->second, false});
  out.push_back({0.0, 0, true});
  for (const auto& [sq, mult] : by_square) out.push_back({std::sqrt(static_cast<double>(sq)), mult, false});
  return out;
}

double distance_to_spectrum_2d(double x) {
  const double ax = std::abs(x);
  double best = ax;  // distance to 0
  const long lmax = static_cast<long>(std::ceil(ax)) + 1;
  for (long l = 0; l <= lmax; ++l)
    for (long m = 0; m <= lmax; ++m)
      if (l != 0 || m != 0) best = std::min(best, std::abs(ax - std::sqrt(static_cast<double>(l * l + m * m))));
  return best;
}

Vector galerkin_spectrum(const MaxwellModel& model) { return ritz_values(model.forms); }

}  // namespace encl::maxwell2d
