#include "encl/model1d.hpp"

#include <cmath>
#include <numbers>

#include "encl/quadrature.hpp"
#include "lagrange.hpp"

namespace encl::model1d {

double Mesh1D::h() const {
  double h = 0.0;
  for (std::size_t i = 1; i < nodes.size(); ++i) h = std::max(h, nodes[i] - nodes[i - 1]);
  return h;
}

Mesh1D uniform_mesh(int n_elems, double jitter, std::uint64_t seed) {
  if (n_elems < 2) throw std::invalid_argument("uniform_mesh: need at least 2 elements");
  if (!(jitter >= 0.0 && jitter < 1.0)) throw std::invalid_argument("uniform_mesh: jitter must be in [0,1)");
  const double h = std::numbers::pi / n_elems;
  Mesh1D mesh;
  mesh.nodes.resize(static_cast<std::size_t>(n_elems) + 1);
  JitterSource rng(seed);
  for (int i = 0; i <= n_elems; ++i) {
    double x = i * h;
    if (i > 0 && i < n_elems && jitter > 0.0) x += rng.symmetric() * jitter * 0.5 * h;
    mesh.nodes[static_cast<std::size_t>(i)] = x;
  }
  mesh.nodes.front() = 0.0;
  mesh.nodes.back() = std::numbers::pi;
  return mesh;
}

FEModel assemble_1d(const Mesh1D& mesh, int order) {
  if (order < 1 || order > 3) throw UnsupportedOrder(order);
  const Index n_el = mesh.elements();
  if (n_el < 1) throw std::invalid_argument("assemble_1d: empty mesh");

  const Index n_nodes = n_el * order + 1;
  const Index n_u = n_nodes - 2;
  const Index n_v = n_nodes;
  const Index n = n_u + n_v;
  // u-dof of global node g is g-1 (boundary nodes absent); v-dof is n_u + g.
  auto u_dof = [&](Index g) { return (g == 0 || g == n_nodes - 1) ? Index(-1) : g - 1; };
  auto v_dof = [&](Index g) { return n_u + g; };

  const auto quad = gauss_legendre(order + 1);
  const detail::Lagrange1D basis(order);
  const int nloc = order + 1;

  Matrix m0 = Matrix::Zero(n, n), m1 = Matrix::Zero(n, n), m2 = Matrix::Zero(n, n);
  for (Index e = 0; e < n_el; ++e) {
    const double x0 = mesh.nodes[static_cast<std::size_t>(e)];
    const double he = mesh.nodes[static_cast<std::size_t>(e) + 1] - x0;
    if (!(he > 0.0)) throw std::invalid_argument("assemble_1d: non-positive element length");
    Matrix mass = Matrix::Zero(nloc, nloc), stiff = Matrix::Zero(nloc, nloc),
           cross = Matrix::Zero(nloc, nloc);  // cross(a,b) = int phi_a' phi_b
    for (const auto& q : quad) {
      const auto val = basis.values(q.x);
      const auto der = basis.derivatives(q.x);
      for (int a = 0; a < nloc; ++a) {
        for (int b = 0; b < nloc; ++b) {
          mass(a, b) += q.w * he * val[a] * val[b];
          stiff(a, b) += q.w / he * der[a] * der[b];
          cross(a, b) += q.w * der[a] * val[b];
        }
      }
    }
    for (int a = 0; a < nloc; ++a) {
      const Index ga = e * order + a;
      for (int b = 0; b < nloc; ++b) {
        const Index gb = e * order + b;
        const Index ua = u_dof(ga), ub = u_dof(gb);
        const Index va = v_dof(ga), vb = v_dof(gb);
        if (ua >= 0 && ub >= 0) {
          m0(ua, ub) += mass(a, b);
          m2(ua, ub) += stiff(a, b);
        }
        m0(va, vb) += mass(a, b);
        m2(va, vb) += stiff(a, b);
        if (ua >= 0) {
          // <A(phi_a, 0), (0, psi_b)> = -int phi_a' psi_b
          m1(ua, vb) -= cross(a, b);
          // <A(0, psi_b), (phi_a, 0)> = int psi_b' phi_a
          m1(vb, ua) += cross(b, a);
        }
      }
    }
  }

  FEModel model;
  model.mesh = mesh;
  model.order = order;
  model.n_u = n_u;
  model.n_v = n_v;
  model.h = mesh.h();
  model.forms = TrialForms(SymMatrix::symmetrized(m0, 1e-13), SymMatrix::symmetrized(m1, 1e-12),
                           SymMatrix::symmetrized(m2, 1e-13));
  return model;
}

std::vector<double> exact_spectrum_1d(int k_max) {
  if (k_max < 1) throw std::invalid_argument("exact_spectrum_1d: k_max must be >= 1");
  std::vector<double> out;
  for (int k = -k_max; k <= k_max; ++k) out.push_back(static_cast<double>(k));
  return out;
}

}  // namespace encl::model1d
