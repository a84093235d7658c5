#pragma once

// One-dimensional analogue of the Maxwell block operator:
//   A(u, v) = (v', -u')  on (0, pi),  u(0) = u(pi) = 0,
// discretised with continuous Lagrange elements of order 1..3 in both
// components. The spectrum is {0} u {+-k : k >= 1}, all simple.

#include <cstdint>
#include <vector>

#include "encl/forms.hpp"

namespace encl::model1d {

struct Mesh1D {
  std::vector<double> nodes;  // strictly ascending, nodes.front() == 0, nodes.back() == pi

  Index elements() const noexcept { return static_cast<Index>(nodes.size()) - 1; }
  double h() const;  // largest element length
};

/// n_elems equal elements with interior nodes moved by at most jitter * h / 2.
Mesh1D uniform_mesh(int n_elems, double jitter = 0.0, std::uint64_t seed = 0);

struct FEModel {
  Mesh1D mesh;
  int order = 1;
  TrialForms forms;
  Index n_u = 0;  // u-block dofs (Dirichlet nodes removed); they come first
  Index n_v = 0;  // v-block dofs
  double h = 0.0;
};

FEModel assemble_1d(const Mesh1D& mesh, int order);

/// {-k_max, ..., -1, 0, 1, ..., k_max}.
std::vector<double> exact_spectrum_1d(int k_max);

}  // namespace encl::model1d
