#include <doctest.h>

#include <cmath>
#include <numbers>

#include "encl/enclosure.hpp"
#include "encl/errors.hpp"
#include "encl/model1d.hpp"

using namespace encl;
using namespace encl::model1d;

TEST_CASE("uniform_mesh") {
  SUBCASE("four equal elements") {
    const Mesh1D m = uniform_mesh(4);
    REQUIRE(m.nodes.size() == 5);
    for (int k = 0; k <= 4; ++k) CHECK(m.nodes[static_cast<std::size_t>(k)] == doctest::Approx(k * std::numbers::pi / 4).epsilon(1e-15));
    CHECK(m.nodes.front() == 0.0);
    CHECK(m.nodes.back() == std::numbers::pi);
  }
  SUBCASE("fixed-seed jittered snapshot") {
    const Mesh1D m = uniform_mesh(10, 0.3, 42);
    const Mesh1D again = uniform_mesh(10, 0.3, 42);
    CHECK(m.nodes == again.nodes);
    CHECK(m.nodes.front() == 0.0);
    CHECK(m.nodes.back() == std::numbers::pi);
    const double h = std::numbers::pi / 10;
    for (int k = 1; k < 10; ++k) {
      const double x = m.nodes[static_cast<std::size_t>(k)];
      CHECK(std::abs(x - k * h) <= 0.3 * h / 2 + 1e-15);
      CHECK(x > m.nodes[static_cast<std::size_t>(k - 1)]);
    }
    // Recorded at first build.
    CHECK(m.nodes[1] == doctest::Approx(0.33820710779456237).epsilon(1e-15));
    CHECK(m.nodes[5] == doctest::Approx(1.6088035314654607).epsilon(1e-15));
    CHECK(m.nodes[9] == doctest::Approx(2.8061215244077471).epsilon(1e-15));
    CHECK(uniform_mesh(10, 0.3, 43).nodes != m.nodes);
  }
  SUBCASE("preconditions") {
    CHECK_THROWS(uniform_mesh(1));
    CHECK_THROWS(uniform_mesh(4, 1.0));
  }
}

TEST_CASE("assemble_1d") {
  SUBCASE("single interior hat: mass 2h/3") {
    const FEModel m = assemble_1d(uniform_mesh(2), 1);
    REQUIRE(m.n_u == 1);
    REQUIRE(m.n_v == 3);
    // int over (0, pi) of the hat centred at pi/2 squared = 2 (pi/2) / 3
    CHECK(m.forms.m0()(0, 0) == doctest::Approx(std::numbers::pi / 3).epsilon(1e-14));
    // stiffness of the same hat: 2 / h
    CHECK(m.forms.m2()(0, 0) == doctest::Approx(4.0 / std::numbers::pi).epsilon(1e-14));
    // cross term <-phi', psi> vanishes against a constant: sum over the v-block row
    double s = 0.0;
    for (Index j = 0; j < m.n_v; ++j) s += m.forms.m1()(0, m.n_u + j);
    CHECK(std::abs(s) < 1e-14);
  }
  SUBCASE("block structure and symmetry") {
    for (int r = 1; r <= 3; ++r) {
      const FEModel m = assemble_1d(uniform_mesh(6, 0.2, 5), r);
      CHECK(m.n_u == 6 * r - 1);
      CHECK(m.n_v == 6 * r + 1);
      CHECK(m.forms.dim() == m.n_u + m.n_v);
      const Matrix& m1 = m.forms.m1().dense();
      CHECK(m1.topLeftCorner(m.n_u, m.n_u).cwiseAbs().maxCoeff() == 0.0);
      CHECK(m1.bottomRightCorner(m.n_v, m.n_v).cwiseAbs().maxCoeff() == 0.0);
      CHECK((m1 - m1.transpose()).cwiseAbs().maxCoeff() == 0.0);
      CHECK(m.forms.m0().dense().topRightCorner(m.n_u, m.n_v).cwiseAbs().maxCoeff() == 0.0);
      CHECK_NOTHROW(cholesky_spd(m.forms.m0()));
    }
  }
  SUBCASE("q_t is positive semidefinite") {
    for (int r = 1; r <= 3; ++r)
      for (int n : {3, 8, 15}) {
        const FEModel m = assemble_1d(uniform_mesh(n, 0.4, 9), r);
        const Vector ev = sym_generalized_eig(shift(m.forms, 0.7).qt, m.forms.m0()).values;
        CHECK(ev(0) >= -1e-12 * std::max(1.0, ev.cwiseAbs().maxCoeff()));
      }
  }
  SUBCASE("constant v is in the kernel of M1 and M2") {
    const FEModel m = assemble_1d(uniform_mesh(7, 0.1, 2), 2);
    Vector x = Vector::Zero(m.forms.dim());
    x.tail(m.n_v).setOnes();
    CHECK((m.forms.m1().dense() * x).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((m.forms.m2().dense() * x).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("unsupported order") {
    CHECK_THROWS_AS(assemble_1d(uniform_mesh(4), 0), UnsupportedOrder);
    CHECK_THROWS_AS(assemble_1d(uniform_mesh(4), 4), UnsupportedOrder);
  }
}

TEST_CASE("exact_spectrum_1d") {
  const auto s = exact_spectrum_1d(3);
  CHECK(s == std::vector<double>{-3, -2, -1, 0, 1, 2, 3});
}

TEST_CASE("Ritz values approach the exact spectrum") {
  const FEModel m = assemble_1d(uniform_mesh(40), 2);
  const Vector ritz = ritz_values(m.forms);
  for (int k : {-3, -2, -1, 0, 1, 2, 3}) {
    double best = 1e9;
    for (Index i = 0; i < ritz.size(); ++i) best = std::min(best, std::abs(ritz(i) - k));
    CHECK(best < 1e-5);
  }
}

TEST_CASE("enclosures under refinement") {
  for (int r = 1; r <= 3; ++r) {
    std::vector<double> w1, w2;
    for (int n : {10, 20, 40}) {
      const FEModel m = assemble_1d(uniform_mesh(n), r);
      const EnclosureSet s = zm_enclosures(m.forms, {0.5, 2.5}, 2);
      REQUIRE(s.rows.size() == 2);
      CHECK(s.rows[0].contains(1.0));
      CHECK(s.rows[1].contains(2.0));
      w1.push_back(s.rows[0].width());
      w2.push_back(s.rows[1].width());
      // nothing certified in the gap between 0 and 1
      CHECK(zm_enclosures(m.forms, {0.2, 0.8}, 3).rows.empty());
    }
    for (std::size_t k = 1; k < w1.size(); ++k) {
      if (w1[k] > 1e-12) CHECK(w1[k] <= 1.05 * w1[k - 1]);
      if (w2[k] > 1e-12) CHECK(w2[k] <= 1.05 * w2[k - 1]);
    }
  }
}
