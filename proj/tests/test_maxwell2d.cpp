#include <doctest.h>

#include <cmath>
#include <numbers>
#include <algorithm>
#include <set>
#include <sstream>

#include "encl/enclosure.hpp"
#include "encl/errors.hpp"
#include "encl/maxwell2d.hpp"

using namespace encl;
using namespace encl::maxwell2d;

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST_CASE("structured_tri_mesh") {
  SUBCASE("smallest mesh") {
    const TriMesh m = structured_tri_mesh(2);
    CHECK(m.triangles.size() == 8);
    CHECK(m.vertices.size() == 9);
    CHECK(m.boundary_edges.size() == 8);
  }
  SUBCASE("orientation, coverage and boundary tags") {
    for (double jitter : {0.0, 0.25, 0.45}) {
      const TriMesh m = structured_tri_mesh(6, jitter, 11);
      CHECK(m.triangles.size() == 72);
      for (std::size_t k = 0; k < m.triangles.size(); ++k) CHECK(m.signed_area(k) > 0.0);
      CHECK(std::abs(m.area() - kPi * kPi) <= 1e-12);
      CHECK(m.min_angle() > 0.0);
      for (const auto& e : m.boundary_edges) {
        const Point2 a = m.vertices[static_cast<std::size_t>(e.a)], b = m.vertices[static_cast<std::size_t>(e.b)];
        switch (e.side) {
          case BoundarySide::X0: CHECK((a.x == 0.0 && b.x == 0.0)); break;
          case BoundarySide::XPi: CHECK((a.x == kPi && b.x == kPi)); break;
          case BoundarySide::Y0: CHECK((a.y == 0.0 && b.y == 0.0)); break;
          case BoundarySide::YPi: CHECK((a.y == kPi && b.y == kPi)); break;
        }
      }
    }
  }
  SUBCASE("displacement bound") {
    const int nx = 8;
    const double h = kPi / nx;
    const TriMesh m = structured_tri_mesh(nx, 0.25, 7);
    for (int j = 0; j <= nx; ++j)
      for (int i = 0; i <= nx; ++i) {
        const Point2 p = m.vertices[static_cast<std::size_t>(j * (nx + 1) + i)];
        CHECK(std::hypot(p.x - i * h, p.y - j * h) <= 0.25 * h + 1e-15);
      }
  }
  SUBCASE("fixed-seed snapshot") {
    const TriMesh m = structured_tri_mesh(8, 0.25, 7);
    CHECK(m.vertices[10].x == doctest::Approx(0.42801796068431663).epsilon(1e-15));
    CHECK(m.vertices[10].y == doctest::Approx(0.45508010196202914).epsilon(1e-15));
    CHECK(m.vertices[40].x == doctest::Approx(1.5922556029231505).epsilon(1e-15));
    CHECK(m.vertices[70].y == doctest::Approx(2.8137254503956082).epsilon(1e-15));
    CHECK(m.min_angle() == doctest::Approx(0.48775590172287964).epsilon(1e-13));
    std::ostringstream a, b;
    write_mesh(a, m);
    write_mesh(b, structured_tri_mesh(8, 0.25, 7));
    CHECK(a.str() == b.str());
  }
  SUBCASE("unjittered mesh is symmetric under swapping x and y") {
    const TriMesh m = structured_tri_mesh(5);
    auto key = [](Point2 p) { return std::make_pair(std::round(p.x * 1e12), std::round(p.y * 1e12)); };
    std::set<std::array<std::pair<double, double>, 3>> tris, swapped;
    for (const auto& t : m.triangles) {
      std::array<std::pair<double, double>, 3> v, w;
      for (std::size_t k = 0; k < 3; ++k) {
        const Point2 p = m.vertices[static_cast<std::size_t>(t[k])];
        v[k] = key(p);
        w[k] = key({p.y, p.x});
      }
      std::sort(v.begin(), v.end());
      std::sort(w.begin(), w.end());
      tris.insert(v);
      swapped.insert(w);
    }
    CHECK(tris == swapped);
  }
  SUBCASE("preconditions") {
    CHECK_THROWS(structured_tri_mesh(1));
    CHECK_THROWS(structured_tri_mesh(4, 0.5));
  }
}

TEST_CASE("assemble_2d") {
  SUBCASE("q_t positive semidefinite") {
    for (int r = 1; r <= 2; ++r) {
      const MaxwellModel m = assemble_2d(structured_tri_mesh(4, 0.2, 3), r);
      const Vector ev = sym_generalized_eig(shift(m.forms, 0.6).qt, m.forms.m0()).values;
      CHECK(ev(0) >= -1e-10);
    }
  }
  SUBCASE("M1 is symmetric with zero diagonal blocks") {
    const MaxwellModel m = assemble_2d(structured_tri_mesh(4, 0.2, 3), 2);
    const Matrix& m1 = m.forms.m1().dense();
    CHECK((m1 - m1.transpose()).cwiseAbs().maxCoeff() == 0.0);
    const Index ne = m.n_e1 + m.n_e2;
    CHECK(m1.topLeftCorner(ne, ne).cwiseAbs().maxCoeff() == 0.0);
    CHECK(m1.bottomRightCorner(m.n_h, m.n_h).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("constant H lies in the kernel of M1 and M2") {
    for (int r = 1; r <= 2; ++r) {
      const MaxwellModel m = assemble_2d(structured_tri_mesh(5, 0.3, 1), r);
      Vector x = Vector::Zero(m.forms.dim());
      x.tail(m.n_h).setOnes();
      CHECK((m.forms.m1().dense() * x).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((m.forms.m2().dense() * x).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  SUBCASE("tangential constraints remove the right number of dofs") {
    const int nx = 4;
    const MaxwellModel p1 = assemble_2d(structured_tri_mesh(nx), 1);
    CHECK(p1.n_h == (nx + 1) * (nx + 1));
    CHECK(p1.n_e1 == (nx + 1) * (nx - 1));
    CHECK(p1.n_e2 == (nx + 1) * (nx - 1));
    const MaxwellModel p2 = assemble_2d(structured_tri_mesh(nx), 2);
    CHECK(p2.n_h == (2 * nx + 1) * (2 * nx + 1));
    CHECK(p2.n_e1 == (2 * nx + 1) * (2 * nx - 1));
  }
  SUBCASE("mass block integrates constants to the area") {
    const MaxwellModel m = assemble_2d(structured_tri_mesh(4, 0.3, 8), 2);
    CHECK(m.forms.m0().dense().bottomRightCorner(m.n_h, m.n_h).sum() == doctest::Approx(kPi * kPi).epsilon(1e-13));
  }
  SUBCASE("unsupported order") { CHECK_THROWS_AS(assemble_2d(structured_tri_mesh(2), 3), UnsupportedOrder); }
}

TEST_CASE("exact_spectrum_2d") {
  const auto s = exact_spectrum_2d(2.1);
  std::vector<std::pair<double, int>> positive;
  bool has_zero = false;
  for (const auto& e : s) {
    if (e.infinite) has_zero = e.value == 0.0;
    else if (e.value > 0.0) positive.emplace_back(e.value, e.multiplicity);
  }
  CHECK(has_zero);
  REQUIRE(positive.size() == 3);
  CHECK(positive[0].first == 1.0);
  CHECK(positive[0].second == 2);
  CHECK(positive[1].first == doctest::Approx(std::sqrt(2.0)));
  CHECK(positive[1].second == 1);
  CHECK(positive[2].first == 2.0);
  CHECK(positive[2].second == 2);
  // symmetric under negation and ascending
  for (std::size_t k = 0; k < s.size(); ++k) {
    CHECK(s[k].value == -s[s.size() - 1 - k].value);
    if (k > 0) CHECK(s[k - 1].value < s[k].value);
  }
  CHECK(distance_to_spectrum_2d(1.3) == doctest::Approx(std::sqrt(2.0) - 1.3));
  CHECK(distance_to_spectrum_2d(-0.2) == doctest::Approx(0.2));
}

TEST_CASE("galerkin_spectrum contrast") {
  SUBCASE("jittered P1 mesh has a value inside the gap (0, 1)") {
    const MaxwellModel m = assemble_2d(structured_tri_mesh(8, 0.25, 7), 1);
    const Vector g = galerkin_spectrum(m);
    int spurious = 0;
    for (Index i = 0; i < g.size(); ++i)
      if (g(i) > 0.2 && g(i) < 0.8) ++spurious;
    CHECK(spurious == 1);  // recorded: 0.3635
    // No certified enclosure reaches into (0.2, 0.8).
    const EnclosureSet s = zm_enclosures(m.forms, {0.1, 1.6}, 8);
    for (const auto& e : s.rows) CHECK((e.upper <= 0.2 || e.lower >= 0.8));
  }
  SUBCASE("structured mesh keeps a cluster at 0") {
    const MaxwellModel m = assemble_2d(structured_tri_mesh(8), 1);
    const Vector g = galerkin_spectrum(m);
    int near_zero = 0;
    for (Index i = 0; i < g.size(); ++i) near_zero += std::abs(g(i)) < 1e-8;
    CHECK(near_zero > 10);
  }
  SUBCASE("each true eigenvalue is approached by some Galerkin value") {
    const MaxwellModel m = assemble_2d(structured_tri_mesh(8, 0.1, 4), 2);
    const Vector g = galerkin_spectrum(m);
    for (double lam : {1.0, std::sqrt(2.0), 2.0, std::sqrt(5.0)}) {
      double best = 1e9;
      for (Index i = 0; i < g.size(); ++i) best = std::min(best, std::abs(g(i) - lam));
      CHECK(best < 1e-2);
    }
  }
}

TEST_CASE("certified enclosures for the cavity") {
  SUBCASE("multiplicity two at 1") {
    const MaxwellModel m = assemble_2d(structured_tri_mesh(6, 0.2, 5), 2);
    const EnclosureSet s = zm_enclosures(m.forms, {0.5, 1.3}, 4);
    REQUIRE(s.rows.size() == 2);
    CHECK(s.rows[0].contains(1.0));
    CHECK(s.rows[1].contains(1.0));
  }
  SUBCASE("windows inside (0.5, 2.3) only produce enclosures that contain an exact eigenvalue") {
    for (int r = 1; r <= 2; ++r)
      for (int nx : {4, 6}) {
        const MaxwellModel m = assemble_2d(structured_tri_mesh(nx, 0.2, 13), r);
        for (Window w : {Window{0.5, 1.3}, Window{0.7, 1.6}, Window{1.2, 2.3}}) {
          const EnclosureSet s = zm_enclosures(m.forms, w, 6);
          for (const auto& e : s.rows) {
            CHECK(e.lower <= e.upper);
            CHECK(distance_to_spectrum_2d(0.5 * (e.lower + e.upper)) <= 0.5 * e.width());
          }
        }
      }
  }
}
