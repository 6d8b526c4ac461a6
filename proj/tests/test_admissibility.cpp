#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "cbody/admissibility.hpp"
#include "cbody/error.hpp"
#include "cbody/manifolds.hpp"
#include "support.hpp"

using namespace cbody;

namespace {

constexpr double kPi = 3.14159265358979323846;

FieldState placed(const Grid& g, const std::function<Vec3(const Vec3&)>& map) {
  FieldState s = FieldState::identity(g, make_euclidean(3), Vec3(0, 0, 0));
  for (int n = 0; n < g.num_nodes(); ++n) s.u.col(n) = map(g.node_position(n));
  return s;
}

FieldState director(const Grid& g, const std::function<Vec3(const Vec3&)>& field) {
  FieldState s = FieldState::identity(g, make_sphere(), Vec3(0, 0, 1));
  for (int n = 0; n < g.num_nodes(); ++n) s.nu.col(n) = field(g.node_position(n)).normalized();
  return s;
}

Vec3 hedgehog(const Vec3& x) { return x; }

// Two orientation-preserving zeros at (+-a, 0, 0): (z - a)(z + a) in the
// (x1, x2) plane, x3 kept.
Vec3 two_cores(const Vec3& x) {
  const double a = 0.5;
  const std::complex<double> z(x(0), x(1));
  const std::complex<double> p = (z - a) * (z + a);
  return Vec3(p.real(), p.imag(), x(2));
}

// Flux of the analytic D_nu through the sphere of radius r about the origin,
// by midpoint quadrature in (theta, phi) with nu derivatives by central differences.
double analytic_flux(const std::function<Vec3(const Vec3&)>& nu, double r) {
  const int nt = 200, np = 400;
  const double h = 1e-6;
  double flux = 0.0;
  for (int i = 0; i < nt; ++i) {
    const double th = kPi * (i + 0.5) / nt;
    for (int j = 0; j < np; ++j) {
      const double ph = 2 * kPi * (j + 0.5) / np;
      const Vec3 n(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
      const Vec3 x = r * n;
      Mat3 d;
      for (int k = 0; k < 3; ++k) {
        Vec3 e = Vec3::Zero();
        e(k) = h;
        d.col(k) = (nu(x + e) - nu(x - e)) / (2 * h);
      }
      const Vec3 v = nu(x);
      const Vec3 dv(v.dot(d.col(1).cross(d.col(2))), v.dot(d.col(2).cross(d.col(0))), v.dot(d.col(0).cross(d.col(1))));
      flux += dv.dot(n) * r * r * std::sin(th) * (kPi / nt) * (2 * kPi / np);
    }
  }
  return flux;
}

}  // namespace

TEST_CASE("orientation and injectivity accept rigid motions, dilations and shears") {
  const Grid g = Grid::cube(3, 8, Vec3(0, 0, 0), Vec3(1, 1, 1));
  const Mat3 r = rotation_matrix(Vec3(0.3, -0.4, 0.8));
  Mat3 shear = Mat3::Identity();
  shear(0, 1) = 0.4;
  const std::vector<std::function<Vec3(const Vec3&)>> maps = {
      [&](const Vec3& x) { return Vec3(r * x + Vec3(1, 2, 3)); },
      [](const Vec3& x) { return Vec3(2.0 * x); },
      [&](const Vec3& x) { return Vec3(shear * x); },
  };
  for (const auto& m : maps) {
    const FieldState s = placed(g, m);
    const AdmissibilityReport a = check_admissibility(s, g);
    CHECK(a.violating_cells == 0);
    CHECK(a.min_det > 0.0);
    CHECK(a.injectivity_pass);
    const CiarletNecasReport cn = check_ciarlet_necas(s, g);
    CHECK(std::abs(cn.slack) <= 0.02 * cn.integral_det);
  }
}

TEST_CASE("reflections fail orientation") {
  const Grid g = Grid::cube(3, 6, Vec3(0, 0, 0), Vec3(1, 1, 1));
  const FieldState s = placed(g, [](const Vec3& x) { return Vec3(-x(0), x(1), x(2)); });
  const OrientationReport o = check_orientation(s, g);
  CHECK(o.violating_cells == g.num_cells());
  CHECK(o.min_det == doctest::Approx(-1.0));
  CHECK_FALSE(check_admissibility(s, g).injectivity_pass);
}

TEST_CASE("a map wrapping twice around an annulus fails Ciarlet-Necas") {
  const Grid g(3, Vec3(1, 0, 0), Vec3(2, 1, 1), {9, 33, 3});
  const double alpha = 4 * kPi;
  const FieldState s = placed(g, [&](const Vec3& x) {
    return Vec3(x(0) * std::cos(alpha * x(1)), x(0) * std::sin(alpha * x(1)), x(2));
  });
  CHECK(check_orientation(s, g).violating_cells == 0);
  const CiarletNecasReport cn = check_ciarlet_necas(s, g);
  // image is (almost) the annulus of area 3 pi; det integrates to 6 pi times
  // the chord factor of the 32 angular cells
  const double step = alpha / 32;
  CHECK(cn.integral_det == doctest::Approx(6 * kPi * std::sin(step) / step).epsilon(1e-6));
  CHECK(cn.slack < -0.4 * cn.integral_det);
  CHECK_FALSE(cn.pass);
  const AdmissibilityReport a = check_admissibility(s, g);
  CHECK_FALSE(a.injectivity_pass);
}

TEST_CASE("injectivity pass implies positive det and bounded slack") {
  std::mt19937_64 rng(51);
  const Grid g = Grid::cube(3, 5, Vec3(0, 0, 0), Vec3(1, 1, 1));
  for (int t = 0; t < 10; ++t) {
    const Mat3 a = Mat3::Identity() + 0.8 * test::random_matrix(rng);
    const AdmissibilityReport r = check_admissibility(placed(g, [&](const Vec3& x) { return Vec3(a * x); }), g);
    if (r.injectivity_pass) {
      CHECK(r.min_det > 0.0);
      CHECK(r.ciarlet_necas_slack >= -r.tolerance);
    }
    CHECK(r.injectivity_pass == (a.determinant() > 0.0));
  }
}

TEST_CASE("solid angle of an octant") {
  CHECK(solid_angle(Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()) == doctest::Approx(kPi / 2));
  CHECK(solid_angle(Vec3::UnitY(), Vec3::UnitX(), Vec3::UnitZ()) == doctest::Approx(-kPi / 2));
}

TEST_CASE("D_nu of constant and hedgehog fields") {
  const Grid g = Grid::cube(3, 24, Vec3(-1, -1, -1), Vec3(1, 1, 1));
  const FieldState flat = director(g, [](const Vec3&) { return Vec3(0, 0, 1); });
  for (const Vec3& d : d_field(flat, g)) CHECK(d.norm() == 0.0);
  CHECK(defect_charges(flat, g).charges.empty());

  const FieldState hog = director(g, [](const Vec3& x) { return Vec3(x + Vec3(1e-3, 2e-3, 3e-3)); });
  const auto d = d_field(hog, g);
  const double h = g.spacing(0);
  double worst = 0.0;
  for (int c = 0; c < g.num_cells(); ++c) {
    const Vec3 x = g.cell_center(c) + Vec3(1e-3, 2e-3, 3e-3);
    if (x.norm() < 3 * h) continue;
    const Vec3 exact = x / std::pow(x.norm(), 3);
    worst = std::max(worst, (d[static_cast<std::size_t>(c)] - exact).norm() / exact.norm());
  }
  CHECK(worst < 0.05);

  const FieldState wrong = FieldState::identity(g, make_euclidean(3), Vec3(0, 0, 1));
  CHECK_THROWS_AS(d_field(wrong, g), Error);
}

TEST_CASE("D_nu lies in the kernel of the director gradient") {
  const Grid g = Grid::cube(3, 8, Vec3(-1, -1, -1), Vec3(1, 1, 1));
  const FieldState s = director(g, [](const Vec3& x) {
    return Vec3(std::sin(2 * x(0)) + 0.3, std::cos(x(1) * x(2)), x(0) * x(1) + 0.5);
  });
  const auto d = d_field(s, g);
  const Manifold& m = *s.manifold;
  for (int c = 0; c < g.num_cells(); ++c) {
    const VecM nu = m.project(cell_average(s.nu, g, c));
    MatM3 n = cell_gradient(s.nu, g, c);
    for (int j = 0; j < 3; ++j) n.col(j) = m.tangent_project(nu, n.col(j));
    const double scale = std::pow(n.norm(), 3) + 1e-300;
    CHECK((n * d[static_cast<std::size_t>(c)]).norm() < 1e-10 * scale);
  }
}

TEST_CASE("hedgehog charge and total flux") {
  const Grid g = Grid::cube(3, 15, Vec3(-1, -1, -1), Vec3(1, 1, 1));
  const DefectReport r = defect_charges(director(g, hedgehog), g);
  CHECK(r.total_charge == 1);
  REQUIRE(r.charges.size() == 1);
  CHECK(r.charges[0].charge == 1);
  CHECK(g.cell_center(r.charges[0].cell).norm() < 1e-12);
  CHECK(std::abs(r.total_flux - 4 * kPi) <= r.tolerance + 1e-9);
}

TEST_CASE("antipodal hedgehog sign follows the boundary-flux oracle") {
  const auto anti = [](const Vec3& x) { return Vec3(-x); };
  const double oracle = analytic_flux([&](const Vec3& x) { return Vec3(anti(x).normalized()); }, 0.5);
  CHECK(oracle == doctest::Approx(-4 * kPi).epsilon(1e-3));
  const Grid g = Grid::cube(3, 15, Vec3(-1, -1, -1), Vec3(1, 1, 1));
  const DefectReport r = defect_charges(director(g, anti), g);
  CHECK(r.total_charge == static_cast<int>(std::lround(oracle / (4 * kPi))));
}

TEST_CASE("degree on closed boxes and additivity") {
  const Grid g = Grid::cube(3, 16, Vec3(-1, -1, -1), Vec3(1, 1, 1));
  const FieldState pair = director(g, [](const Vec3& x) { return Vec3(two_cores(x + Vec3(0.01, 0.02, 0.03))); });
  CHECK(analytic_flux([](const Vec3& x) { return Vec3(two_cores(x).normalized()); }, 0.9) ==
        doctest::Approx(8 * kPi).epsilon(1e-2));
  const DegreeResult all = degree_on_surface(pair, g, BoxSurface{{1, 1, 1}, {15, 15, 15}});
  CHECK(all.degree == 2);
  const DegreeResult left = degree_on_surface(pair, g, BoxSurface{{1, 1, 1}, {8, 15, 15}});
  const DegreeResult right = degree_on_surface(pair, g, BoxSurface{{8, 1, 1}, {15, 15, 15}});
  CHECK(left.degree == 1);
  CHECK(right.degree == 1);
  CHECK(left.raw + right.raw == doctest::Approx(all.raw).epsilon(1e-12));

  const FieldState hog = director(g, [](const Vec3& x) { return Vec3(x + Vec3(0.01, 0.02, 0.03)); });
  CHECK(degree_on_surface(hog, g, BoxSurface{{6, 6, 6}, {10, 10, 10}}).degree == 1);
  CHECK(degree_on_surface(hog, g, BoxSurface{{11, 11, 11}, {15, 15, 15}}).degree == 0);
  CHECK_THROWS_AS(degree_on_surface(hog, g, BoxSurface{{0, 0, 0}, {17, 4, 4}}), Error);
}
