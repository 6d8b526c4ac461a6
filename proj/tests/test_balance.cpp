#include <doctest.h>

#include <cmath>
#include <random>

#include "cbody/assembly.hpp"
#include "cbody/balance.hpp"
#include "cbody/error.hpp"
#include "support.hpp"

using namespace cbody;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Case {
  DensityPtr density;
  ManifoldSpec manifold;
};

// Smectic layers are left out: div n is taken in the reference frame, so
// rotating n alone changes the energy.
std::vector<Case> objective_cases() {
  return {
      {make_dirichlet_sphere(), make_sphere()},
      {make_quasicrystal({}), make_euclidean(3)},
      {make_ginzburg_landau(component_double_well(4, 3, 0.0, 0.6, 1.0, true), 0.05, 4), make_degree_of_orientation()},
  };
}

Grid small_grid() { return Grid::cube(3, 6, Vec3(0, 0, 0), Vec3(1, 1, 1)); }

}  // namespace

TEST_CASE("residual ratios") {
  CHECK(make_residual(-2.0, 4.0).ratio == 0.5);
  CHECK(make_residual(0.0, 0.0).ratio == 0.0);
  CHECK(max_ratio({}) == 0.0);
  CHECK(max_ratio({make_residual(1, 4), make_residual(3, 4)}) == 0.75);
}

TEST_CASE("weak Euler-Lagrange form equals the assembled gradient pairing") {
  const Grid g = small_grid();
  for (const auto& c : objective_cases()) {
    CAPTURE(c.density->name());
    FieldState s = test::smooth_state(g, c.manifold, 71);
    for (int n = 0; n < g.num_nodes(); ++n)
      if (g.node_ijk(n)[2] == 0) s.pinned_u[static_cast<std::size_t>(n)] = 1;
    const BalanceFields bf = assemble_actions(*c.density, s, g);
    const auto tests = random_nodal_tests(s, g, 10, 3);
    REQUIRE(tests.size() == 10);
    const auto res = weak_el_residual(bf, tests, s, g);
    const NodalGradient grad = projected_gradient(*c.density, s, g, *c.manifold);
    for (std::size_t i = 0; i < tests.size(); ++i) {
      const double pair = grad.pair(tests[i].h, tests[i].upsilon);
      CHECK(std::abs(res[i].raw - pair) <= 1e-12 * res[i].scale);
      CHECK(res[i].scale > 0.0);
    }
  }
}

TEST_CASE("weak form rejects non-tangent or pinned tests") {
  const Grid g = small_grid();
  FieldState s = test::smooth_state(g, make_sphere(), 72);
  s = apply_dirichlet(s, g, FieldKind::Nu, whole_boundary(), [](const Vec3&) { return VecM(Vec3(0, 0, 1)); });
  const BalanceFields bf = assemble_actions(*make_dirichlet_sphere(), s, g);
  auto tests = random_nodal_tests(s, g, 1, 4);
  NodalTest bad = tests[0];
  const int interior = g.node_index(3, 3, 3);
  bad.upsilon.col(interior) += s.nu.col(interior);
  try {
    weak_el_residual(bf, {bad}, s, g);
    FAIL("expected NonTangentTest");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonTangentTest);
  }
  NodalTest pinned = tests[0];
  pinned.upsilon.col(0) = s.manifold->tangent_project(s.nu.col(0), VecM(Vec3(1, 0, 0)));
  CHECK_THROWS_AS(weak_el_residual(bf, {pinned}, s, g), Error);
}

TEST_CASE("actions: tangency of zeta and the Eshelby identity") {
  const Grid g = small_grid();
  for (const auto& c : objective_cases()) {
    CAPTURE(c.density->name());
    const FieldState s = test::smooth_state(g, c.manifold, 73);
    const BalanceFields bf = assemble_actions(*c.density, s, g);
    const auto pp = eshelby(bf, g);
    for (int i = 0; i < bf.samples.size(); ++i) {
      const auto k = static_cast<std::size_t>(i);
      const PointState& p = bf.samples.points[k];
      CHECK((c.manifold->tangent_project(p.nu, bf.zeta[k]) - bf.zeta[k]).norm() <= 1e-10 * (1 + bf.zeta[k].norm()));
      const Mat3 expect = bf.e_val[k] * Mat3::Identity() - p.F.transpose() * bf.P[k] - p.N.transpose() * bf.S[k];
      CHECK((pp[k] - expect).norm() == 0.0);
    }
    const StrongResiduals sr = strong_residuals(bf, s, g);
    for (int n = 0; n < g.num_nodes(); ++n) {
      if (!sr.interior[static_cast<std::size_t>(n)]) continue;
      const VecM col = sr.capriz.col(n);
      CHECK((c.manifold->tangent_project(s.nu.col(n), col) - col).norm() <= 1e-10 * (1 + col.norm()));
    }
  }
}

TEST_CASE("rotational balance holds for objective densities and fails for the easy-axis fixture") {
  const Grid g = small_grid();
  for (const auto& c : objective_cases()) {
    CAPTURE(c.density->name());
    REQUIRE(c.density->objective());
    const FieldState s = test::smooth_state(g, c.manifold, 74);
    const BalanceFields bf = assemble_actions(*c.density, s, g);
    CHECK(rotational_balance(bf, *c.manifold, g).max_cell.ratio < 1e-6);
  }
  const FieldState s = test::smooth_state(g, make_sphere(), 75);
  const auto easy = make_easy_axis_sphere(5.0, Vec3(0, 0, 1));
  CHECK(rotational_balance(assemble_actions(*easy, s, g), *s.manifold, g).max_cell.ratio > 0.1);

  const FieldState iv = test::smooth_state(g, make_interval(), 76);
  const auto gl = make_ginzburg_landau(zero_well(1), 0.1, 1);
  CHECK_THROWS_AS(rotational_balance(assemble_actions(*gl, iv, g), *iv.manifold, g), Error);
}

TEST_CASE("Cauchy stress pullback") {
  const Grid g = Grid::cube(3, 2, Vec3(0, 0, 0), Vec3(1, 1, 1));
  FieldState s = FieldState::identity(g, make_euclidean(3), Vec3(0.1, 0, 0));
  const auto q = make_quasicrystal({});
  {
    const BalanceFields bf = assemble_actions(*q, s, g);
    const auto sigma = cauchy_stress(bf, g);
    for (std::size_t i = 0; i < sigma.size(); ++i) CHECK((sigma[i] - bf.P[i]).norm() < 1e-15);
  }
  s.u *= 2.0;
  {
    const BalanceFields bf = assemble_actions(*q, s, g);
    const auto sigma = cauchy_stress(bf, g);
    for (std::size_t i = 0; i < sigma.size(); ++i) CHECK((sigma[i] - bf.P[i] * 2.0 / 8.0).norm() < 1e-14);
  }
  s.u.row(0) *= -1.0;
  CHECK_THROWS_AS(cauchy_stress(assemble_actions(*q, s, g), g), Error);
}

TEST_CASE("bump tests") {
  const VectorTest t = bump_test(Vec3(0, 0, 0), 2.0, Vec3(1, 2, 3));
  CHECK((t.phi(Vec3(0, 0, 0)) - Vec3(1, 2, 3)).norm() == 0.0);
  CHECK(t.phi(Vec3(2.5, 0, 0)).norm() == 0.0);
  const Vec3 x(0.3, -0.4, 0.5);
  Mat3 fd;
  for (int j = 0; j < 3; ++j) {
    Vec3 e = Vec3::Zero();
    e(j) = 1e-6;
    fd.col(j) = (t.phi(x + e) - t.phi(x - e)) / 2e-6;
  }
  CHECK((t.dphi(x) - fd).norm() < 1e-8);
}

TEST_CASE("configurational balance for a homogeneous state and the straight line term") {
  const Grid g = Grid::cube(3, 12, Vec3(0, 0, 0), Vec3(1, 1, 1));
  FieldState s = FieldState::identity(g, make_euclidean(3), Vec3(0.1, 0.2, 0.0));
  Mat3 a = Mat3::Identity();
  a(0, 1) = 0.1;
  for (int n = 0; n < g.num_nodes(); ++n) s.u.col(n) = a * g.node_position(n);
  const BalanceFields bf = assemble_actions(*make_quasicrystal({}), s, g);
  const auto tests = random_reference_tests(s, g, 5, 8);
  REQUIRE(!tests.empty());
  for (const auto& r : configurational_residual(eshelby(bf, g), bf, tests, g)) CHECK(r.ratio < 1e-6);

  // Constant director: PP and d_x e vanish, so only the line term remains.
  FieldState flat = FieldState::identity(g, make_sphere(), Vec3(0, 0, 1));
  const BalanceFields bff = assemble_actions(*make_dirichlet_sphere(), flat, g);
  Mat3 d;
  d << 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9;
  const VectorTest affine{[d](const Vec3& x) { return Vec3(d * x); }, [d](const Vec3&) { return d; }};
  LineDefect line{{Vec3(0.2, 0.3, 0.1), Vec3(0.2, 0.3, 0.9)}, {2}};
  const auto r = configurational_residual(eshelby(bff, g), bff, {affine}, g, &line);
  const Vec3 t = line.tangent(0);
  const double expect = -4 * kPi * 2 * 0.8 * (t * t.transpose()).cwiseProduct(d).sum();
  CHECK(r[0].raw == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("Eulerian balance at a homogeneous state") {
  const Grid g = Grid::cube(3, 10, Vec3(0, 0, 0), Vec3(1, 1, 1));
  FieldState s = FieldState::identity(g, make_euclidean(3), Vec3(0, 0, 0));
  for (int n = 0; n < g.num_nodes(); ++n) s.u.col(n) = 1.1 * g.node_position(n);
  const BalanceFields bf = assemble_actions(*make_quasicrystal({}), s, g);
  const auto tests = random_spatial_tests(s, g, 5, 9);
  REQUIRE(!tests.empty());
  for (const auto& r : eulerian_residual(bf, tests, g)) CHECK(r.ratio < 1e-6);
}
