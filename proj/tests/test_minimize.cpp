#include <doctest.h>

#include <random>

#include "cbody/assembly.hpp"
#include "cbody/error.hpp"
#include "cbody/minimize.hpp"
#include "cbody/presets.hpp"
#include "support.hpp"

using namespace cbody;

namespace {

struct Problem {
  Grid grid;
  FieldState state;
  DensityPtr density;
};

// Director relaxation on a box with a tilted constant direction on the boundary
// and a noisy interior.
Problem director_problem(int cells, std::uint64_t seed) {
  Grid g = Grid::cube(3, cells, Vec3(0, 0, 0), Vec3(1, 1, 1));
  FieldState s = FieldState::identity(g, make_sphere(), Vec3(0, 0, 1));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 0.3);
  for (int i = 0; i < g.num_nodes(); ++i) s.nu.col(i) = (Vec3(0, 0, 1) + Vec3(n(rng), n(rng), n(rng))).normalized();
  s = apply_dirichlet(s, g, FieldKind::Nu, whole_boundary(), [](const Vec3& x) {
    return VecM(Vec3(std::sin(x(0)), 0.2 * x(1), 1.0));
  });
  return {g, s, make_dirichlet_sphere()};
}

Problem elastic_problem(int cells) {
  Grid g = Grid::cube(3, cells, Vec3(0, 0, 0), Vec3(1, 1, 1));
  FieldState s = FieldState::identity(g, make_euclidean(3), Vec3(0, 0, 0));
  QuadraticConstitutive k = QuadraticConstitutive::zeros(3);
  k.C = isotropic_stiffness(1.0, 1.0);
  k.A3 = Eigen::MatrixXd::Identity(3, 3);
  k.A5 = Eigen::MatrixXd::Identity(9, 9);
  s = apply_dirichlet(s, g, FieldKind::U, whole_boundary(), [](const Vec3& x) {
    return VecM(Vec3(1.02 * x(0) + 0.01 * x(1), 0.99 * x(1), x(2) + 0.03 * x(0)));
  });
  return {g, s, make_quadratic_vector(k)};
}

}  // namespace

TEST_CASE("configuration validation") {
  MinimizeConfig c;
  CHECK_NOTHROW(c.validate());
  c.backtrack = 1.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = MinimizeConfig{};
  c.grad_tol = 0.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = MinimizeConfig{};
  c.armijo = 1.5;
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("directional derivative of the discrete energy") {
  std::mt19937_64 rng(61);
  for (const auto& p : {director_problem(4, 1), elastic_problem(4)}) {
    const Eigen::Matrix3Xd du = test::random_dense(rng, 3, p.grid.num_nodes());
    const Eigen::MatrixXd dn = test::random_dense(rng, p.state.nu.rows(), p.grid.num_nodes());
    const NodalGradient g = energy_gradient(*p.density, p.state, p.grid);
    const double t = 1e-5;
    FieldState plus = p.state, minus = p.state;
    plus.u += t * du;
    plus.nu += t * dn;
    minus.u -= t * du;
    minus.nu -= t * dn;
    const double fd = (total_energy(*p.density, plus, p.grid) - total_energy(*p.density, minus, p.grid)) / (2 * t);
    const double an = g.pair(du, dn);
    CHECK(std::abs(fd - an) <= 1e-5 * std::max(1.0, std::abs(an)));
  }
}

TEST_CASE("projected gradient vanishes on pinned nodes and is tangent") {
  const Problem p = director_problem(4, 2);
  const NodalGradient g = projected_gradient(*p.density, p.state, p.grid, *p.state.manifold);
  for (int n = 0; n < p.grid.num_nodes(); ++n) {
    if (p.state.pinned_nu[static_cast<std::size_t>(n)]) CHECK(g.nu.col(n).norm() == 0.0);
    CHECK(std::abs(g.nu.col(n).dot(p.state.nu.col(n))) < 1e-13);
  }
}

TEST_CASE("descent is monotone, feasible and keeps Dirichlet data") {
  for (Metric metric : {Metric::Sobolev, Metric::Lumped}) {
    for (DescentMethod method : {DescentMethod::ConjugateGradient, DescentMethod::Gradient}) {
      const Problem p = director_problem(6, 3);
      MinimizeConfig c;
      c.metric = metric;
      c.method = method;
      c.grad_tol = 1e-7;
      const MinimizeResult r = minimize(*p.density, p.state, p.grid, *p.state.manifold, c);
      CHECK(r.converged);
      const double scale = std::abs(r.energy_trace.front());
      for (std::size_t i = 1; i < r.energy_trace.size(); ++i)
        CHECK(r.energy_trace[i] <= r.energy_trace[i - 1] + c.energy_tol * scale);
      CHECK(r.energy_trace.back() < r.energy_trace.front());
      CHECK(r.state.max_constraint_violation(p.grid) <= 1e-10);
      for (int n = 0; n < p.grid.num_nodes(); ++n) {
        if (p.state.pinned_nu[static_cast<std::size_t>(n)]) CHECK(r.state.nu.col(n) == p.state.nu.col(n));
      }
      CHECK(r.final_grad_norm <= c.grad_tol);
    }
  }
}

TEST_CASE("homogeneous elasticity with affine data relaxes to the affine map") {
  const Problem p = elastic_problem(5);
  MinimizeConfig c;
  c.grad_tol = 1e-10;
  const MinimizeResult r = minimize(*p.density, p.state, p.grid, *p.state.manifold, c);
  REQUIRE(r.converged);
  for (int n = 0; n < p.grid.num_nodes(); ++n) {
    const Vec3 x = p.grid.node_position(n);
    const Vec3 exact(1.02 * x(0) + 0.01 * x(1), 0.99 * x(1), x(2) + 0.03 * x(0));
    CHECK((r.state.u.col(n) - exact).norm() < 1e-8);
    CHECK(r.state.nu.col(n).norm() < 1e-8);
  }
  CHECK(min_cell_det(r.state.u, p.grid) > 0.0);
}

TEST_CASE("lumped and Sobolev metrics reach the same minimum") {
  const Problem p = director_problem(6, 4);
  MinimizeConfig a, b;
  a.metric = Metric::Lumped;
  b.metric = Metric::Sobolev;
  a.grad_tol = b.grad_tol = 1e-9;
  a.max_iters = b.max_iters = 20000;
  const double ea = minimize(*p.density, p.state, p.grid, *p.state.manifold, a).energy_trace.back();
  const double eb = minimize(*p.density, p.state, p.grid, *p.state.manifold, b).energy_trace.back();
  CHECK(ea == doctest::Approx(eb).epsilon(1e-8));
}

TEST_CASE("alternating blocks converge on a coupled problem") {
  Problem p = elastic_problem(4);
  MinimizeConfig c;
  c.block_mode = BlockMode::Alternating;
  c.grad_tol = 1e-8;
  const MinimizeResult r = minimize(*p.density, p.state, p.grid, *p.state.manifold, c);
  CHECK(r.converged);
}

TEST_CASE("same input gives a bitwise identical trace") {
  const Problem p = director_problem(5, 5);
  MinimizeConfig c;
  c.seed = 9;
  const MinimizeResult a = minimize(*p.density, p.state, p.grid, *p.state.manifold, c);
  const MinimizeResult b = minimize(*p.density, p.state, p.grid, *p.state.manifold, c);
  CHECK(a.energy_trace == b.energy_trace);
  CHECK(a.state.nu == b.state.nu);
}

TEST_CASE("inadmissible starts are rejected") {
  Problem p = elastic_problem(3);
  for (int n = 0; n < p.grid.num_nodes(); ++n) p.state.u(0, n) = -p.state.u(0, n);
  CHECK_THROWS_AS(minimize(*p.density, p.state, p.grid, *p.state.manifold, MinimizeConfig{}), Error);
  Problem q = director_problem(3, 6);
  q.state.nu.col(5) *= 2.0;
  CHECK_THROWS_AS(minimize(*q.density, q.state, q.grid, *q.state.manifold, MinimizeConfig{}), Error);
}

TEST_CASE("barrier densities never accept a folded iterate") {
  Grid g = Grid::cube(3, 4, Vec3(0, 0, 0), Vec3(1, 1, 1));
  FieldState s = FieldState::identity(g, make_euclidean(3), Vec3(0, 0, 0));
  s = apply_dirichlet(s, g, FieldKind::U, box_face(g, 0, 0), [](const Vec3& x) { return VecM(x); });
  s = apply_dirichlet(s, g, FieldKind::U, box_face(g, 0, 1), [](const Vec3& x) {
    return VecM(Vec3(0.3 * x(0), x(1), x(2)));
  });
  MinimizeConfig c;
  c.grad_tol = 1e-8;
  for (int n = 0; n < g.num_nodes(); ++n) s.u(0, n) = 0.3 * g.node_position(n)(0);
  const MinimizeResult r = minimize(*make_quasicrystal({}), s, g, *s.manifold, c);
  CHECK(r.converged);
  CHECK(min_cell_det(r.state.u, g) > 0.0);
}
