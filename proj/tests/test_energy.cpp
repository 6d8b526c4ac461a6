#include <doctest.h>

#include <cmath>
#include <random>

#include "cbody/energy.hpp"
#include "cbody/energy_checks.hpp"
#include "cbody/error.hpp"
#include "cbody/fields.hpp"
#include "cbody/manifolds.hpp"
#include "support.hpp"

using namespace cbody;

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::MatrixXd random_symmetric(std::mt19937_64& rng, int n, double shift) {
  Eigen::MatrixXd a = test::random_dense(rng, n, n);
  return a * a.transpose() / n + shift * Eigen::MatrixXd::Identity(n, n);
}

QuadraticConstitutive random_constitutive(std::mt19937_64& rng, int nu_dim) {
  QuadraticConstitutive k = QuadraticConstitutive::zeros(nu_dim);
  const int n = 3 * nu_dim;
  k.C = isotropic_stiffness(1.0, 0.7);
  k.A1 = 0.1 * test::random_dense(rng, 9, nu_dim);
  k.A2 = 0.1 * test::random_dense(rng, 9, n);
  k.A3 = random_symmetric(rng, nu_dim, 1.0);
  k.A4 = 0.1 * test::random_dense(rng, nu_dim, n);
  k.A5 = random_symmetric(rng, n, 1.0);
  return k;
}

struct Shipped {
  DensityPtr density;
  ManifoldSpec manifold;
  SamplerOptions opts;
};

std::vector<Shipped> shipped_densities() {
  std::mt19937_64 rng(31);
  QuasicrystalParams coupled;
  coupled.coupling = 0.1 * test::random_dense(rng, 9, 9);
  SamplerOptions mild;
  mild.f_spread = 0.2;
  mild.min_det = 0.3;
  const ManifoldSpec dof = make_degree_of_orientation();
  return {
      {make_dirichlet_sphere(), make_sphere(), {}},
      {make_easy_axis_sphere(0.7, Vec3(0, 0, 1)), make_sphere(), {}},
      {make_smectic_a(1.0, 2.0), manifold_by_name("smectic"), {}},
      {make_quadratic_vector(random_constitutive(rng, 3)), make_euclidean(3), {}},
      {make_quadratic_tensor(random_constitutive(rng, 9)), make_sym_positive(), {}},
      {make_quasicrystal({}), make_euclidean(3), mild},
      {make_quasicrystal(coupled), make_euclidean(3), mild},
      {make_ginzburg_landau(component_double_well(4, 3, 0.0, 0.6, 1.0, true), 0.05, 4), dof, {}},
      {make_ginzburg_landau(graded_double_well(1, 0, 0.2, 0.1, 0.8, 1.0), 0.05, 1), make_interval(), {}},
  };
}

}  // namespace

TEST_CASE("analytic derivatives match central differences for every shipped density") {
  for (const auto& s : shipped_densities()) {
    CAPTURE(s.density->name());
    const auto sampler = make_state_sampler(s.manifold, s.opts);
    const DerivativeCheckReport r = check_derivatives(*s.density, sampler, 100, 17, 1e-5);
    CAPTURE(r.worst_block);
    CHECK(r.states == 100);
    CHECK(r.max_rel_error < 1e-6);
  }
}

TEST_CASE("internal densities ignore the placement") {
  std::mt19937_64 rng(32);
  for (const auto& s : shipped_densities()) {
    CAPTURE(s.density->name());
    const auto sampler = make_state_sampler(s.manifold, s.opts);
    for (int t = 0; t < 10; ++t) {
      PointState p = sampler(rng);
      const double e0 = s.density->eval(p);
      p.u += Vec3(3.0, -1.0, 7.5);
      CHECK(s.density->eval(p) == e0);
    }
  }
}

TEST_CASE("centrosymmetric flag equals zeroing the odd tensors") {
  std::mt19937_64 rng(33);
  for (int nu_dim : {3, 9}) {
    QuadraticConstitutive full = random_constitutive(rng, nu_dim);
    full.centrosymmetric = true;
    QuadraticConstitutive zeroed = full;
    zeroed.centrosymmetric = false;
    if (nu_dim == 9) {
      zeroed.A2.setZero();
    } else {
      zeroed.A1.setZero();
    }
    zeroed.A4.setZero();
    const DensityPtr a = nu_dim == 9 ? make_quadratic_tensor(full) : make_quadratic_vector(full);
    const DensityPtr b = nu_dim == 9 ? make_quadratic_tensor(zeroed) : make_quadratic_vector(zeroed);
    const auto sampler = make_state_sampler(make_euclidean(nu_dim));
    for (int t = 0; t < 50; ++t) {
      const PointState p = sampler(rng);
      CHECK(a->eval(p) == b->eval(p));
    }
  }
}

TEST_CASE("quadratic forms: positivity and symmetry checks") {
  std::mt19937_64 rng(34);
  QuadraticConstitutive k = random_constitutive(rng, 3);
  k.A2.setZero();
  k.A1.setZero();
  k.A4.setZero();
  const DensityPtr d = make_quadratic_vector(k);
  const auto sampler = make_state_sampler(make_euclidean(3));
  for (int t = 0; t < 200; ++t) CHECK(d->eval(sampler(rng)) > 0.0);

  PointState zero;
  zero.nu = VecM::Zero(3);
  zero.N = MatM3::Zero(3, 3);
  CHECK(d->eval(zero) == 0.0);

  QuadraticConstitutive bad = k;
  bad.C(0, 4) += 1.0;
  CHECK_THROWS_AS(make_quadratic_vector(bad), Error);
  CHECK_THROWS_AS(make_quadratic_tensor(k), Error);

  const Eigen::MatrixXd c = isotropic_stiffness(2.0, 3.0);
  CHECK((c - c.transpose()).norm() == 0.0);
  // C : I = (3 lambda + 2 mu) I
  Eigen::VectorXd id = Eigen::VectorXd::Zero(9);
  id(0) = id(4) = id(8) = 1.0;
  CHECK(((c * id) - 12.0 * id).norm() < 1e-14);
}

TEST_CASE("decomposed density is the sum of its parts") {
  auto gl = make_ginzburg_landau(component_double_well(4, 3, 0.0, 0.6, 1.0, true), 0.05, 4);
  REQUIRE(gl->parts().size() == 2);
  std::mt19937_64 rng(35);
  const auto sampler = make_state_sampler(make_degree_of_orientation());
  for (int t = 0; t < 50; ++t) {
    const PointState p = sampler(rng);
    double sum = 0.0;
    for (const auto& part : gl->parts()) sum += part.density->eval(p);
    CHECK(gl->eval(p) == sum);
  }
}

TEST_CASE("Dirichlet density on the sphere") {
  const DensityPtr d = make_dirichlet_sphere();
  std::mt19937_64 rng(36);
  const auto sampler = make_state_sampler(make_sphere());
  for (int t = 0; t < 20; ++t) {
    const PointState p = sampler(rng);
    CHECK(d->eval(p) == doctest::Approx(0.5 * p.N.squaredNorm()).epsilon(1e-15));
    CHECK(d->derivatives(p).d_N == p.N);
  }
  PointState flat;
  flat.nu = Vec3(0, 0, 1);
  flat.N = MatM3::Zero(3, 3);
  CHECK(d->eval(flat) == 0.0);
  CHECK(d->objective());
  CHECK_FALSE(make_easy_axis_sphere(1.0, Vec3(0, 0, 1))->objective());
}

TEST_CASE("smectic layer examples") {
  const DensityPtr d = make_smectic_a(1.5, 2.0);
  PointState p;
  p.nu = VecM::Zero(4);
  p.nu(3) = 1.0;
  p.N = MatM3::Zero(4, 3);
  p.N(0, 0) = 1.0;
  CHECK(d->eval(p) == 0.0);
  p.N(0, 0) = 2.0;
  CHECK(d->eval(p) == doctest::Approx(0.5 * 1.5));
}

TEST_CASE("quasicrystal reference state, barrier and growth") {
  QuasicrystalParams normalized;
  normalized.offset = 0.0;
  const DensityPtr q0 = make_quasicrystal(normalized);
  PointState p;
  p.nu = VecM::Zero(3);
  p.N = MatM3::Zero(3, 3);
  CHECK(std::abs(q0->eval(p)) < 1e-14);
  const DensityPtr q = make_quasicrystal({});
  CHECK(q->eval(p) == doctest::Approx(0.5));

  double prev = q->eval(p);
  for (double t = 0.5; t > 1e-8; t *= 0.5) {
    p.F = Mat3::Identity();
    p.F(2, 2) = t;
    const double v = q->eval(p);
    CHECK(v > prev);
    prev = v;
  }
  CHECK(prev > 10.0);

  REQUIRE(q->growth_meta().has_value());
  SamplerOptions opts;
  opts.log_stretch = 1.0;
  const GrowthReport g = check_growth(*q, *q->growth_meta(), make_state_sampler(make_euclidean(3), opts), 10000, 3);
  CHECK(g.samples == 10000);
  CHECK(g.violations == 0);
  CHECK_THROWS_AS(make_quasicrystal(QuasicrystalParams{1, 1, 1, 0.5, 0.0, {}}), Error);
}

TEST_CASE("growth bounds") {
  const GrowthSpec g = quasicrystal_growth_spec();
  MatM3 n = MatM3::Zero(3, 3);
  const Mat3 f = 2.0 * Mat3::Identity();
  // |M(2I)|^2 = 1 + 12 + 48 + 64
  const double expected = 0.1 * (std::pow(125.0, 2.0 / 3.0)) + 0.5 * (8.0 - 1.0 - std::log(8.0));
  CHECK(g.bound(f, n) == doctest::Approx(expected));
  GrowthSpec h3;
  h3.variant = GrowthVariant::H3;
  h3.c1 = 1.0;
  CHECK(h3.bound(f, n) == doctest::Approx(12.0 + std::pow(std::sqrt(48.0), 1.5)));
  CHECK(h3.bound_adj_squared(f, n) == doctest::Approx(12.0 + 48.0));
}

TEST_CASE("sampled convexity falsifier") {
  const auto sphere = make_state_sampler(make_sphere());
  CHECK(check_convexity(*make_dirichlet_sphere(), ConvexityMode::InN, sphere, 200, 4).pass);
  SamplerOptions mild;
  mild.f_spread = 0.2;
  mild.min_det = 0.3;
  const auto eu = make_state_sampler(make_euclidean(3), mild);
  CHECK(check_convexity(*make_quasicrystal({}), ConvexityMode::InMinorsAndN, eu, 200, 4).pass);
  // Layer compression is not convex in grad l near grad l = 0.
  const auto sm = make_state_sampler(manifold_by_name("smectic"));
  CHECK_FALSE(check_convexity(*make_smectic_a(1.0, 1.0), ConvexityMode::InN, sm, 200, 4).pass);
}

TEST_CASE("line defects") {
  LineDefect empty;
  CHECK(line_defect_mass(empty) == 0.0);
  LineDefect unit{{Vec3(0, 0, 0), Vec3(1, 0, 0)}, {1}};
  CHECK(line_defect_mass(unit) == 1.0);
  LineDefect bent{{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 1, 0)}, {1, 2}};
  CHECK(line_defect_mass(bent) == 3.0);
  CHECK(bent.tangent(1).isApprox(Vec3(0, 1, 0)));
  LineDefect degenerate{{Vec3(0, 0, 0), Vec3(0, 0, 0)}, {1}};
  CHECK_THROWS_AS(degenerate.validate(), Error);
  LineDefect missing{{Vec3(0, 0, 0), Vec3(1, 0, 0)}, {}};
  CHECK_THROWS_AS(missing.validate(), Error);
}

TEST_CASE("relaxed spin energy adds the line term with coefficient 4 pi") {
  const Grid grid = Grid::cube(3, 6, Vec3(-1, -1, -1), Vec3(1, 1, 1));
  FieldState s = FieldState::identity(grid, make_sphere(), Vec3(0, 0, 1));
  for (int n = 0; n < grid.num_nodes(); ++n) {
    const Vec3 x = grid.node_position(n) + Vec3(0.1, 0.2, 0.3);
    s.nu.col(n) = x.normalized();
  }
  LineDefect line{{Vec3(0, 0, 0), Vec3(0, 0, -1.5)}, {1}};
  const double d = dirichlet_energy(s, grid);
  CHECK(relaxed_spin_energy(s, grid, line, 0.25) == d + 4.0 * kPi * 1.5 + 0.25);

  FieldState wrong = FieldState::identity(grid, make_euclidean(3), Vec3(0, 0, 1));
  CHECK_THROWS_AS(dirichlet_energy(wrong, grid), Error);
}
