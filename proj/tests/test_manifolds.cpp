#include <doctest.h>

#include <random>

#include "cbody/error.hpp"
#include "cbody/manifolds.hpp"

using namespace cbody;

namespace {

VecM random_ambient(std::mt19937_64& rng, int n, double spread = 1.0) {
  std::normal_distribution<double> g(0.0, spread);
  VecM v(n);
  for (int i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

// A point of M that is not near its boundary.
VecM interior_point(const Manifold& m, std::mt19937_64& rng) {
  VecM p = random_ambient(rng, m.embed_dim());
  const std::string name = m.name();
  if (name.find("sym_positive") != std::string::npos) {
    Eigen::Matrix3d a = Eigen::Map<Eigen::Matrix<double, 3, 3, Eigen::RowMajor>>(p.data());
    Eigen::Matrix3d spd = a * a.transpose() + Eigen::Matrix3d::Identity();
    Eigen::Map<Eigen::Matrix<double, 3, 3, Eigen::RowMajor>>(p.data()) = spd;
  }
  // Every shipped boundary sits in the last coordinate (interval factors) at
  // values outside (0.1, 0.4).
  if (m.has_boundary() && name.find("sym_positive") == std::string::npos) {
    std::uniform_real_distribution<double> u(0.1, 0.4);
    p(m.embed_dim() - 1) = u(rng);
  }
  VecM q = m.project(p);
  return q;
}

std::vector<ManifoldSpec> all_manifolds() {
  return {make_euclidean(3),          make_euclidean(1), make_sphere(), make_interval(),
          make_interval(-0.5, 1.0),   make_sym_positive(), make_degree_of_orientation(),
          manifold_by_name("smectic")};
}

}  // namespace

TEST_CASE("projection lands on the manifold and is idempotent") {
  std::mt19937_64 rng(21);
  for (const auto& m : all_manifolds()) {
    CAPTURE(m->name());
    for (int t = 0; t < 50; ++t) {
      const VecM p = m->project(random_ambient(rng, m->embed_dim(), 2.0));
      CHECK(m->constraint_violation(p) <= 1e-10);
      CHECK((m->project(p) - p).norm() <= 1e-12 * (1.0 + p.norm()));
    }
  }
}

TEST_CASE("tangent projection is a linear idempotent that fixes tangents") {
  std::mt19937_64 rng(22);
  for (const auto& m : all_manifolds()) {
    CAPTURE(m->name());
    for (int t = 0; t < 20; ++t) {
      const VecM nu = interior_point(*m, rng);
      const VecM a = random_ambient(rng, m->embed_dim());
      const VecM b = random_ambient(rng, m->embed_dim());
      const VecM pa = m->tangent_project(nu, a);
      const VecM pb = m->tangent_project(nu, b);
      CHECK((m->tangent_project(nu, pa) - pa).norm() <= 1e-10);
      CHECK((m->tangent_project(nu, 2.0 * a - 3.0 * b) - (2.0 * pa - 3.0 * pb)).norm() <= 1e-10 * (1 + a.norm() + b.norm()));
      CHECK((m->retract(nu, VecM::Zero(m->embed_dim())) - nu).norm() <= 1e-12);
    }
  }
}

TEST_CASE("sphere tangent projection annihilates the normal") {
  std::mt19937_64 rng(23);
  const ManifoldSpec s = make_sphere();
  for (int t = 0; t < 50; ++t) {
    const VecM nu = s->project(random_ambient(rng, 3));
    CHECK(s->tangent_project(nu, nu).norm() < 1e-14);
    const VecM v = s->tangent_project(nu, random_ambient(rng, 3));
    CHECK(std::abs(v.dot(nu)) < 1e-14);
  }
}

TEST_CASE("retraction is first-order consistent") {
  std::mt19937_64 rng(24);
  for (const auto& m : all_manifolds()) {
    CAPTURE(m->name());
    const VecM nu = interior_point(*m, rng);
    const VecM v = m->tangent_project(nu, random_ambient(rng, m->embed_dim()));
    const double e1 = (m->retract(nu, 1e-3 * v) - nu - 1e-3 * v).norm();
    const double e2 = (m->retract(nu, 5e-4 * v) - nu - 5e-4 * v).norm();
    // Second-order remainder: halving the step divides the error by about 4.
    CHECK(e1 <= 1e-5 * (1.0 + v.squaredNorm()));
    if (e1 > 1e-13) CHECK(e2 < 0.3 * e1);
  }
}

TEST_CASE("sphere generator is the cross product and rotations agree with it") {
  std::mt19937_64 rng(25);
  const ManifoldSpec s = make_sphere();
  for (int t = 0; t < 20; ++t) {
    const VecM nu = s->project(random_ambient(rng, 3));
    const Vec3 q = random_ambient(rng, 3);
    const VecM aq = s->rotation_generator(nu).matrix * q;
    CHECK((aq - q.cross(Vec3(nu))).norm() < 1e-14);
    CHECK(std::abs(aq.dot(nu)) < 1e-14);
    const double step = 1e-4;
    const VecM moved = s->project(rotation_matrix(step * q) * Vec3(nu));
    CHECK((moved - nu - step * aq).norm() < 10 * step * step * q.squaredNorm());
  }
}

TEST_CASE("generator output is tangent on every manifold that declares one") {
  std::mt19937_64 rng(26);
  for (const auto& m : all_manifolds()) {
    CAPTURE(m->name());
    const VecM nu = interior_point(*m, rng);
    if (!m->rotation_generator_defined()) {
      CHECK_THROWS_AS(m->rotation_generator(nu), Error);
      continue;
    }
    const MatM3 a = m->rotation_generator(nu).matrix;
    for (int j = 0; j < 3; ++j) {
      const VecM col = a.col(j);
      CHECK((m->tangent_project(nu, col) - col).norm() < 1e-10);
    }
  }
}

TEST_CASE("named manifolds and their constraints") {
  CHECK(manifold_by_name("sphere")->embed_dim() == 3);
  CHECK(manifold_by_name("interval")->embed_dim() == 1);
  CHECK(manifold_by_name("sym_positive")->embed_dim() == 9);
  CHECK(manifold_by_name("degree_of_orientation")->embed_dim() == 4);
  CHECK(manifold_by_name("smectic")->embed_dim() == 4);
  CHECK(manifold_by_name("euclidean3")->embed_dim() == 3);
  CHECK_THROWS_AS(manifold_by_name("torus"), Error);

  const ManifoldSpec iv = make_interval();
  VecM p(1);
  p << 1.7;
  CHECK(iv->project(p)(0) == 1.0);
  p << -0.3;
  CHECK(iv->project(p)(0) == 0.0);

  const ManifoldSpec dof = make_degree_of_orientation();
  VecM q(4);
  q << 0, 0, 2, -3;
  const VecM pq = dof->project(q);
  CHECK(pq.head<3>().norm() == doctest::Approx(1.0));
  CHECK(pq(3) == -0.5);
}

TEST_CASE("sym_positive projection symmetrizes and clamps eigenvalues") {
  const ManifoldSpec m = make_sym_positive(1e-8);
  VecM p(9);
  p << -1, 2, 0, 0, 3, 0, 0, 0, 1;
  const VecM q = m->project(p);
  Eigen::Matrix3d a = Eigen::Map<const Eigen::Matrix<double, 3, 3, Eigen::RowMajor>>(q.data());
  CHECK((a - a.transpose()).norm() < 1e-14);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(a);
  CHECK(es.eigenvalues().minCoeff() >= 1e-8 * (1 - 1e-12));
  CHECK(m->constraint_violation(q) <= 1e-10);
}

TEST_CASE("interval feasible direction blocks leaving through the boundary") {
  const ManifoldSpec iv = make_interval();
  VecM at_top(1), up(1), down(1);
  at_top << 1.0;
  up << 0.5;
  down << -0.5;
  CHECK(iv->feasible_direction(at_top, up)(0) == 0.0);
  CHECK(iv->feasible_direction(at_top, down)(0) == -0.5);
}

TEST_CASE("rotation helpers") {
  const Vec3 q(0.3, -0.2, 0.5);
  const Mat3 r = rotation_matrix(q);
  CHECK((r * r.transpose() - Mat3::Identity()).norm() < 1e-14);
  CHECK(r.determinant() == doctest::Approx(1.0));
  CHECK((r * q - q).norm() < 1e-14);
  const Vec3 v(1, 2, 3);
  CHECK((cross_matrix(q) * v - q.cross(v)).norm() < 1e-15);
}
