#pragma once

#include <cmath>
#include <random>
#include <string>

#include "cbody/fields.hpp"
#include "cbody/manifolds.hpp"
#include "cbody/types.hpp"

namespace cbody::test {

inline Mat3 random_matrix(std::mt19937_64& rng, double spread = 1.0) {
  std::normal_distribution<double> n01(0.0, spread);
  Mat3 m;
  for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = n01(rng);
  return m;
}

inline Eigen::MatrixXd random_dense(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> n01(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = n01(rng);
  return m;
}

// Smooth non-affine state: u a perturbed identity, nu a smooth field pushed onto M.
inline FieldState smooth_state(const Grid& g, ManifoldSpec m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> a(-1.0, 1.0);
  const Vec3 k(a(rng), a(rng), a(rng));
  const Mat3 lin = Mat3::Identity() + 0.1 * test::random_matrix(rng);
  FieldState s = FieldState::identity(g, m, VecM::Constant(m->embed_dim(), 0.3));
  const int dim = m->embed_dim();
  Eigen::VectorXd phase(dim), amp(dim), base(dim);
  for (int i = 0; i < dim; ++i) {
    phase(i) = a(rng);
    amp(i) = 0.3 * a(rng);
    base(i) = a(rng);
  }
  if (m->name().find("sym_positive") != std::string::npos) base << 2, 0, 0, 0, 2, 0, 0, 0, 2;
  if (m->has_boundary()) base(dim - 1) = 0.25;
  for (int n = 0; n < g.num_nodes(); ++n) {
    const Vec3 x = g.node_position(n);
    s.u.col(n) = lin * x + 0.05 * Vec3(std::sin(x.dot(k)), std::cos(2 * x(0)), x(1) * x(2));
    VecM v(dim);
    for (int i = 0; i < dim; ++i) v(i) = base(i) + amp(i) * std::sin(x.dot(k) * (i + 1) + phase(i));
    if (m->has_boundary()) v(dim - 1) = 0.25 + 0.1 * std::sin(x(0));
    s.nu.col(n) = m->project(v);
  }
  return s;
}

}  // namespace cbody::test
