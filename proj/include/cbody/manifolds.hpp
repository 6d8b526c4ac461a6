#pragma once

// Manifolds of substructural shapes, each given by a fixed isometric
// embedding in R^N. Points, tangent vectors and covectors are ambient
// coordinate vectors.
//
// Embeddings:
//   euclidean(m)        R^m, identity embedding
//   sphere              S^2 in R^3
//   interval(lo, hi)    [lo, hi] in R
//   sym_positive        positive-definite symmetric 3x3, row-major in R^9
//   product(a, b, ...)  concatenated coordinates
//   degree_of_orientation = product(sphere, interval(-1/2, 1))

#include <memory>
#include <string>
#include <vector>

#include "cbody/types.hpp"

namespace cbody {

class Manifold;
using ManifoldSpec = std::shared_ptr<const Manifold>;

/// Linear map A(v): R^3 -> R^N, so that A(nu) q is the infinitesimal
/// rotation of nu about q. For the sphere A(nu) q = q x nu.
struct RotationGenerator {
  MatM3 matrix;
};

class Manifold {
 public:
  virtual ~Manifold() = default;

  virtual std::string name() const = 0;
  virtual int embed_dim() const = 0;
  virtual bool has_boundary() const = 0;
  virtual bool rotation_generator_defined() const = 0;

  /// Nearest-point projection. Throws Error(ProjectionUndefined).
  virtual VecM project(const VecM& p) const = 0;

  /// Orthogonal projection onto T_nu M (linear in v).
  virtual VecM tangent_project(const VecM& nu, const VecM& v) const = 0;

  /// Distance of p from satisfying the manifold's defining constraint.
  virtual double constraint_violation(const VecM& p) const = 0;

  /// Zeroes the components of a tangent direction that would leave M through
  /// its boundary at nu (identity on manifolds without boundary).
  virtual VecM feasible_direction(const VecM& nu, const VecM& v) const { (void)nu; return v; }

  /// project(nu + v). Throws Error(RetractionUndefined).
  VecM retract(const VecM& nu, const VecM& v) const;

  /// A(nu); throws Error(GeneratorUnavailable) when no SO(3) action is declared.
  RotationGenerator rotation_generator(const VecM& nu) const;

  /// The generator is linear in its base point for every shipped manifold;
  /// rotation_action(v) evaluates that linear extension at any ambient v, so
  /// rotation_action(N_j) is the derivative of A along the j-th column of Dnu.
  virtual MatM3 rotation_action(const VecM& v) const;
};

ManifoldSpec make_euclidean(int dim);
ManifoldSpec make_sphere();
ManifoldSpec make_interval(double lo = 0.0, double hi = 1.0);
ManifoldSpec make_sym_positive(double eig_floor = 1e-8);
ManifoldSpec make_product(std::vector<ManifoldSpec> factors);
ManifoldSpec make_degree_of_orientation();

/// Resolves "euclidean3", "sphere", "interval", "sym_positive",
/// "degree_of_orientation", "smectic" (R x S^2). Throws Error(ConfigError).
ManifoldSpec manifold_by_name(const std::string& name);

/// Rotation matrix for angle |q| about axis q (Rodrigues).
Mat3 rotation_matrix(const Vec3& q);

/// Matrix of v -> a x v.
Mat3 cross_matrix(const Vec3& a);

}  // namespace cbody
