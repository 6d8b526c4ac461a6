#pragma once

// Energy densities e(x, u, F, nu, N) with analytic first derivatives.
//
// Derivative naming follows the actions they define:
//   d_F  = P      first Piola-Kirchhoff stress
//   d_N  = S      microstress
//   d_nu = zeta   (embedded, not yet projected to the cotangent space)
//   d_u  = -b
//   d_x  explicit material inhomogeneity

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cbody/types.hpp"

namespace cbody {

struct PointState {
  Vec3 x = Vec3::Zero();
  Vec3 u = Vec3::Zero();
  Mat3 F = Mat3::Identity();
  VecM nu;
  MatM3 N;
};

struct DensityDerivatives {
  double value = 0.0;
  Vec3 d_x = Vec3::Zero();
  Vec3 d_u = Vec3::Zero();
  Mat3 d_F = Mat3::Zero();
  VecM d_nu;
  MatM3 d_N;

  static DensityDerivatives zero(int m);
  DensityDerivatives& operator+=(const DensityDerivatives& o);
};

enum class GrowthVariant { H2, H3 };

/// Lower bound an energy density claims to satisfy.
///   H2: e >= C1 (|M(F)|^r + |N|^s) + theta(det F)
///   H3: e >= C1 (|F|^2 + |adj F|^{3/2} + |N|^s) + theta(det F)
/// An empty r drops the minors term; an empty theta is identically zero.
struct GrowthSpec {
  double c1 = 1.0;
  std::optional<double> r;
  double s = 2.0;
  std::function<double(double)> theta;
  GrowthVariant variant = GrowthVariant::H2;
  std::string description;

  double bound(const Mat3& F, const MatM3& N) const;
  /// H3 bound with |adj F|^2 instead of |adj F|^{3/2}.
  double bound_adj_squared(const Mat3& F, const MatM3& N) const;
};

/// Pe(xi, N) at frozen (x, u, nu): a function of the full minors components
/// (as produced by MinorsVector::components, order0 first) and N that
/// reproduces e at xi = M(F). Convexity of Pe in (xi, N) is what
/// polyconvexity asks for.
using MinorsGenerator =
    std::function<double(const Eigen::VectorXd& xi, const MatM3& N, const PointState& frozen)>;

class EnergyDensity {
 public:
  virtual ~EnergyDensity() = default;

  virtual std::string name() const = 0;
  /// Ambient dimension of nu the density is written for.
  virtual int descriptor_dim() const = 0;

  virtual double eval(const PointState& s) const = 0;
  virtual DensityDerivatives derivatives(const PointState& s) const = 0;

  /// Invariant under simultaneous rotation of the ambient space and of M.
  virtual bool objective() const { return false; }
  virtual bool x_homogeneous() const { return true; }
  virtual const MinorsGenerator* minors_generator() const { return nullptr; }

  /// d_nu of the parts registered as external; beta = -d_nu_external.
  virtual VecM d_nu_external(const PointState& s) const;

  const std::optional<GrowthSpec>& growth_meta() const { return growth_; }
  void set_growth_meta(GrowthSpec g) { growth_ = std::move(g); }

 private:
  std::optional<GrowthSpec> growth_;
};

using DensityPtr = std::shared_ptr<const EnergyDensity>;

// ---------------------------------------------------------------------------
// Ginzburg-Landau family

/// Pluggable two-well potential e_E(x, nu).
struct TwoWell {
  std::function<double(const Vec3& x, const VecM& nu)> value;
  std::function<VecM(const Vec3& x, const VecM& nu)> d_nu;
  std::function<Vec3(const Vec3& x, const VecM& nu)> d_x;
  bool rotation_invariant = false;
  bool x_dependent = false;
};

TwoWell zero_well(int m);

/// height * (nu_i - a)^2 (nu_i - b)^2 on one descriptor component.
/// rotation_invariant must be set by the caller: it holds when component i
/// belongs to a factor of M that does not rotate.
TwoWell component_double_well(int m, int index, double a, double b, double height,
                              bool rotation_invariant);

/// As component_double_well but with the first well at a0 + slope * x_1.
TwoWell graded_double_well(int m, int index, double a0, double slope, double b, double height);

enum class PartRole { Internal, External };

struct DensityPart {
  DensityPtr density;
  PartRole role = PartRole::Internal;
};

/// Sum of registered parts; z and beta are split by role.
class DecomposedDensity final : public EnergyDensity {
 public:
  DecomposedDensity(std::string name, std::vector<DensityPart> parts);

  std::string name() const override { return name_; }
  int descriptor_dim() const override;
  double eval(const PointState& s) const override;
  DensityDerivatives derivatives(const PointState& s) const override;
  bool objective() const override;
  bool x_homogeneous() const override;
  const MinorsGenerator* minors_generator() const override;
  VecM d_nu_external(const PointState& s) const override;

  const std::vector<DensityPart>& parts() const { return parts_; }

 private:
  std::string name_;
  std::vector<DensityPart> parts_;
  std::optional<MinorsGenerator> generator_;
};

DensityPtr make_two_well_density(TwoWell w, int m);
DensityPtr make_gradient_penalty(double varpi, int m);

/// e_E(x, nu) + 1/2 varpi |N|^2, registered as two parts.
std::shared_ptr<const DecomposedDensity> make_ginzburg_landau(TwoWell w, double varpi, int m);

// ---------------------------------------------------------------------------
// Linear-elastic complex bodies

/// Constitutive tensors of the quadratic densities, stored as matrices over
/// flattened indices. With eps = sym(F - I) flattened row-major (9),
/// nu flattened (m) and N flattened row-major (3m, index 3*alpha + k):
///
///   e = 1/2 eps.C.eps + eps.A1.nu + eps.A2.N + 1/2 nu.A3.nu + nu.A4.N + 1/2 N.A5.N
///
/// nu_dim = 9 for a second-rank tensor descriptor, 3 for a vector one.
struct QuadraticConstitutive {
  int nu_dim = 3;
  Eigen::MatrixXd C, A1, A2, A3, A4, A5;
  bool centrosymmetric = false;

  static QuadraticConstitutive zeros(int nu_dim);
};

/// C_ijhk = lambda d_ij d_hk + mu (d_ih d_jk + d_ik d_jh) as a 9x9 matrix.
Eigen::MatrixXd isotropic_stiffness(double lambda, double mu);

DensityPtr make_quadratic_tensor(QuadraticConstitutive k);
DensityPtr make_quadratic_vector(QuadraticConstitutive k);

// ---------------------------------------------------------------------------
// Quasicrystals

/// macro(F) = a(|F|^2 - 3) + b(|adj F|^2 - 3) + c(J - 1 - log J) - 2(a + 2b) log J + offset
/// plus 1/2 K |N|^2 and an optional phonon-phason coupling (F - I).R.N
/// (R is 9 x 9, rows index F_ij, columns N_alpha k).
struct QuasicrystalParams {
  double a = 1.0;
  double b = 1.0;
  double c = 1.0;
  double offset = 0.5;
  double K = 1.0;
  Eigen::MatrixXd coupling;  // empty = none
};

DensityPtr make_quasicrystal(QuasicrystalParams p);

/// The growth bound shipped with the default quasicrystal parameters:
/// H2 with C1 = 0.1, r = 4/3, s = 2, theta(t) = 0.5 (t - 1 - log t).
GrowthSpec quasicrystal_growth_spec();

// ---------------------------------------------------------------------------
// Director-type densities

/// 1/2 |N|^2 for S^2-valued nu.
DensityPtr make_dirichlet_sphere();

/// 1/2 |N|^2 + 1/2 kappa (nu . axis)^2. Breaks frame indifference on purpose.
DensityPtr make_easy_axis_sphere(double kappa, const Vec3& axis);

/// nu = (l, n) in R x S^2: 1/2 k1 (|grad l| - 1)^2 + 1/2 k2 (div n)^2.
DensityPtr make_smectic_a(double k1, double k2);

}  // namespace cbody
