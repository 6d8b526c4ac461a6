#pragma once

// Actions (P, S, zeta, b), Hamilton-Eshelby and Cauchy stresses assembled from
// a state, and residuals of the balance laws satisfied by minimizers.
//
// Conventions (all matrices row = component, column = reference direction):
//   (D phi)_ij = d phi_i / d x_j,   A : B = A_ij B_ij
//   PP = e I - F^T P - N^T S
//   eps(A)_k = eps_kij A_ij  (axial vector of the skew part, times 2)
//   rotational residual  r = eps(P F^T) - A(nu)^T zeta - sum_j A(N_j)^T S_j
// with A(.) the manifold's rotation action, extended linearly to columns of N.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cbody/energy.hpp"
#include "cbody/energy_checks.hpp"
#include "cbody/fields.hpp"
#include "cbody/manifolds.hpp"

namespace cbody {

// All per-point quantities live on the corner samples of the energy quadrature.
struct BalanceFields {
  SampleField samples;
  std::vector<Mat3> P;
  std::vector<MatM3> S;
  std::vector<MatM3> S_response;    // d/dt S(N + tN) at t = 0; enters strong-residual scales only
  std::vector<VecM> zeta;           // tangent-projected
  std::vector<VecM> zeta_embedded;  // d_nu e as computed
  std::vector<VecM> z;              // internal part, projected
  std::vector<VecM> beta;           // external action: -(external d_nu), projected
  std::vector<Vec3> b;
  std::vector<double> e_val;
  std::vector<Vec3> de_dx;
};

/// Samples of inactive cells hold zeros.
BalanceFields assemble_actions(const EnergyDensity& density, const FieldState& state, const Grid& grid);

struct Residual {
  double raw = 0.0;
  double scale = 0.0;
  double ratio = 0.0;  // |raw| / scale (0 when both vanish)
};

Residual make_residual(double raw, double scale);

/// Nodal test pair (h, upsilon) for the weak Euler-Lagrange form.
struct NodalTest {
  Eigen::Matrix3Xd h;
  Eigen::MatrixXd upsilon;
};

/// sum_s w_s (-b.h + P:Dh + zeta.upsilon + S:D upsilon) per test. The embedded
/// zeta is paired with upsilon; for tangent upsilon this equals the pairing
/// with the projected zeta.
/// Throws Error(NonTangentTest) when upsilon leaves T_nu M at some node and
/// Error(InvalidParameter) when a test is nonzero on a pinned node.
std::vector<Residual> weak_el_residual(const BalanceFields& bf, const std::vector<NodalTest>& tests,
                                       const FieldState& state, const Grid& grid);

/// Smooth bump tests supported on free interior nodes.
std::vector<NodalTest> random_nodal_tests(const FieldState& state, const Grid& grid, int count, std::uint64_t seed);

struct StrongResiduals {
  Eigen::MatrixXd cauchy;  // Div P + avg'(b), 3 x nodes
  Eigen::MatrixXd capriz;  // tangent part of Div S - avg'(zeta), m x nodes
  std::vector<std::uint8_t> interior;  // nodes the norms are taken over
  Residual cauchy_sup, cauchy_l2, capriz_sup, capriz_l2;
};

/// Nodal residuals on interior nodes: all adjacent cells active, not pinned.
/// The scale at a node is the sum of magnitudes of the terms entering it, so
/// ratios measure cancellation rather than the size of the balance.
StrongResiduals strong_residuals(const BalanceFields& bf, const FieldState& state, const Grid& grid);

struct RotationalResidual {
  std::vector<Vec3> r;   // per sample
  Residual max_cell;     // max_s |r_s| / max_s scale_s
};

/// Throws Error(GeneratorUnavailable) when the manifold declares no SO(3) action.
RotationalResidual rotational_balance(const BalanceFields& bf, const Manifold& manifold, const Grid& grid);

std::vector<Mat3> eshelby(const BalanceFields& bf, const Grid& grid);

/// Analytic test field with its gradient (D phi)_ij = d phi_i / d x_j.
struct VectorTest {
  std::function<Vec3(const Vec3&)> phi;
  std::function<Mat3(const Vec3&)> dphi;
};

/// a * (1 - |x - c|^2 / R^2)^3 inside the ball of radius R.
VectorTest bump_test(const Vec3& center, double radius, const Vec3& amplitude);

/// Bumps whose support avoids boundary, pinned and inactive nodes (in reference space).
std::vector<VectorTest> random_reference_tests(const FieldState& state, const Grid& grid, int count,
                                               std::uint64_t seed);

/// int PP : D phi + int d_x e . phi  -  4 pi sum_s mult_s len_s (T_s x T_s) : D phi(mid_s)
/// with the corner quadrature of the energy and phi evaluated analytically.
std::vector<Residual> configurational_residual(const std::vector<Mat3>& pp, const BalanceFields& bf,
                                               const std::vector<VectorTest>& tests, const Grid& grid,
                                               const LineDefect* line = nullptr);

/// sigma = P F^T / det F per sample. Throws Error(SingularCell) if det F <= 0 on an active cell.
std::vector<Mat3> cauchy_stress(const BalanceFields& bf, const Grid& grid);

/// Pullback of the spatial weak balance: int (sigma o u) : (D phi o u) det F dx - int b . (phi o u) dx,
/// evaluated as sum_s w_s (P F^T : D phi(u_s) - b . phi(u_s)).
std::vector<Residual> eulerian_residual(const BalanceFields& bf, const std::vector<VectorTest>& spatial_tests,
                                        const Grid& grid);

/// Spatial bumps centred at deformed free interior nodes whose preimage support stays interior.
std::vector<VectorTest> random_spatial_tests(const FieldState& state, const Grid& grid, int count, std::uint64_t seed);

/// Max ratio over a list (0 for an empty list).
double max_ratio(const std::vector<Residual>& rs);

}  // namespace cbody
