#pragma once

// Discrete energy E_h(u, nu) = sum_s w_s e(x_s, u_s, F_s, nu_s, N_s) over the
// corner samples of active cells, and its exact derivative with respect to
// nodal values.

#include "cbody/energy.hpp"
#include "cbody/fields.hpp"

namespace cbody {

struct CellDerivatives {
  SampleField samples;
  std::vector<DensityDerivatives> d;  // one per sample; inactive cells hold zeros
};

CellDerivatives evaluate_cells(const EnergyDensity& e, const FieldState& state, const Grid& grid);

/// +inf if any sample of an active cell evaluates to a non-finite value.
double total_energy(const EnergyDensity& e, const FieldState& state, const Grid& grid);

struct NodalGradient {
  Eigen::Matrix3Xd u;
  Eigen::MatrixXd nu;

  /// <g, (h, v)> = sum_n g_u(n).h(n) + g_nu(n).v(n)
  double pair(const Eigen::Matrix3Xd& h, const Eigen::MatrixXd& v) const;
  /// max_n |g(n)| / V_n over active nodes (mass-lumped sup norm).
  double lumped_sup_norm(const Grid& grid) const;
};

enum class SampleStatus { Ok, NonPositiveDet, NonFinite };

struct EnergyGradient {
  SampleStatus status = SampleStatus::Ok;
  double energy = 0.0;
  NodalGradient grad;  // empty unless requested and status == Ok
};

/// Energy and (optionally) its nodal gradient in one pass over the samples,
/// without storing them. With check_det the pass stops at the first sample
/// whose det F is not positive.
EnergyGradient energy_and_gradient(const EnergyDensity& e, const FieldState& state, const Grid& grid,
                                   bool with_gradient, bool check_det);

/// dE_h / d(nodal values), in ambient coordinates, with no masking.
NodalGradient energy_gradient(const EnergyDensity& e, const FieldState& state, const Grid& grid);
NodalGradient energy_gradient(const CellDerivatives& cells, const FieldState& state, const Grid& grid);

/// energy_gradient with nu components projected onto T_nu M, zero on pinned
/// and inactive nodes and on the frozen third u component in 2D.
NodalGradient projected_gradient(const EnergyDensity& e, const FieldState& state, const Grid& grid,
                                 const Manifold& manifold);
NodalGradient project_gradient(NodalGradient g, const FieldState& state, const Grid& grid, const Manifold& manifold);

}  // namespace cbody
