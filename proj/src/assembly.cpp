#include "cbody/assembly.hpp"

#include <cmath>
#include <limits>

#include "cbody/error.hpp"

namespace cbody {

CellDerivatives evaluate_cells(const EnergyDensity& e, const FieldState& state, const Grid& grid) {
  CellDerivatives out;
  out.samples = corner_samples(state, grid);
  const int m = static_cast<int>(state.nu.rows());
  out.d.assign(out.samples.points.size(), DensityDerivatives::zero(m));
  for (int s = 0; s < out.samples.size(); ++s) {
    if (grid.cell_active(out.samples.cell(s))) {
      out.d[static_cast<std::size_t>(s)] = e.derivatives(out.samples.points[static_cast<std::size_t>(s)]);
    }
  }
  return out;
}

double total_energy(const EnergyDensity& e, const FieldState& state, const Grid& grid) {
  const EnergyGradient r = energy_and_gradient(e, state, grid, false, false);
  return r.status == SampleStatus::Ok ? r.energy : std::numeric_limits<double>::infinity();
}

EnergyGradient energy_and_gradient(const EnergyDensity& e, const FieldState& state, const Grid& grid,
                                   bool with_gradient, bool check_det) {
  EnergyGradient out;
  const int m = static_cast<int>(state.nu.rows());
  if (state.u.cols() != grid.num_nodes() || state.nu.cols() != grid.num_nodes()) {
    throw Error(ErrorCode::SizeMismatch, "field state does not match grid");
  }
  if (with_gradient) {
    out.grad.u = Eigen::Matrix3Xd::Zero(3, grid.num_nodes());
    out.grad.nu = Eigen::MatrixXd::Zero(m, grid.num_nodes());
  }
  const double w = grid.cell_volume() / grid.corners();
  double sum = 0.0;
  bool stop = false;
  for_each_sample(state, grid, [&](int c, int k, const PointState& p) {
    if (stop) return;
    if (check_det && !(p.F.determinant() > 0.0)) {
      out.status = SampleStatus::NonPositiveDet;
      stop = true;
      return;
    }
    if (!with_gradient) {
      sum += e.eval(p);
      return;
    }
    const DensityDerivatives d = e.derivatives(p);
    sum += d.value;
    const int n0 = grid.cell_node(c, k);
    out.grad.u.col(n0) += w * d.d_u;
    out.grad.nu.col(n0) += w * d.d_nu;
    for (int a = 0; a < grid.dim(); ++a) {
      const int n1 = grid.cell_node(c, k ^ (1 << a));
      const double coef = w * corner_coefficient(grid, k, a);
      out.grad.u.col(n1) += coef * d.d_F.col(a);
      out.grad.u.col(n0) -= coef * d.d_F.col(a);
      out.grad.nu.col(n1) += coef * d.d_N.col(a);
      out.grad.nu.col(n0) -= coef * d.d_N.col(a);
    }
  });
  if (out.status == SampleStatus::Ok && !std::isfinite(sum)) out.status = SampleStatus::NonFinite;
  out.energy = out.status == SampleStatus::Ok ? sum * w : std::numeric_limits<double>::infinity();
  if (out.status != SampleStatus::Ok) out.grad = NodalGradient{};
  return out;
}

double NodalGradient::pair(const Eigen::Matrix3Xd& h, const Eigen::MatrixXd& v) const {
  if (h.cols() != u.cols() || v.rows() != nu.rows() || v.cols() != nu.cols()) {
    throw Error(ErrorCode::SizeMismatch, "test field does not match gradient");
  }
  return u.cwiseProduct(h).sum() + nu.cwiseProduct(v).sum();
}

double NodalGradient::lumped_sup_norm(const Grid& grid) const {
  double s = 0.0;
  for (int n = 0; n < grid.num_nodes(); ++n) {
    const double vn = grid.node_volume(n);
    if (vn <= 0.0) continue;
    const double g = std::sqrt(u.col(n).squaredNorm() + nu.col(n).squaredNorm());
    s = std::max(s, g / vn);
  }
  return s;
}

NodalGradient energy_gradient(const CellDerivatives& cells, const FieldState& state, const Grid& grid) {
  NodalGradient g;
  g.u = Eigen::Matrix3Xd::Zero(3, grid.num_nodes());
  g.nu = Eigen::MatrixXd::Zero(state.nu.rows(), grid.num_nodes());
  const SampleField& sf = cells.samples;
  const double w = sf.weight;
  for (int s = 0; s < sf.size(); ++s) {
    const int c = sf.cell(s);
    if (!grid.cell_active(c)) continue;
    const int k = sf.corner(s);
    const DensityDerivatives& d = cells.d[static_cast<std::size_t>(s)];
    const int n0 = grid.cell_node(c, k);
    g.u.col(n0) += w * d.d_u;
    g.nu.col(n0) += w * d.d_nu;
    for (int a = 0; a < grid.dim(); ++a) {
      const int n1 = grid.cell_node(c, k ^ (1 << a));
      const double coef = w * corner_coefficient(grid, k, a);
      g.u.col(n1) += coef * d.d_F.col(a);
      g.u.col(n0) -= coef * d.d_F.col(a);
      g.nu.col(n1) += coef * d.d_N.col(a);
      g.nu.col(n0) -= coef * d.d_N.col(a);
    }
  }
  return g;
}

NodalGradient energy_gradient(const EnergyDensity& e, const FieldState& state, const Grid& grid) {
  EnergyGradient r = energy_and_gradient(e, state, grid, true, false);
  if (r.status != SampleStatus::Ok) return energy_gradient(evaluate_cells(e, state, grid), state, grid);
  return std::move(r.grad);
}

NodalGradient project_gradient(NodalGradient g, const FieldState& state, const Grid& grid, const Manifold& manifold) {
  for (int n = 0; n < grid.num_nodes(); ++n) {
    const auto un = static_cast<std::size_t>(n);
    if (!grid.node_active(n) || state.pinned_u[un]) {
      g.u.col(n).setZero();
    } else if (grid.dim() == 2) {
      g.u(2, n) = 0.0;
    }
    if (!grid.node_active(n) || state.pinned_nu[un]) {
      g.nu.col(n).setZero();
    } else {
      g.nu.col(n) = manifold.tangent_project(state.nu.col(n), g.nu.col(n));
    }
  }
  return g;
}

NodalGradient projected_gradient(const EnergyDensity& e, const FieldState& state, const Grid& grid,
                                 const Manifold& manifold) {
  return project_gradient(energy_gradient(e, state, grid), state, grid, manifold);
}

}  // namespace cbody
