#pragma once

// Uniform Cartesian discretization of the reference body.
//
// Nodes carry u (3-vector) and nu (ambient coordinates of a point of M).
// gradients() gives cell-centered F = Du and N = Dnu: each partial derivative
// is the average of the forward differences along the cell's parallel edges,
// i.e. the gradient of the multilinear interpolant at the cell center. These
// feed reports and admissibility checks; energies and weak forms use the
// corner quadrature declared further down.
//
// In 2D the grid spans (x, y), z = lower(2), u keeps three components with
// the third frozen, the third column of F is e_3 and the third column of N
// is zero.

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "cbody/energy.hpp"
#include "cbody/manifolds.hpp"
#include "cbody/types.hpp"

namespace cbody {

class Grid {
 public:
  /// nodes_per_axis[a] >= 2 for a < dim; ignored (set to 1) for a >= dim.
  Grid(int dim, const Vec3& lower, const Vec3& upper, std::array<int, 3> nodes_per_axis);

  /// Same number of cells along each axis.
  static Grid cube(int dim, int cells, const Vec3& lower, const Vec3& upper);

  int dim() const { return dim_; }
  const Vec3& lower() const { return lower_; }
  const Vec3& upper() const { return upper_; }
  int nodes(int axis) const { return nodes_[static_cast<std::size_t>(axis)]; }
  int cells(int axis) const { return axis < dim_ ? nodes(axis) - 1 : 1; }
  double spacing(int axis) const { return h_[static_cast<std::size_t>(axis)]; }
  double min_spacing() const;
  int num_nodes() const { return nodes_[0] * nodes_[1] * nodes_[2]; }
  int num_cells() const { return cells(0) * cells(1) * cells(2); }
  int corners() const { return 1 << dim_; }
  double cell_volume() const { return cell_volume_; }

  int node_index(int i, int j, int k) const { return i + nodes_[0] * (j + nodes_[1] * k); }
  std::array<int, 3> node_ijk(int n) const;
  Vec3 node_position(int n) const;

  int cell_index(int i, int j, int k) const { return i + cells(0) * (j + cells(1) * k); }
  std::array<int, 3> cell_ijk(int c) const;
  Vec3 cell_center(int c) const;

  /// Node of corner `corner` (bit a of corner = upper side along axis a).
  int cell_node(int c, int corner) const {
    return cell_nodes_[static_cast<std::size_t>(c)][static_cast<std::size_t>(corner)];
  }

  /// d(partial_axis f)/d f_corner for the cell-centered gradient.
  double gradient_weight(int corner, int axis) const {
    return weights_[static_cast<std::size_t>(corner)][static_cast<std::size_t>(axis)];
  }

  // Domain mask (general B_0 inside the box). All cells are active by default.
  void set_active(std::vector<std::uint8_t> cell_active);
  bool cell_active(int c) const { return active_[static_cast<std::size_t>(c)] != 0; }
  const std::vector<std::uint8_t>& active_mask() const { return active_; }
  int num_active_cells() const;
  /// Node touches at least one active cell.
  bool node_active(int n) const { return node_active_cells_[static_cast<std::size_t>(n)] > 0; }
  /// Active node on the boundary of the active region (box face or next to an inactive cell).
  bool node_on_boundary(int n) const;
  /// Lumped nodal volume: sum of adjacent active cell volumes / 2^dim.
  double node_volume(int n) const {
    return node_active_cells_[static_cast<std::size_t>(n)] * cell_volume_ / corners();
  }

  /// Keep only cells whose centers satisfy the predicate.
  void mask_cells(const std::function<bool(const Vec3&)>& keep);

 private:
  void rebuild_node_counts();

  int dim_;
  Vec3 lower_, upper_;
  std::array<int, 3> nodes_;
  std::array<double, 3> h_;
  double cell_volume_;
  std::array<std::array<double, 3>, 8> weights_{};
  std::vector<std::uint8_t> active_;
  std::vector<int> node_active_cells_;
  std::vector<std::array<int, 8>> cell_nodes_;
};

struct FieldState {
  ManifoldSpec manifold;
  Eigen::Matrix3Xd u;   // 3 x nodes
  Eigen::MatrixXd nu;   // embed_dim x nodes
  std::vector<std::uint8_t> pinned_u;
  std::vector<std::uint8_t> pinned_nu;

  /// u = identity placement, nu = project(nu0) at every node, nothing pinned.
  static FieldState identity(const Grid& grid, ManifoldSpec manifold, const VecM& nu0);

  int num_nodes() const { return static_cast<int>(u.cols()); }
  VecM nu_at(int n) const { return nu.col(n); }
  /// Largest constraint violation of nu over active nodes.
  double max_constraint_violation(const Grid& grid) const;
};

/// Cell-centered samples: gradients plus the averaged fields and positions
/// the density is evaluated at.
struct GradientField {
  std::vector<Mat3> F;
  std::vector<MatM3> N;
  std::vector<Vec3> u;
  std::vector<VecM> nu;
  std::vector<Vec3> x;

  PointState point(int c) const { return PointState{x[static_cast<std::size_t>(c)], u[static_cast<std::size_t>(c)], F[static_cast<std::size_t>(c)], nu[static_cast<std::size_t>(c)], N[static_cast<std::size_t>(c)]}; }
};

/// Throws Error(SizeMismatch) when the state does not match the grid.
GradientField gradients(const FieldState& state, const Grid& grid);

/// Sum of value * cell volume over active cells.
double integrate_cells(const std::vector<double>& values, const Grid& grid);

struct NodeInfo {
  int index;
  Vec3 x;
  std::array<int, 3> ijk;
  bool on_boundary;
};

enum class FieldKind { U, Nu };

using NodeRegion = std::function<bool(const NodeInfo&)>;
using NodeValue = std::function<VecM(const Vec3&)>;

/// Pins the selected nodes and writes value(x) (projected onto M for nu).
/// Throws Error(InteriorNodeSelected) if the region picks a non-boundary node.
FieldState apply_dirichlet(const FieldState& state, const Grid& grid, FieldKind which, const NodeRegion& region,
                           const NodeValue& value);

/// Region helpers.
NodeRegion whole_boundary();
/// Boundary nodes on the box face x_axis = lower (side 0) or upper (side 1).
NodeRegion box_face(const Grid& grid, int axis, int side);

/// Discrete divergence, the negative adjoint of the cell gradient under the
/// lumped nodal volumes:
///   sum_c V_c T_c : (D h)_c  =  - sum_n V_n (Div T)_n . h_n
/// holds exactly for every nodal h supported on active nodes.
/// T holds one rows x 3 matrix per cell; the result is rows x nodes.
Eigen::MatrixXd divergence(const std::vector<MatM3>& T, const Grid& grid);
Eigen::MatrixXd divergence(const std::vector<Mat3>& T, const Grid& grid);

/// Adjoint of the corner averaging used to build cell values:
///   sum_c V_c v_c . avg(h)_c = sum_n V_n (result)_n . h_n.
Eigen::MatrixXd average_adjoint(const std::vector<VecM>& v, const Grid& grid);
Eigen::MatrixXd average_adjoint(const std::vector<Vec3>& v, const Grid& grid);

// ---------------------------------------------------------------------------
// Corner quadrature. The discrete energy and every weak form are evaluated at
// the 2^d corners of each active cell, with weight V_c / 2^d. At corner k the
// gradient is built from the d cell edges meeting at that corner, and the
// point values (x, u, nu) are the nodal ones, so nu is exactly on M. The mean
// of the corner gradients of a cell is its cell-centered gradient. Unlike the
// one-point rule, this quadrature has no zero-energy hourglass modes.

/// Sample s = c * corners + k.
struct SampleField {
  int corners = 8;
  double weight = 0.0;  // V_c / 2^d
  std::vector<PointState> points;

  int cell(int s) const { return s / corners; }
  int corner(int s) const { return s % corners; }
  int size() const { return static_cast<int>(points.size()); }
};

/// Samples of inactive cells are left at their default values.
SampleField corner_samples(const FieldState& state, const Grid& grid);

/// min over active cells of det of the cell-centered F (+inf without active cells).
double min_cell_det(const Eigen::Matrix3Xd& u, const Grid& grid);

/// Calls fn(c, k, point) for every corner sample of every active cell without
/// storing the samples. `point` is reused between calls.
template <class Fn>
void for_each_sample(const FieldState& state, const Grid& grid, Fn&& fn);

/// +1 / h_a if corner k sits on the lower side along axis a, else -1 / h_a:
/// column a of the corner gradient is coef * (f(k ^ (1 << a)) - f(k)).
inline double corner_coefficient(const Grid& grid, int k, int a) {
  return ((k >> a) & 1 ? -1.0 : 1.0) / grid.spacing(a);
}

MatM3 corner_gradient(const Eigen::MatrixXd& nodal, const Grid& grid, int c, int k);

/// acc(:, n) += w * dT/dh_n, the adjoint of h -> w * T : (D h)_{c,k}.
void scatter_corner_gradient(Eigen::MatrixXd& acc, const MatM3& T, const Grid& grid, int c, int k, double w);

/// Discrete divergence of a sample field T: the negative adjoint of the corner
/// gradients under the lumped nodal volumes,
///   sum_s w_s T_s : (D h)_s = - sum_n V_n (Div T)_n . h_n.
Eigen::MatrixXd sample_divergence(const std::vector<MatM3>& T, const SampleField& samples, const Grid& grid);

/// (1 / V_n) sum over samples located at node n of w_s v_s.
Eigen::MatrixXd sample_average_adjoint(const std::vector<VecM>& v, const SampleField& samples, const Grid& grid);

/// Cell gradient of an arbitrary nodal field (rows x nodes) at cell c.
MatM3 cell_gradient(const Eigen::MatrixXd& nodal, const Grid& grid, int c);
VecM cell_average(const Eigen::MatrixXd& nodal, const Grid& grid, int c);

// ---------------------------------------------------------------------------

template <class Fn>
void for_each_sample(const FieldState& state, const Grid& grid, Fn&& fn) {
  const int m = static_cast<int>(state.nu.rows());
  const int d = grid.dim();
  double coef[2][3];
  for (int a = 0; a < 3; ++a) {
    coef[0][a] = a < d ? 1.0 / grid.spacing(a) : 0.0;
    coef[1][a] = -coef[0][a];
  }
  PointState p;
  p.nu.resize(m);
  p.N = MatM3::Zero(m, 3);
  p.F.setZero();
  if (d == 2) p.F.col(2) = Vec3::UnitZ();
  for (int c = 0; c < grid.num_cells(); ++c) {
    if (!grid.cell_active(c)) continue;
    for (int k = 0; k < grid.corners(); ++k) {
      const int n0 = grid.cell_node(c, k);
      p.x = grid.node_position(n0);
      p.u = state.u.col(n0);
      p.nu = state.nu.col(n0);
      for (int a = 0; a < d; ++a) {
        const int n1 = grid.cell_node(c, k ^ (1 << a));
        const double w = coef[(k >> a) & 1][a];
        p.F.col(a) = w * (state.u.col(n1) - state.u.col(n0));
        p.N.col(a) = w * (state.nu.col(n1) - state.nu.col(n0));
      }
      fn(c, k, static_cast<const PointState&>(p));
    }
  }
}

}  // namespace cbody
