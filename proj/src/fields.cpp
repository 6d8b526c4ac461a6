#include "cbody/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cbody/error.hpp"

namespace cbody {

Grid::Grid(int dim, const Vec3& lower, const Vec3& upper, std::array<int, 3> nodes_per_axis)
    : dim_(dim), lower_(lower), upper_(upper), nodes_(nodes_per_axis) {
  if (dim != 2 && dim != 3) throw Error(ErrorCode::InvalidParameter, "grid dimension must be 2 or 3");
  cell_volume_ = 1.0;
  for (int a = 0; a < 3; ++a) {
    const auto ua = static_cast<std::size_t>(a);
    if (a >= dim) {
      nodes_[ua] = 1;
      h_[ua] = 1.0;
      upper_(a) = lower_(a);
      continue;
    }
    if (nodes_[ua] < 2) throw Error(ErrorCode::InvalidParameter, "grid needs at least two nodes per axis");
    if (!(upper(a) > lower(a))) throw Error(ErrorCode::InvalidParameter, "grid box is empty");
    h_[ua] = (upper(a) - lower(a)) / (nodes_[ua] - 1);
    cell_volume_ *= h_[ua];
  }
  const double share = 1.0 / (1 << (dim - 1));
  for (int corner = 0; corner < corners(); ++corner) {
    for (int a = 0; a < 3; ++a) {
      const auto ua = static_cast<std::size_t>(a);
      weights_[static_cast<std::size_t>(corner)][ua] =
          a < dim ? ((corner >> a) & 1 ? 1.0 : -1.0) * share / h_[ua] : 0.0;
    }
  }
  cell_nodes_.resize(static_cast<std::size_t>(num_cells()));
  for (int c = 0; c < num_cells(); ++c) {
    const auto ijk = cell_ijk(c);
    auto& nodes = cell_nodes_[static_cast<std::size_t>(c)];
    nodes.fill(-1);
    for (int k = 0; k < corners(); ++k) {
      nodes[static_cast<std::size_t>(k)] =
          node_index(ijk[0] + (k & 1), ijk[1] + ((k >> 1) & 1), ijk[2] + (dim == 3 ? (k >> 2) & 1 : 0));
    }
  }
  active_.assign(static_cast<std::size_t>(num_cells()), 1);
  rebuild_node_counts();
}

Grid Grid::cube(int dim, int cells, const Vec3& lower, const Vec3& upper) {
  return Grid(dim, lower, upper, {cells + 1, cells + 1, cells + 1});
}

double Grid::min_spacing() const {
  double h = h_[0];
  for (int a = 1; a < dim_; ++a) h = std::min(h, h_[static_cast<std::size_t>(a)]);
  return h;
}

std::array<int, 3> Grid::node_ijk(int n) const {
  const int i = n % nodes_[0];
  const int rest = n / nodes_[0];
  return {i, rest % nodes_[1], rest / nodes_[1]};
}

Vec3 Grid::node_position(int n) const {
  const auto ijk = node_ijk(n);
  Vec3 x = lower_;
  for (int a = 0; a < dim_; ++a) x(a) += ijk[static_cast<std::size_t>(a)] * h_[static_cast<std::size_t>(a)];
  return x;
}

std::array<int, 3> Grid::cell_ijk(int c) const {
  const int i = c % cells(0);
  const int rest = c / cells(0);
  return {i, rest % cells(1), rest / cells(1)};
}

Vec3 Grid::cell_center(int c) const {
  const auto ijk = cell_ijk(c);
  Vec3 x = lower_;
  for (int a = 0; a < dim_; ++a) x(a) += (ijk[static_cast<std::size_t>(a)] + 0.5) * h_[static_cast<std::size_t>(a)];
  return x;
}


void Grid::set_active(std::vector<std::uint8_t> cell_active) {
  if (static_cast<int>(cell_active.size()) != num_cells()) throw Error(ErrorCode::SizeMismatch, "mask size != cell count");
  active_ = std::move(cell_active);
  rebuild_node_counts();
}

void Grid::mask_cells(const std::function<bool(const Vec3&)>& keep) {
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(num_cells()));
  for (int c = 0; c < num_cells(); ++c) mask[static_cast<std::size_t>(c)] = keep(cell_center(c)) ? 1 : 0;
  set_active(std::move(mask));
}

int Grid::num_active_cells() const {
  return static_cast<int>(std::count(active_.begin(), active_.end(), std::uint8_t{1}));
}

void Grid::rebuild_node_counts() {
  node_active_cells_.assign(static_cast<std::size_t>(num_nodes()), 0);
  for (int c = 0; c < num_cells(); ++c) {
    if (!cell_active(c)) continue;
    for (int k = 0; k < corners(); ++k) ++node_active_cells_[static_cast<std::size_t>(cell_node(c, k))];
  }
}

bool Grid::node_on_boundary(int n) const {
  if (!node_active(n)) return false;
  // A node of a box-interior position has exactly 2^dim neighbouring cells;
  // it is on the boundary of the active set unless all of them are active.
  return node_active_cells_[static_cast<std::size_t>(n)] < corners();
}

// ---------------------------------------------------------------------------

FieldState FieldState::identity(const Grid& grid, ManifoldSpec manifold, const VecM& nu0) {
  if (!manifold) throw Error(ErrorCode::InvalidParameter, "field state needs a manifold");
  if (nu0.size() != manifold->embed_dim()) throw Error(ErrorCode::SizeMismatch, "initial nu has wrong size");
  FieldState s;
  const int nn = grid.num_nodes();
  s.u.resize(3, nn);
  for (int n = 0; n < nn; ++n) s.u.col(n) = grid.node_position(n);
  const VecM p = manifold->project(nu0);
  s.nu.resize(manifold->embed_dim(), nn);
  for (int n = 0; n < nn; ++n) s.nu.col(n) = p;
  s.pinned_u.assign(static_cast<std::size_t>(nn), 0);
  s.pinned_nu.assign(static_cast<std::size_t>(nn), 0);
  s.manifold = std::move(manifold);
  return s;
}

double FieldState::max_constraint_violation(const Grid& grid) const {
  double v = 0.0;
  for (int n = 0; n < num_nodes(); ++n) {
    if (grid.node_active(n)) v = std::max(v, manifold->constraint_violation(nu.col(n)));
  }
  return v;
}

namespace {

void check_sizes(const FieldState& state, const Grid& grid) {
  if (!state.manifold) throw Error(ErrorCode::InvalidParameter, "field state has no manifold");
  if (state.u.cols() != grid.num_nodes() || state.nu.cols() != grid.num_nodes() ||
      state.nu.rows() != state.manifold->embed_dim()) {
    throw Error(ErrorCode::SizeMismatch, "field state does not match grid");
  }
}

}  // namespace

MatM3 cell_gradient(const Eigen::MatrixXd& nodal, const Grid& grid, int c) {
  MatM3 g = MatM3::Zero(nodal.rows(), 3);
  for (int k = 0; k < grid.corners(); ++k) {
    const int n = grid.cell_node(c, k);
    for (int a = 0; a < grid.dim(); ++a) g.col(a) += grid.gradient_weight(k, a) * nodal.col(n);
  }
  return g;
}

VecM cell_average(const Eigen::MatrixXd& nodal, const Grid& grid, int c) {
  VecM v = VecM::Zero(nodal.rows());
  for (int k = 0; k < grid.corners(); ++k) v += nodal.col(grid.cell_node(c, k));
  return v / grid.corners();
}

GradientField gradients(const FieldState& state, const Grid& grid) {
  check_sizes(state, grid);
  const int nc = grid.num_cells();
  const int m = state.manifold->embed_dim();
  GradientField g;
  g.F.assign(static_cast<std::size_t>(nc), Mat3::Identity());
  g.N.assign(static_cast<std::size_t>(nc), MatM3::Zero(m, 3));
  g.u.assign(static_cast<std::size_t>(nc), Vec3::Zero());
  g.nu.assign(static_cast<std::size_t>(nc), VecM::Zero(m));
  g.x.resize(static_cast<std::size_t>(nc));
  const int d = grid.dim();
  const double inv = 1.0 / grid.corners();
  for (int c = 0; c < nc; ++c) {
    const auto uc = static_cast<std::size_t>(c);
    g.x[uc] = grid.cell_center(c);
    Mat3 F = Mat3::Zero();
    MatM3 N = MatM3::Zero(m, 3);
    Vec3 u = Vec3::Zero();
    VecM nu = VecM::Zero(m);
    for (int k = 0; k < grid.corners(); ++k) {
      const int n = grid.cell_node(c, k);
      const auto ucol = state.u.col(n);
      const auto ncol = state.nu.col(n);
      u += ucol;
      nu += ncol;
      for (int a = 0; a < d; ++a) {
        const double w = grid.gradient_weight(k, a);
        F.col(a) += w * ucol;
        N.col(a) += w * ncol;
      }
    }
    if (d == 2) F.col(2) = Vec3::UnitZ();
    g.F[uc] = F;
    g.N[uc] = N;
    g.u[uc] = u * inv;
    g.nu[uc] = nu * inv;
  }
  return g;
}

double integrate_cells(const std::vector<double>& values, const Grid& grid) {
  if (static_cast<int>(values.size()) != grid.num_cells()) throw Error(ErrorCode::SizeMismatch, "one value per cell expected");
  double s = 0.0;
  for (int c = 0; c < grid.num_cells(); ++c) {
    if (grid.cell_active(c)) s += values[static_cast<std::size_t>(c)];
  }
  return s * grid.cell_volume();
}

FieldState apply_dirichlet(const FieldState& state, const Grid& grid, FieldKind which, const NodeRegion& region,
                           const NodeValue& value) {
  check_sizes(state, grid);
  FieldState out = state;
  for (int n = 0; n < grid.num_nodes(); ++n) {
    if (!grid.node_active(n)) continue;
    const NodeInfo info{n, grid.node_position(n), grid.node_ijk(n), grid.node_on_boundary(n)};
    if (!region(info)) continue;
    if (!info.on_boundary) {
      throw Error(ErrorCode::InteriorNodeSelected, "Dirichlet region selects interior node " + std::to_string(n));
    }
    const VecM v = value(info.x);
    if (which == FieldKind::U) {
      if (v.size() != 3) throw Error(ErrorCode::SizeMismatch, "displacement data must have 3 components");
      out.u.col(n) = v;
      out.pinned_u[static_cast<std::size_t>(n)] = 1;
    } else {
      if (v.size() != out.nu.rows()) throw Error(ErrorCode::SizeMismatch, "descriptor data has wrong size");
      out.nu.col(n) = out.manifold->project(v);
      out.pinned_nu[static_cast<std::size_t>(n)] = 1;
    }
  }
  return out;
}

NodeRegion whole_boundary() {
  return [](const NodeInfo& i) { return i.on_boundary; };
}

NodeRegion box_face(const Grid& grid, int axis, int side) {
  if (axis < 0 || axis >= grid.dim()) throw Error(ErrorCode::InvalidParameter, "face axis out of range");
  const int target = side == 0 ? 0 : grid.nodes(axis) - 1;
  return [axis, target](const NodeInfo& i) {
    return i.on_boundary && i.ijk[static_cast<std::size_t>(axis)] == target;
  };
}

namespace {

template <class M>
Eigen::MatrixXd divergence_impl(const std::vector<M>& T, const Grid& grid, int rows) {
  if (static_cast<int>(T.size()) != grid.num_cells()) throw Error(ErrorCode::SizeMismatch, "one tensor per cell expected");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows, grid.num_nodes());
  const double vc = grid.cell_volume();
  for (int c = 0; c < grid.num_cells(); ++c) {
    if (!grid.cell_active(c)) continue;
    const auto& t = T[static_cast<std::size_t>(c)];
    for (int k = 0; k < grid.corners(); ++k) {
      const int n = grid.cell_node(c, k);
      for (int a = 0; a < grid.dim(); ++a) out.col(n) -= vc * grid.gradient_weight(k, a) * t.col(a);
    }
  }
  for (int n = 0; n < grid.num_nodes(); ++n) {
    const double vn = grid.node_volume(n);
    if (vn > 0.0) out.col(n) /= vn;
  }
  return out;
}

template <class V>
Eigen::MatrixXd average_adjoint_impl(const std::vector<V>& v, const Grid& grid, int rows) {
  if (static_cast<int>(v.size()) != grid.num_cells()) throw Error(ErrorCode::SizeMismatch, "one vector per cell expected");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows, grid.num_nodes());
  const double w = grid.cell_volume() / grid.corners();
  for (int c = 0; c < grid.num_cells(); ++c) {
    if (!grid.cell_active(c)) continue;
    for (int k = 0; k < grid.corners(); ++k) out.col(grid.cell_node(c, k)) += w * v[static_cast<std::size_t>(c)];
  }
  for (int n = 0; n < grid.num_nodes(); ++n) {
    const double vn = grid.node_volume(n);
    if (vn > 0.0) out.col(n) /= vn;
  }
  return out;
}

}  // namespace

Eigen::MatrixXd divergence(const std::vector<MatM3>& T, const Grid& grid) {
  return divergence_impl(T, grid, T.empty() ? 0 : static_cast<int>(T.front().rows()));
}

Eigen::MatrixXd divergence(const std::vector<Mat3>& T, const Grid& grid) { return divergence_impl(T, grid, 3); }

Eigen::MatrixXd average_adjoint(const std::vector<VecM>& v, const Grid& grid) {
  return average_adjoint_impl(v, grid, v.empty() ? 0 : static_cast<int>(v.front().size()));
}

Eigen::MatrixXd average_adjoint(const std::vector<Vec3>& v, const Grid& grid) {
  return average_adjoint_impl(v, grid, 3);
}

// ---------------------------------------------------------------------------

MatM3 corner_gradient(const Eigen::MatrixXd& nodal, const Grid& grid, int c, int k) {
  MatM3 g = MatM3::Zero(nodal.rows(), 3);
  const int n0 = grid.cell_node(c, k);
  for (int a = 0; a < grid.dim(); ++a) {
    g.col(a) = corner_coefficient(grid, k, a) * (nodal.col(grid.cell_node(c, k ^ (1 << a))) - nodal.col(n0));
  }
  return g;
}

double min_cell_det(const Eigen::Matrix3Xd& u, const Grid& grid) {
  double m = std::numeric_limits<double>::infinity();
  for (int c = 0; c < grid.num_cells(); ++c) {
    if (!grid.cell_active(c)) continue;
    Mat3 F = Mat3::Zero();
    for (int k = 0; k < grid.corners(); ++k) {
      const auto x = u.col(grid.cell_node(c, k));
      for (int a = 0; a < grid.dim(); ++a) F.col(a) += grid.gradient_weight(k, a) * x;
    }
    if (grid.dim() == 2) F.col(2) = Vec3::UnitZ();
    m = std::min(m, F.determinant());
  }
  return m;
}

SampleField corner_samples(const FieldState& state, const Grid& grid) {
  check_sizes(state, grid);
  SampleField sf;
  sf.corners = grid.corners();
  sf.weight = grid.cell_volume() / grid.corners();
  const int m = state.manifold->embed_dim();
  PointState blank;
  blank.nu = VecM::Zero(m);
  blank.N = MatM3::Zero(m, 3);
  sf.points.assign(static_cast<std::size_t>(grid.num_cells() * sf.corners), blank);
  for_each_sample(state, grid, [&](int c, int k, const PointState& p) {
    sf.points[static_cast<std::size_t>(c * sf.corners + k)] = p;
  });
  return sf;
}

void scatter_corner_gradient(Eigen::MatrixXd& acc, const MatM3& T, const Grid& grid, int c, int k, double w) {
  const int n0 = grid.cell_node(c, k);
  for (int a = 0; a < grid.dim(); ++a) {
    const double coef = w * corner_coefficient(grid, k, a);
    acc.col(grid.cell_node(c, k ^ (1 << a))) += coef * T.col(a);
    acc.col(n0) -= coef * T.col(a);
  }
}

Eigen::MatrixXd sample_divergence(const std::vector<MatM3>& T, const SampleField& samples, const Grid& grid) {
  if (static_cast<int>(T.size()) != samples.size()) throw Error(ErrorCode::SizeMismatch, "one tensor per sample expected");
  const int rows = T.empty() ? 0 : static_cast<int>(T.front().rows());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows, grid.num_nodes());
  for (int s = 0; s < samples.size(); ++s) {
    const int c = samples.cell(s);
    if (!grid.cell_active(c)) continue;
    scatter_corner_gradient(out, T[static_cast<std::size_t>(s)], grid, c, samples.corner(s), -samples.weight);
  }
  for (int n = 0; n < grid.num_nodes(); ++n) {
    const double vn = grid.node_volume(n);
    if (vn > 0.0) out.col(n) /= vn;
  }
  return out;
}

Eigen::MatrixXd sample_average_adjoint(const std::vector<VecM>& v, const SampleField& samples, const Grid& grid) {
  if (static_cast<int>(v.size()) != samples.size()) throw Error(ErrorCode::SizeMismatch, "one vector per sample expected");
  const int rows = v.empty() ? 0 : static_cast<int>(v.front().size());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows, grid.num_nodes());
  for (int s = 0; s < samples.size(); ++s) {
    const int c = samples.cell(s);
    if (!grid.cell_active(c)) continue;
    out.col(grid.cell_node(c, samples.corner(s))) += samples.weight * v[static_cast<std::size_t>(s)];
  }
  for (int n = 0; n < grid.num_nodes(); ++n) {
    const double vn = grid.node_volume(n);
    if (vn > 0.0) out.col(n) /= vn;
  }
  return out;
}

}  // namespace cbody
