#include "cbody/admissibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cbody/error.hpp"

namespace cbody {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

void require_sphere(const FieldState& s, const Grid& grid) {
  if (!s.manifold || s.manifold->name() != "sphere") {
    throw Error(ErrorCode::WrongManifold, "defect diagnostics need an S^2-valued descriptor");
  }
  if (grid.dim() != 3) throw Error(ErrorCode::WrongManifold, "defect diagnostics need a 3D grid");
}

}  // namespace

OrientationReport check_orientation(const FieldState& state, const Grid& grid) {
  const GradientField g = gradients(state, grid);
  OrientationReport r;
  r.min_det = std::numeric_limits<double>::infinity();
  for (int c = 0; c < grid.num_cells(); ++c) {
    if (!grid.cell_active(c)) continue;
    const double d = g.F[static_cast<std::size_t>(c)].determinant();
    r.min_det = std::min(r.min_det, d);
    if (!(d > 0.0)) ++r.violating_cells;
  }
  return r;
}

namespace {

// Kuhn subdivision of the unit cube into six tetrahedra along the 0-7 diagonal.
constexpr int kTets[6][4] = {{0, 1, 3, 7}, {0, 1, 5, 7}, {0, 2, 3, 7}, {0, 2, 6, 7}, {0, 4, 5, 7}, {0, 4, 6, 7}};
constexpr int kTris[2][3] = {{0, 1, 3}, {0, 2, 3}};

struct VoxelGrid {
  Vec3 origin;
  double voxel;
  std::array<long, 3> n{1, 1, 1};
  std::vector<std::uint8_t> hit;

  long index(long i, long j, long k) const { return i + n[0] * (j + n[1] * k); }
  Vec3 center(long i, long j, long k) const {
    return origin + voxel * Vec3(static_cast<double>(i) + 0.5, static_cast<double>(j) + 0.5, static_cast<double>(k) + 0.5);
  }
};

void raster_simplex(VoxelGrid& vg, const Vec3* p, int dim) {
  Vec3 lo = p[0], hi = p[0];
  for (int i = 1; i <= dim; ++i) {
    lo = lo.cwiseMin(p[i]);
    hi = hi.cwiseMax(p[i]);
  }
  Mat3 e = Mat3::Identity();
  for (int i = 0; i < dim; ++i) e.col(i) = p[i + 1] - p[0];
  const double det = dim == 3 ? e.determinant() : e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0);
  if (std::abs(det) < 1e-300) return;
  Mat3 inv = Mat3::Identity();
  if (dim == 3) {
    inv = e.inverse();
  } else {
    Eigen::Matrix2d e2 = e.topLeftCorner<2, 2>();
    inv.topLeftCorner<2, 2>() = e2.inverse();
  }
  std::array<long, 3> a{0, 0, 0}, b{0, 0, 0};
  for (int ax = 0; ax < dim; ++ax) {
    const auto uax = static_cast<std::size_t>(ax);
    a[uax] = std::max(0L, static_cast<long>(std::floor((lo(ax) - vg.origin(ax)) / vg.voxel - 0.5)));
    b[uax] = std::min(vg.n[uax] - 1, static_cast<long>(std::ceil((hi(ax) - vg.origin(ax)) / vg.voxel - 0.5)));
  }
  constexpr double eps = 1e-12;
  for (long k = a[2]; k <= b[2]; ++k)
    for (long j = a[1]; j <= b[1]; ++j)
      for (long i = a[0]; i <= b[0]; ++i) {
        Vec3 q = vg.center(i, j, k) - p[0];
        if (dim == 2) q(2) = 0.0;
        const Vec3 lam = inv * q;
        double sum = 0.0;
        bool inside = true;
        for (int t = 0; t < dim; ++t) {
          if (lam(t) < -eps) inside = false;
          sum += lam(t);
        }
        if (inside && sum <= 1.0 + eps) vg.hit[static_cast<std::size_t>(vg.index(i, j, k))] = 1;
      }
}

}  // namespace

CiarletNecasReport check_ciarlet_necas(const FieldState& state, const Grid& grid, double voxel, double rel_tol) {
  CiarletNecasReport r;
  const GradientField g = gradients(state, grid);
  double idet = 0.0, abs_det = 0.0;
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  for (int c = 0; c < grid.num_cells(); ++c) {
    if (!grid.cell_active(c)) continue;
    const double det = g.F[static_cast<std::size_t>(c)].determinant();
    idet += det;
    abs_det += std::abs(det);
    for (int k = 0; k < grid.corners(); ++k) {
      const Vec3 y = state.u.col(grid.cell_node(c, k));
      lo = lo.cwiseMin(y);
      hi = hi.cwiseMax(y);
    }
  }
  r.integral_det = idet * grid.cell_volume();
  // Default: half the reference spacing, scaled by the mean linear stretch so
  // contracted images keep the same number of voxels per deformed cell.
  const int active = grid.num_active_cells();
  const double stretch = active > 0 && abs_det > 0.0 ? std::pow(abs_det / active, 1.0 / grid.dim()) : 1.0;
  r.voxel = voxel > 0.0 ? voxel : 0.5 * grid.min_spacing() * std::min(1.0, stretch);
  r.tolerance = rel_tol * std::abs(r.integral_det);
  if (grid.num_active_cells() == 0) {
    r.pass = true;
    return r;
  }

  const int dim = grid.dim();
  VoxelGrid vg;
  vg.voxel = r.voxel;
  vg.origin = lo;
  for (int ax = 0; ax < dim; ++ax) {
    vg.n[static_cast<std::size_t>(ax)] = std::max(1L, static_cast<long>(std::ceil((hi(ax) - lo(ax)) / r.voxel)));
  }
  const long total = vg.n[0] * vg.n[1] * vg.n[2];
  if (total > 400'000'000L) throw Error(ErrorCode::InvalidParameter, "voxel size too small for the image");
  vg.hit.assign(static_cast<std::size_t>(total), 0);

  for (int c = 0; c < grid.num_cells(); ++c) {
    if (!grid.cell_active(c)) continue;
    Vec3 y[8];
    for (int k = 0; k < grid.corners(); ++k) y[k] = state.u.col(grid.cell_node(c, k));
    if (dim == 3) {
      for (const auto& t : kTets) {
        const Vec3 p[4] = {y[t[0]], y[t[1]], y[t[2]], y[t[3]]};
        raster_simplex(vg, p, 3);
      }
    } else {
      for (const auto& t : kTris) {
        const Vec3 p[3] = {y[t[0]], y[t[1]], y[t[2]]};
        raster_simplex(vg, p, 2);
      }
    }
  }
  const long covered = static_cast<long>(std::count(vg.hit.begin(), vg.hit.end(), std::uint8_t{1}));
  r.image_volume = static_cast<double>(covered) * std::pow(r.voxel, dim);
  r.slack = r.image_volume - r.integral_det;
  r.pass = r.slack >= -r.tolerance;
  return r;
}

AdmissibilityReport check_admissibility(const FieldState& state, const Grid& grid, double voxel, double rel_tol) {
  const OrientationReport o = check_orientation(state, grid);
  const CiarletNecasReport cn = check_ciarlet_necas(state, grid, voxel, rel_tol);
  AdmissibilityReport r;
  r.min_det = o.min_det;
  r.violating_cells = o.violating_cells;
  r.ciarlet_necas_slack = cn.slack;
  r.tolerance = cn.tolerance;
  r.voxel = cn.voxel;
  r.injectivity_pass = o.min_det > 0.0 && o.violating_cells == 0 && cn.pass;
  return r;
}

std::vector<Vec3> d_field(const FieldState& state, const Grid& grid) {
  require_sphere(state, grid);
  const GradientField g = gradients(state, grid);
  std::vector<Vec3> out(static_cast<std::size_t>(grid.num_cells()), Vec3::Zero());
  for (int c = 0; c < grid.num_cells(); ++c) {
    if (!grid.cell_active(c)) continue;
    const auto uc = static_cast<std::size_t>(c);
    const double len = g.nu[uc].norm();
    if (len < 1e-300) continue;
    const Vec3 nu = g.nu[uc] / len;
    Mat3 n;
    for (int j = 0; j < 3; ++j) {
      const Vec3 col = g.N[uc].col(j);
      n.col(j) = col - nu.dot(col) * nu;
    }
    for (int i = 0; i < 3; ++i) {
      const int j = (i + 1) % 3, k = (i + 2) % 3;
      out[uc](i) = nu.dot(n.col(j).cross(n.col(k)));
    }
  }
  return out;
}

double solid_angle(const Vec3& a, const Vec3& b, const Vec3& c) {
  const double num = a.dot(b.cross(c));
  const double den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
  return 2.0 * std::atan2(num, den);
}

namespace {

// Flux through the face with lowest node (i,j,k) normal to `axis`, oriented along +e_axis.
double face_flux(const FieldState& s, const Grid& grid, int axis, int i, int j, int k) {
  const int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
  std::array<int, 3> base{i, j, k};
  auto node = [&](int d1, int d2) {
    std::array<int, 3> p = base;
    p[static_cast<std::size_t>(a1)] += d1;
    p[static_cast<std::size_t>(a2)] += d2;
    return Vec3(s.nu.col(grid.node_index(p[0], p[1], p[2])));
  };
  const Vec3 pa = node(0, 0), pb = node(1, 0), pc = node(1, 1), pd = node(0, 1);
  return solid_angle(pa, pb, pc) + solid_angle(pa, pc, pd);
}

double cell_flux(const FieldState& s, const Grid& grid, int c) {
  const auto ijk = grid.cell_ijk(c);
  double f = 0.0;
  for (int ax = 0; ax < 3; ++ax) {
    std::array<int, 3> up = ijk;
    up[static_cast<std::size_t>(ax)] += 1;
    f += face_flux(s, grid, ax, up[0], up[1], up[2]) - face_flux(s, grid, ax, ijk[0], ijk[1], ijk[2]);
  }
  return f;
}

}  // namespace

DefectReport defect_charges(const FieldState& state, const Grid& grid, int box_size, double threshold) {
  require_sphere(state, grid);
  if (box_size < 1) throw Error(ErrorCode::InvalidParameter, "box_size must be >= 1");
  DefectReport r;
  r.d_field = d_field(state, grid);
  std::vector<double> flux(static_cast<std::size_t>(grid.num_cells()), 0.0);
  for (int c = 0; c < grid.num_cells(); ++c) {
    if (!grid.cell_active(c)) continue;
    flux[static_cast<std::size_t>(c)] = cell_flux(state, grid, c);
    r.total_flux += flux[static_cast<std::size_t>(c)];
  }
  const int bx = (grid.cells(0) + box_size - 1) / box_size;
  const int by = (grid.cells(1) + box_size - 1) / box_size;
  const int bz = (grid.cells(2) + box_size - 1) / box_size;
  for (int K = 0; K < bz; ++K)
    for (int J = 0; J < by; ++J)
      for (int I = 0; I < bx; ++I) {
        double f = 0.0;
        int owner = -1;
        double owner_mag = -1.0;
        for (int k = K * box_size; k < std::min((K + 1) * box_size, grid.cells(2)); ++k)
          for (int j = J * box_size; j < std::min((J + 1) * box_size, grid.cells(1)); ++j)
            for (int i = I * box_size; i < std::min((I + 1) * box_size, grid.cells(0)); ++i) {
              const int c = grid.cell_index(i, j, k);
              if (!grid.cell_active(c)) continue;
              const double fc = flux[static_cast<std::size_t>(c)];
              f += fc;
              if (std::abs(fc) > owner_mag) {
                owner_mag = std::abs(fc);
                owner = c;
              }
            }
        const double q = f / kFourPi;
        if (owner >= 0 && std::abs(q) >= threshold) {
          const int charge = static_cast<int>(std::lround(q));
          r.charges.push_back(Charge{owner, charge, q});
          r.total_charge += charge;
        }
      }
  r.tolerance = 1e-8 * (1.0 + std::abs(r.total_flux));
  return r;
}

DegreeResult degree_on_surface(const FieldState& state, const Grid& grid, const BoxSurface& box) {
  require_sphere(state, grid);
  for (int a = 0; a < 3; ++a) {
    const auto ua = static_cast<std::size_t>(a);
    if (box.lo[ua] < 0 || box.hi[ua] >= grid.nodes(a) || box.lo[ua] >= box.hi[ua]) {
      throw Error(ErrorCode::SurfaceOutsideDomain, "box surface outside the grid");
    }
  }
  for (int k = box.lo[2]; k < box.hi[2]; ++k)
    for (int j = box.lo[1]; j < box.hi[1]; ++j)
      for (int i = box.lo[0]; i < box.hi[0]; ++i) {
        if (!grid.cell_active(grid.cell_index(i, j, k))) {
          throw Error(ErrorCode::SurfaceOutsideDomain, "box surface leaves the active domain");
        }
      }
  double f = 0.0;
  for (int ax = 0; ax < 3; ++ax) {
    const int a1 = (ax + 1) % 3, a2 = (ax + 2) % 3;
    const auto uax = static_cast<std::size_t>(ax);
    for (int side = 0; side < 2; ++side) {
      const double sign = side == 0 ? -1.0 : 1.0;
      for (int p = box.lo[static_cast<std::size_t>(a1)]; p < box.hi[static_cast<std::size_t>(a1)]; ++p)
        for (int q = box.lo[static_cast<std::size_t>(a2)]; q < box.hi[static_cast<std::size_t>(a2)]; ++q) {
          std::array<int, 3> n{};
          n[uax] = side == 0 ? box.lo[uax] : box.hi[uax];
          n[static_cast<std::size_t>(a1)] = p;
          n[static_cast<std::size_t>(a2)] = q;
          f += sign * face_flux(state, grid, ax, n[0], n[1], n[2]);
        }
    }
  }
  DegreeResult d;
  d.raw = f / kFourPi;
  d.degree = static_cast<int>(std::lround(d.raw));
  return d;
}

}  // namespace cbody
