#include "cbody/balance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "cbody/error.hpp"

namespace cbody {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

Vec3 axial(const Mat3& a) {
  return Vec3(a(1, 2) - a(2, 1), a(2, 0) - a(0, 2), a(0, 1) - a(1, 0));
}

bool free_node(const FieldState& s, const Grid& grid, int n) {
  const auto un = static_cast<std::size_t>(n);
  return grid.node_active(n) && !grid.node_on_boundary(n) && !s.pinned_u[un] && !s.pinned_nu[un];
}

std::vector<int> free_nodes(const FieldState& s, const Grid& grid) {
  std::vector<int> out;
  for (int n = 0; n < grid.num_nodes(); ++n)
    if (free_node(s, grid, n)) out.push_back(n);
  return out;
}

double bump(const Vec3& x, const Vec3& c, double r) {
  const double s = (x - c).squaredNorm() / (r * r);
  return s < 1.0 ? (1.0 - s) * (1.0 - s) * (1.0 - s) : 0.0;
}

// Distance from `center` to the nearest non-free node, measured through `where`.
template <class Where>
double free_distance(const FieldState& s, const Grid& grid, const Vec3& center, Where where) {
  double r = std::numeric_limits<double>::infinity();
  for (int n = 0; n < grid.num_nodes(); ++n) {
    if (free_node(s, grid, n)) continue;
    r = std::min(r, (where(n) - center).norm());
  }
  return r;
}

double max_spacing(const Grid& grid) {
  double h = 0.0;
  for (int a = 0; a < grid.dim(); ++a) h = std::max(h, grid.spacing(a));
  return h;
}

// Random bump supports: a free node as centre and a radius drawn from
// [0.15, 0.35] x extent, shrunk to stay clear of non-free nodes. Centres are
// redrawn until the support spans at least four cells (best effort).
template <class Where>
std::vector<std::pair<Vec3, double>> draw_supports(const FieldState& s, const Grid& grid, const std::vector<int>& nodes,
                                                  int count, double extent_len, Rng& rng, Where where) {
  std::vector<std::pair<Vec3, double>> out;
  std::uniform_int_distribution<std::size_t> pick(0, nodes.size() - 1);
  std::uniform_real_distribution<double> frac(0.15, 0.35);
  const double r_min = 4.0 * max_spacing(grid);
  for (int k = 0; k < count; ++k) {
    const double target = frac(rng) * extent_len;
    Vec3 best_c = where(nodes[pick(rng)]);
    double best_r = std::min(target, free_distance(s, grid, best_c, where));
    for (int attempt = 0; attempt < 64 && best_r < std::min(r_min, target); ++attempt) {
      const Vec3 c = where(nodes[pick(rng)]);
      const double r = std::min(target, free_distance(s, grid, c, where));
      if (r > best_r) {
        best_r = r;
        best_c = c;
      }
    }
    out.emplace_back(best_c, best_r);
  }
  return out;
}

double extent(const Grid& grid) {
  double e = std::numeric_limits<double>::infinity();
  for (int a = 0; a < grid.dim(); ++a) e = std::min(e, grid.upper()(a) - grid.lower()(a));
  return e;
}

}  // namespace

Residual make_residual(double raw, double scale) {
  Residual r;
  r.raw = raw;
  r.scale = scale;
  r.ratio = scale > 0.0 ? std::abs(raw) / scale : (raw == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  return r;
}

double max_ratio(const std::vector<Residual>& rs) {
  double m = 0.0;
  for (const auto& r : rs) m = std::max(m, r.ratio);
  return m;
}

BalanceFields assemble_actions(const EnergyDensity& density, const FieldState& state, const Grid& grid) {
  BalanceFields bf;
  bf.samples = corner_samples(state, grid);
  const int m = static_cast<int>(state.nu.rows());
  const auto nc = bf.samples.points.size();
  bf.P.assign(nc, Mat3::Zero());
  bf.S.assign(nc, MatM3::Zero(m, 3));
  bf.S_response.assign(nc, MatM3::Zero(m, 3));
  bf.zeta.assign(nc, VecM::Zero(m));
  bf.zeta_embedded.assign(nc, VecM::Zero(m));
  bf.z.assign(nc, VecM::Zero(m));
  bf.beta.assign(nc, VecM::Zero(m));
  bf.b.assign(nc, Vec3::Zero());
  bf.e_val.assign(nc, 0.0);
  bf.de_dx.assign(nc, Vec3::Zero());
  const Manifold& man = *state.manifold;
  for (int i = 0; i < bf.samples.size(); ++i) {
    if (!grid.cell_active(bf.samples.cell(i))) continue;
    const auto uc = static_cast<std::size_t>(i);
    const PointState& p = bf.samples.points[uc];
    const DensityDerivatives d = density.derivatives(p);
    VecM base = p.nu;
    try {
      base = man.project(p.nu);
    } catch (const Error&) {
    }
    const VecM ext = density.d_nu_external(p);
    bf.P[uc] = d.d_F;
    bf.S[uc] = d.d_N;
    {
      constexpr double t = 1e-3;
      PointState q = p;
      q.N = (1.0 + t) * p.N;
      const MatM3 plus = density.derivatives(q).d_N;
      q.N = (1.0 - t) * p.N;
      bf.S_response[uc] = (plus - density.derivatives(q).d_N) / (2.0 * t);
    }
    bf.zeta_embedded[uc] = d.d_nu;
    bf.zeta[uc] = man.tangent_project(base, d.d_nu);
    bf.z[uc] = man.tangent_project(base, VecM(d.d_nu - ext));
    bf.beta[uc] = man.tangent_project(base, VecM(-ext));
    bf.b[uc] = -d.d_u;
    bf.e_val[uc] = d.value;
    bf.de_dx[uc] = d.d_x;
  }
  return bf;
}

std::vector<Residual> weak_el_residual(const BalanceFields& bf, const std::vector<NodalTest>& tests,
                                       const FieldState& state, const Grid& grid) {
  std::vector<Residual> out;
  const Manifold& man = *state.manifold;
  for (const NodalTest& t : tests) {
    if (t.h.cols() != grid.num_nodes() || t.upsilon.cols() != grid.num_nodes() || t.upsilon.rows() != state.nu.rows()) {
      throw Error(ErrorCode::SizeMismatch, "test field does not match grid");
    }
    for (int n = 0; n < grid.num_nodes(); ++n) {
      const auto un = static_cast<std::size_t>(n);
      const VecM v = t.upsilon.col(n);
      if ((man.tangent_project(state.nu.col(n), v) - v).norm() > 1e-10 * (1.0 + v.norm())) {
        throw Error(ErrorCode::NonTangentTest, "test upsilon is not tangent at node " + std::to_string(n));
      }
      if ((state.pinned_u[un] && !t.h.col(n).isZero(0.0)) || (state.pinned_nu[un] && !v.isZero(0.0))) {
        throw Error(ErrorCode::InvalidParameter, "test field does not vanish on Dirichlet nodes");
      }
    }
    const Eigen::MatrixXd th = t.h;
    double raw = 0.0, scale = 0.0;
    for (int i = 0; i < bf.samples.size(); ++i) {
      const int c = bf.samples.cell(i);
      if (!grid.cell_active(c)) continue;
      const int k = bf.samples.corner(i);
      const auto uc = static_cast<std::size_t>(i);
      const int n0 = grid.cell_node(c, k);
      const MatM3 dh = corner_gradient(th, grid, c, k);
      const MatM3 du = corner_gradient(t.upsilon, grid, c, k);
      const Vec3 h = t.h.col(n0);
      const VecM u = t.upsilon.col(n0);
      const double a = -bf.b[uc].dot(h);
      const double p = (bf.P[uc].array() * dh.array()).sum();
      const double z = bf.zeta_embedded[uc].dot(u);
      const double s = (bf.S[uc].array() * du.array()).sum();
      raw += a + p + z + s;
      scale += std::abs(a) + std::abs(p) + std::abs(z) + std::abs(s);
    }
    const double v = bf.samples.weight;
    out.push_back(make_residual(raw * v, scale * v));
  }
  return out;
}

std::vector<NodalTest> random_nodal_tests(const FieldState& state, const Grid& grid, int count, std::uint64_t seed) {
  std::vector<NodalTest> out;
  const std::vector<int> nodes = free_nodes(state, grid);
  if (nodes.empty() || count <= 0) return out;
  Rng rng(seed);
  std::normal_distribution<double> n01(0.0, 1.0);
  const int m = static_cast<int>(state.nu.rows());
  const Manifold& man = *state.manifold;
  const auto supports = draw_supports(state, grid, nodes, count, extent(grid), rng,
                                      [&](int n) { return grid.node_position(n); });
  for (const auto& [c, r] : supports) {
    Vec3 ah(n01(rng), n01(rng), grid.dim() == 3 ? n01(rng) : 0.0);
    VecM av(m);
    for (int i = 0; i < m; ++i) av(i) = n01(rng);
    NodalTest t{Eigen::Matrix3Xd::Zero(3, grid.num_nodes()), Eigen::MatrixXd::Zero(m, grid.num_nodes())};
    for (int n = 0; n < grid.num_nodes(); ++n) {
      if (!free_node(state, grid, n)) continue;
      const double w = bump(grid.node_position(n), c, r);
      if (w == 0.0) continue;
      t.h.col(n) = w * ah;
      t.upsilon.col(n) = man.tangent_project(state.nu.col(n), VecM(w * av));
    }
    out.push_back(std::move(t));
  }
  return out;
}

namespace {

// (1 / V_n) sum over the samples touching n of the magnitudes of the terms
// that sample_divergence (T) and sample_average_adjoint (v) add into n.
// T_extra, when given, is added to |T| sample-wise.
Eigen::VectorXd contribution_magnitude(const std::vector<MatM3>& T, const std::vector<VecM>& v,
                                       const SampleField& samples, const Grid& grid,
                                       const std::vector<MatM3>* T_extra = nullptr) {
  Eigen::VectorXd mag = Eigen::VectorXd::Zero(grid.num_nodes());
  for (int i = 0; i < samples.size(); ++i) {
    const int c = samples.cell(i);
    if (!grid.cell_active(c)) continue;
    const int k = samples.corner(i);
    const auto ui = static_cast<std::size_t>(i);
    const int n0 = grid.cell_node(c, k);
    mag(n0) += samples.weight * v[ui].norm();
    for (int a = 0; a < grid.dim(); ++a) {
      double tn = T[ui].col(a).norm();
      if (T_extra) tn += (*T_extra)[ui].col(a).norm();
      const double t = samples.weight * std::abs(corner_coefficient(grid, k, a)) * tn;
      mag(n0) += t;
      mag(grid.cell_node(c, k ^ (1 << a))) += t;
    }
  }
  for (int n = 0; n < grid.num_nodes(); ++n) {
    const double vn = grid.node_volume(n);
    if (vn > 0.0) mag(n) /= vn;
  }
  return mag;
}

}  // namespace

StrongResiduals strong_residuals(const BalanceFields& bf, const FieldState& state, const Grid& grid) {
  StrongResiduals r;
  const std::vector<MatM3> P(bf.P.begin(), bf.P.end());
  const std::vector<VecM> b(bf.b.begin(), bf.b.end());
  const Eigen::MatrixXd divP = sample_divergence(P, bf.samples, grid);
  const Eigen::MatrixXd bb = sample_average_adjoint(b, bf.samples, grid);
  const Eigen::MatrixXd divS = sample_divergence(bf.S, bf.samples, grid);
  const Eigen::MatrixXd zz = sample_average_adjoint(bf.zeta_embedded, bf.samples, grid);
  const Eigen::VectorXd c_mag = contribution_magnitude(P, b, bf.samples, grid);
  const Eigen::VectorXd k_mag = contribution_magnitude(bf.S, bf.zeta_embedded, bf.samples, grid, &bf.S_response);
  r.cauchy = divP + bb;
  r.capriz = Eigen::MatrixXd::Zero(divS.rows(), divS.cols());
  r.interior.assign(static_cast<std::size_t>(grid.num_nodes()), 0);
  double c_sup = 0.0, c_l2 = 0.0, c_scale_sup = 0.0, c_scale_l2 = 0.0;
  double k_sup = 0.0, k_l2 = 0.0, k_scale_sup = 0.0, k_scale_l2 = 0.0;
  const Manifold& man = *state.manifold;
  for (int n = 0; n < grid.num_nodes(); ++n) {
    if (!free_node(state, grid, n)) continue;
    r.interior[static_cast<std::size_t>(n)] = 1;
    const VecM nu = state.nu.col(n);
    const VecM cap = man.tangent_project(nu, VecM(divS.col(n) - zz.col(n)));
    r.capriz.col(n) = cap;
    const double vn = grid.node_volume(n);
    const double cn = r.cauchy.col(n).norm();
    const double kn = cap.norm();
    c_sup = std::max(c_sup, cn);
    c_scale_sup = std::max(c_scale_sup, c_mag(n));
    c_l2 += vn * cn * cn;
    c_scale_l2 += vn * c_mag(n) * c_mag(n);
    k_sup = std::max(k_sup, kn);
    k_scale_sup = std::max(k_scale_sup, k_mag(n));
    k_l2 += vn * kn * kn;
    k_scale_l2 += vn * k_mag(n) * k_mag(n);
  }
  r.cauchy_sup = make_residual(c_sup, c_scale_sup);
  r.cauchy_l2 = make_residual(std::sqrt(c_l2), std::sqrt(c_scale_l2));
  r.capriz_sup = make_residual(k_sup, k_scale_sup);
  r.capriz_l2 = make_residual(std::sqrt(k_l2), std::sqrt(k_scale_l2));
  return r;
}

RotationalResidual rotational_balance(const BalanceFields& bf, const Manifold& manifold, const Grid& grid) {
  if (!manifold.rotation_generator_defined()) {
    throw Error(ErrorCode::GeneratorUnavailable, manifold.name() + " declares no SO(3) action");
  }
  RotationalResidual out;
  out.r.assign(bf.samples.points.size(), Vec3::Zero());
  double raw = 0.0, scale = 0.0;
  for (int i = 0; i < bf.samples.size(); ++i) {
    if (!grid.cell_active(bf.samples.cell(i))) continue;
    const auto uc = static_cast<std::size_t>(i);
    const PointState& p = bf.samples.points[uc];
    const Mat3& F = p.F;
    const MatM3& N = p.N;
    const MatM3 a = manifold.rotation_action(p.nu);
    Vec3 lhs = axial(bf.P[uc] * F.transpose());
    Vec3 gen = a.transpose() * bf.zeta_embedded[uc];
    double mag = bf.P[uc].norm() * F.norm() + bf.zeta_embedded[uc].norm() * a.norm();
    for (int j = 0; j < 3; ++j) {
      const MatM3 aj = manifold.rotation_action(N.col(j));
      gen += aj.transpose() * bf.S[uc].col(j);
      mag += bf.S[uc].col(j).norm() * aj.norm();
    }
    out.r[uc] = lhs - gen;
    raw = std::max(raw, out.r[uc].norm());
    scale = std::max(scale, mag);
  }
  out.max_cell = make_residual(raw, scale);
  return out;
}

std::vector<Mat3> eshelby(const BalanceFields& bf, const Grid& grid) {
  std::vector<Mat3> pp(bf.samples.points.size(), Mat3::Zero());
  for (int i = 0; i < bf.samples.size(); ++i) {
    if (!grid.cell_active(bf.samples.cell(i))) continue;
    const auto uc = static_cast<std::size_t>(i);
    const PointState& p = bf.samples.points[uc];
    pp[uc] = bf.e_val[uc] * Mat3::Identity() - p.F.transpose() * bf.P[uc] - p.N.transpose() * bf.S[uc];
  }
  return pp;
}

VectorTest bump_test(const Vec3& center, double radius, const Vec3& amplitude) {
  VectorTest t;
  t.phi = [=](const Vec3& x) -> Vec3 { return bump(x, center, radius) * amplitude; };
  t.dphi = [=](const Vec3& x) -> Mat3 {
    const double s = (x - center).squaredNorm() / (radius * radius);
    if (s >= 1.0) return Mat3::Zero();
    const Vec3 grad = -6.0 * (1.0 - s) * (1.0 - s) * (x - center) / (radius * radius);
    return amplitude * grad.transpose();
  };
  return t;
}

std::vector<VectorTest> random_reference_tests(const FieldState& state, const Grid& grid, int count,
                                               std::uint64_t seed) {
  std::vector<VectorTest> out;
  const std::vector<int> nodes = free_nodes(state, grid);
  if (nodes.empty() || count <= 0) return out;
  Rng rng(seed);
  std::normal_distribution<double> n01(0.0, 1.0);
  const auto supports = draw_supports(state, grid, nodes, count, extent(grid), rng,
                                      [&](int n) { return grid.node_position(n); });
  for (const auto& [c, r] : supports) {
    const Vec3 a(n01(rng), n01(rng), grid.dim() == 3 ? n01(rng) : 0.0);
    out.push_back(bump_test(c, r, a));
  }
  return out;
}

std::vector<Residual> configurational_residual(const std::vector<Mat3>& pp, const BalanceFields& bf,
                                               const std::vector<VectorTest>& tests, const Grid& grid,
                                               const LineDefect* line) {
  if (line) line->validate();
  std::vector<Residual> out;
  if (pp.size() != bf.samples.points.size()) throw Error(ErrorCode::SizeMismatch, "one Eshelby tensor per sample expected");
  const double v = bf.samples.weight;
  for (const VectorTest& t : tests) {
    double raw = 0.0, scale = 0.0;
    for (int i = 0; i < bf.samples.size(); ++i) {
      if (!grid.cell_active(bf.samples.cell(i))) continue;
      const auto uc = static_cast<std::size_t>(i);
      const Vec3 x = bf.samples.points[uc].x;
      const double a = (pp[uc].array() * t.dphi(x).array()).sum() * v;
      const double b = bf.de_dx[uc].dot(t.phi(x)) * v;
      raw += a + b;
      scale += std::abs(a) + std::abs(b);
    }
    if (line) {
      for (int s = 0; s < line->segments(); ++s) {
        const Vec3 tan = line->tangent(s);
        const Vec3 mid = 0.5 * (line->points[static_cast<std::size_t>(s)] + line->points[static_cast<std::size_t>(s) + 1]);
        const double l = kFourPi * line->multiplicity[static_cast<std::size_t>(s)] * line->length(s) *
                         tan.dot(t.dphi(mid) * tan);
        raw -= l;
        scale += std::abs(l);
      }
    }
    out.push_back(make_residual(raw, scale));
  }
  return out;
}

std::vector<Mat3> cauchy_stress(const BalanceFields& bf, const Grid& grid) {
  std::vector<Mat3> sigma(bf.samples.points.size(), Mat3::Zero());
  for (int i = 0; i < bf.samples.size(); ++i) {
    const int c = bf.samples.cell(i);
    if (!grid.cell_active(c)) continue;
    const auto uc = static_cast<std::size_t>(i);
    const Mat3& F = bf.samples.points[uc].F;
    const double j = F.determinant();
    if (!(j > 0.0)) throw Error(ErrorCode::SingularCell, "det F <= 0 in cell " + std::to_string(c));
    sigma[uc] = bf.P[uc] * F.transpose() / j;
  }
  return sigma;
}

std::vector<Residual> eulerian_residual(const BalanceFields& bf, const std::vector<VectorTest>& spatial_tests,
                                        const Grid& grid) {
  const std::vector<Mat3> sigma = cauchy_stress(bf, grid);
  std::vector<Residual> out;
  const double v = bf.samples.weight;
  for (const VectorTest& t : spatial_tests) {
    double raw = 0.0, scale = 0.0;
    for (int i = 0; i < bf.samples.size(); ++i) {
      if (!grid.cell_active(bf.samples.cell(i))) continue;
      const auto uc = static_cast<std::size_t>(i);
      const PointState& p = bf.samples.points[uc];
      const Vec3 y = p.u;
      const double j = p.F.determinant();
      const double a = (sigma[uc].array() * t.dphi(y).array()).sum() * j * v;
      const double b = -bf.b[uc].dot(t.phi(y)) * v;
      raw += a + b;
      scale += std::abs(a) + std::abs(b);
    }
    out.push_back(make_residual(raw, scale));
  }
  return out;
}

std::vector<VectorTest> random_spatial_tests(const FieldState& state, const Grid& grid, int count, std::uint64_t seed) {
  std::vector<VectorTest> out;
  const std::vector<int> nodes = free_nodes(state, grid);
  if (nodes.empty() || count <= 0) return out;
  Rng rng(seed);
  std::normal_distribution<double> n01(0.0, 1.0);
  const auto supports = draw_supports(state, grid, nodes, count, extent(grid), rng,
                                      [&](int n) { return Vec3(state.u.col(n)); });
  for (const auto& [c, r] : supports) {
    const Vec3 a(n01(rng), n01(rng), grid.dim() == 3 ? n01(rng) : 0.0);
    out.push_back(bump_test(c, r, a));
  }
  return out;
}

}  // namespace cbody
