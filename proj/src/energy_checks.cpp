#include "cbody/energy_checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cbody/error.hpp"
#include "cbody/minors.hpp"

namespace cbody {

namespace {

Mat3 random_rotation(Rng& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  Eigen::Quaterniond q(n01(rng), n01(rng), n01(rng), n01(rng));
  return q.normalized().toRotationMatrix();
}

Mat3 random_gaussian3(Rng& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  Mat3 g;
  for (int i = 0; i < 9; ++i) g(i) = n01(rng);
  return g;
}

}  // namespace

StateSampler make_state_sampler(ManifoldSpec manifold, SamplerOptions opts) {
  if (!manifold) throw Error(ErrorCode::InvalidParameter, "sampler needs a manifold");
  return StateSampler{[manifold, opts](Rng& rng) {
    std::normal_distribution<double> n01(0.0, 1.0);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const int m = manifold->embed_dim();
    PointState s;
    for (int i = 0; i < 3; ++i) s.x(i) = unit(rng);
    for (int i = 0; i < 3; ++i) s.u(i) = s.x(i) + 0.2 * n01(rng);
    if (opts.log_stretch > 0.0) {
      Vec3 d;
      for (int i = 0; i < 3; ++i) d(i) = std::exp(opts.log_stretch * n01(rng));
      s.F = random_rotation(rng) * d.asDiagonal() * random_rotation(rng);
    } else {
      do {
        s.F = Mat3::Identity() + opts.f_spread * random_gaussian3(rng);
      } while (s.F.determinant() < opts.min_det);
    }
    VecM p(m);
    for (int i = 0; i < m; ++i) p(i) = 0.5 * n01(rng);
    if (manifold->name() == "sym_positive") {
      for (int i = 0; i < 3; ++i) p(4 * i) += 1.0;
    }
    s.nu = manifold->project(p);
    s.N = MatM3(m, 3);
    for (int j = 0; j < 3; ++j) {
      VecM col(m);
      for (int i = 0; i < m; ++i) col(i) = opts.n_scale * n01(rng);
      s.N.col(j) = opts.tangent_N ? manifold->tangent_project(s.nu, col) : col;
    }
    return s;
  }};
}

GrowthReport check_growth(const EnergyDensity& e, const GrowthSpec& g, const StateSampler& sampler, int n,
                          std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::InvalidParameter, "growth check needs n >= 1");
  Rng rng(seed);
  GrowthReport rep;
  rep.variant = g.variant;
  rep.min_slack = std::numeric_limits<double>::infinity();
  rep.adj_squared_min_slack = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const PointState s = sampler(rng);
    const double val = e.eval(s);
    const double slack = val - g.bound(s.F, s.N);
    ++rep.samples;
    if (slack < 0.0) ++rep.violations;
    if (slack < rep.min_slack) {
      rep.min_slack = slack;
      rep.worst = s;
    }
    if (g.variant == GrowthVariant::H3) {
      const double alt = val - g.bound_adj_squared(s.F, s.N);
      if (alt < 0.0) ++rep.adj_squared_violations;
      rep.adj_squared_min_slack = std::min(rep.adj_squared_min_slack, alt);
    }
  }
  if (g.variant != GrowthVariant::H3) rep.adj_squared_min_slack = 0.0;
  return rep;
}

ConvexityReport check_convexity(const EnergyDensity& e, ConvexityMode mode, const StateSampler& sampler,
                                int n_segments, std::uint64_t seed) {
  const MinorsGenerator* gen = e.minors_generator();
  if (mode == ConvexityMode::InMinorsAndN && gen == nullptr) {
    throw Error(ErrorCode::GeneratorUnavailable, e.name() + " registers no minors-generating function");
  }
  Rng rng(seed);
  ConvexityReport rep;
  rep.max_defect = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_segments; ++i) {
    const PointState a = sampler(rng);
    const PointState b = sampler(rng);
    double ea = 0.0, eb = 0.0, em = 0.0;
    if (mode == ConvexityMode::InN) {
      PointState sb = a;
      sb.N = b.N;
      PointState sm = a;
      sm.N = 0.5 * (a.N + b.N);
      ea = e.eval(a);
      eb = e.eval(sb);
      em = e.eval(sm);
    } else {
      const Eigen::VectorXd xa = minors3(a.F).components();
      const Eigen::VectorXd xb = minors3(b.F).components();
      const MatM3 nm = 0.5 * (a.N + b.N);
      ea = (*gen)(xa, a.N, a);
      eb = (*gen)(xb, b.N, a);
      em = (*gen)(0.5 * (xa + xb), nm, a);
    }
    rep.scale = std::max({rep.scale, std::abs(ea), std::abs(eb)});
    rep.max_defect = std::max(rep.max_defect, em - 0.5 * (ea + eb));
    ++rep.segments;
  }
  if (rep.segments == 0) rep.max_defect = 0.0;
  rep.pass = rep.max_defect <= 1e-10 * rep.scale;
  return rep;
}

namespace {

double block_error(const Eigen::VectorXd& analytic, const Eigen::VectorXd& numeric) {
  if (analytic.size() == 0) return 0.0;
  const double denom =
      std::max({analytic.lpNorm<Eigen::Infinity>(), numeric.lpNorm<Eigen::Infinity>(), 1.0});
  return (analytic - numeric).lpNorm<Eigen::Infinity>() / denom;
}

template <class Setter>
Eigen::VectorXd central(const EnergyDensity& e, const PointState& s, int count, double h, Setter set) {
  Eigen::VectorXd g(count);
  for (int i = 0; i < count; ++i) {
    PointState p = s, q = s;
    set(p, i, h);
    set(q, i, -h);
    g(i) = (e.eval(p) - e.eval(q)) / (2.0 * h);
  }
  return g;
}

}  // namespace

DerivativeCheckReport check_derivatives(const EnergyDensity& e, const StateSampler& sampler, int n,
                                        std::uint64_t seed, double h) {
  Rng rng(seed);
  DerivativeCheckReport rep;
  auto note = [&rep](double err, const char* block) {
    if (err > rep.max_rel_error) {
      rep.max_rel_error = err;
      rep.worst_block = block;
    }
  };
  for (int k = 0; k < n; ++k) {
    const PointState s = sampler(rng);
    const DensityDerivatives d = e.derivatives(s);
    const int m = static_cast<int>(s.nu.size());
    note(std::abs(d.value - e.eval(s)) / std::max(1.0, std::abs(d.value)), "value");
    note(block_error(d.d_x, central(e, s, 3, h, [](PointState& p, int i, double t) { p.x(i) += t; })), "d_x");
    note(block_error(d.d_u, central(e, s, 3, h, [](PointState& p, int i, double t) { p.u(i) += t; })), "d_u");
    {
      Eigen::VectorXd a(9);
      for (int i = 0; i < 9; ++i) a(i) = d.d_F(i / 3, i % 3);
      note(block_error(a, central(e, s, 9, h, [](PointState& p, int i, double t) { p.F(i / 3, i % 3) += t; })),
           "d_F");
    }
    note(block_error(d.d_nu, central(e, s, m, h, [](PointState& p, int i, double t) { p.nu(i) += t; })), "d_nu");
    {
      Eigen::VectorXd a(3 * m);
      for (int i = 0; i < 3 * m; ++i) a(i) = d.d_N(i / 3, i % 3);
      note(block_error(a, central(e, s, 3 * m, h,
                                  [](PointState& p, int i, double t) { p.N(i / 3, i % 3) += t; })),
           "d_N");
    }
    ++rep.states;
  }
  return rep;
}

// ---------------------------------------------------------------------------

void LineDefect::validate() const {
  if (points.empty()) {
    if (!multiplicity.empty()) throw Error(ErrorCode::InvalidParameter, "multiplicities without points");
    return;
  }
  if (multiplicity.size() + 1 != points.size()) {
    throw Error(ErrorCode::InvalidParameter, "line defect needs one multiplicity per segment");
  }
  for (int s = 0; s < segments(); ++s) {
    if (multiplicity[static_cast<std::size_t>(s)] < 1) {
      throw Error(ErrorCode::InvalidParameter, "multiplicities must be positive integers");
    }
    if (!(length(s) > 0.0)) throw Error(ErrorCode::InvalidParameter, "zero-length segment in line defect");
  }
}

double LineDefect::length(int s) const {
  return (points[static_cast<std::size_t>(s) + 1] - points[static_cast<std::size_t>(s)]).norm();
}

Vec3 LineDefect::tangent(int s) const {
  return (points[static_cast<std::size_t>(s) + 1] - points[static_cast<std::size_t>(s)]) / length(s);
}

double line_defect_mass(const LineDefect& line) {
  line.validate();
  double mass = 0.0;
  for (int s = 0; s < line.segments(); ++s) mass += line.multiplicity[static_cast<std::size_t>(s)] * line.length(s);
  return mass;
}

double dirichlet_energy(const FieldState& state, const Grid& grid) {
  if (!state.manifold || state.manifold->name() != "sphere") {
    throw Error(ErrorCode::WrongManifold, "Dirichlet energy of a director field needs S^2-valued nu");
  }
  const SampleField sf = corner_samples(state, grid);
  double sum = 0.0;
  for (int i = 0; i < sf.size(); ++i) {
    if (grid.cell_active(sf.cell(i))) sum += 0.5 * sf.points[static_cast<std::size_t>(i)].N.squaredNorm();
  }
  return sum * sf.weight;
}

double relaxed_spin_energy(const FieldState& state, const Grid& grid, const LineDefect& line, double macro_part) {
  return dirichlet_energy(state, grid) + 4.0 * std::numbers::pi * line_defect_mass(line) + macro_part;
}

}  // namespace cbody
