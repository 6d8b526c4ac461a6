#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "cbody/admissibility.hpp"
#include "cbody/assembly.hpp"
#include "cbody/balance.hpp"
#include "cbody/error.hpp"
#include "cbody/scenario.hpp"

namespace cbody {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct Recorder {
  ScenarioResult& res;

  void put(const std::string& k, const std::string& v) { res.summary.emplace_back(k, v); }
  void put(const std::string& k, double v) { put(k, fmt(v)); }
  void put_int(const std::string& k, long long v) { put(k, std::to_string(v)); }

  void rows(const std::string& law, const std::vector<Residual>& rs) {
    for (std::size_t i = 0; i < rs.size(); ++i) {
      res.residuals.push_back({law, static_cast<int>(i), rs[i].raw, rs[i].scale, rs[i].ratio});
    }
  }
  void row(const std::string& law, const Residual& r) { res.residuals.push_back({law, 0, r.raw, r.scale, r.ratio}); }

  void outcome(const std::string& name, bool pass, const std::string& detail) {
    res.checks.push_back({name, pass ? "pass" : "fail", detail});
    if (!pass) res.all_passed = false;
  }
  void skipped(const std::string& name, const std::string& why) { res.checks.push_back({name, "skipped", why}); }
};

bool sphere_valued(const Manifold& m) { return m.name() == "sphere"; }

// Dirichlet energy summed directly from nodal differences, independent of
// the sample machinery used by dirichlet_energy().
double direct_dirichlet(const FieldState& s, const Grid& grid) {
  double sum = 0.0;
  for (int c = 0; c < grid.num_cells(); ++c) {
    if (!grid.cell_active(c)) continue;
    for (int k = 0; k < grid.corners(); ++k) {
      const int n0 = grid.cell_node(c, k);
      for (int a = 0; a < grid.dim(); ++a) {
        const int n1 = grid.cell_node(c, k ^ (1 << a));
        const double h = grid.spacing(a);
        sum += (s.nu.col(n1) - s.nu.col(n0)).squaredNorm() / (h * h);
      }
    }
  }
  return 0.5 * sum * grid.cell_volume() / grid.corners();
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  ScenarioResult res;
  Recorder rec{res};
  const Grid grid = build_grid(cfg.grid);
  res.grid = grid;
  const ManifoldSpec man = build_manifold(cfg.manifold);
  const DensityPtr dens = build_density(cfg.density, man);
  const FieldState s0 = build_initial_state(cfg, grid, man);

  MinimizeConfig mc = cfg.minimize;
  mc.seed = cfg.seed;
  res.minimization = minimize(*dens, s0, grid, *man, mc);
  const MinimizeResult& mr = res.minimization;
  const FieldState& s = mr.state;

  rec.put("scenario", cfg.name);
  if (!cfg.description.empty()) rec.put("description", cfg.description);
  rec.put_int("seed", static_cast<long long>(cfg.seed));
  rec.put_int("grid.dim", grid.dim());
  rec.put_int("grid.resolution", cfg.grid.resolution);
  rec.put("grid.domain", cfg.grid.domain);
  rec.put_int("grid.active_cells", grid.num_active_cells());
  rec.put("manifold", man->name());
  rec.put("density", dens->name());
  rec.put("density.objective", dens->objective() ? "yes" : "no");
  rec.put("density.x_homogeneous", dens->x_homogeneous() ? "yes" : "no");
  rec.put_int("minimize.iterations", mr.iterations);
  rec.put("minimize.converged", mr.converged ? "yes" : "no");
  rec.put("minimize.stop_reason", mr.stop_reason);
  rec.put("minimize.energy_initial", mr.energy_trace.front());
  rec.put("minimize.energy_final", mr.energy_trace.back());
  rec.put("minimize.final_grad_norm", mr.final_grad_norm);
  rec.put_int("minimize.barrier_rejections", mr.barrier_rejections);
  rec.put_int("minimize.armijo_rejections", mr.armijo_rejections);
  rec.put("state.constraint_violation", s.max_constraint_violation(grid));

  const CheckConfig& ck = cfg.checks;
  const auto guarded = [&](const std::string& name, const auto& body) {
    if (!ck.on(name)) return;
    try {
      body();
    } catch (const Error& e) {
      rec.outcome(name, false, e.what());
    }
  };

  guarded("admissibility", [&] {
    const AdmissibilityReport a = check_admissibility(s, grid);
    rec.put("admissibility.min_det", a.min_det);
    rec.put_int("admissibility.violating_cells", a.violating_cells);
    rec.put("admissibility.ciarlet_necas_slack", a.ciarlet_necas_slack);
    rec.put("admissibility.tolerance", a.tolerance);
    rec.outcome("admissibility", a.injectivity_pass, "min det " + fmt(a.min_det) + ", slack " + fmt(a.ciarlet_necas_slack));
  });

  guarded("defects", [&] {
    if (!sphere_valued(*man) || grid.dim() != 3) {
      rec.skipped("defects", "needs S^2-valued descriptor on a 3D grid");
      return;
    }
    const DefectReport d = defect_charges(s, grid);
    rec.put("defects.total_charge", static_cast<double>(d.total_charge));
    rec.put("defects.total_flux_over_4pi", d.total_flux / kFourPi);
    rec.put_int("defects.count", static_cast<long long>(d.charges.size()));
    for (std::size_t i = 0; i < d.charges.size(); ++i) {
      const Vec3 x = grid.cell_center(d.charges[i].cell);
      rec.put("defects.charge" + std::to_string(i),
              std::to_string(d.charges[i].charge) + " at " + fmt(x(0)) + " " + fmt(x(1)) + " " + fmt(x(2)));
    }
    const bool pass = d.total_charge == ck.expected_charge && std::abs(d.total_flux - kFourPi * d.total_charge) <= d.tolerance;
    rec.outcome("defects", pass, "total charge " + std::to_string(d.total_charge) + ", expected " +
                                     std::to_string(ck.expected_charge));
  });

  guarded("dirichlet_energy", [&] {
    if (!sphere_valued(*man)) {
      rec.skipped("dirichlet_energy", "needs S^2-valued descriptor");
      return;
    }
    const double e = dirichlet_energy(s, grid);
    rec.put("dirichlet_energy", e);
    rec.put("dirichlet_energy.over_target", e / ck.energy_target);
    rec.outcome("dirichlet_energy", std::abs(e / ck.energy_target - 1.0) <= ck.energy_rel_tol,
                fmt(e) + " vs target " + fmt(ck.energy_target));
  });

  const bool need_actions = ck.on("weak_el") || ck.on("strong") || ck.on("rotational") ||
                            ck.on("configurational") || ck.on("eulerian");
  BalanceFields bf;
  if (need_actions) bf = assemble_actions(*dens, s, grid);

  guarded("weak_el", [&] {
    const auto tests = random_nodal_tests(s, grid, ck.tests, cfg.seed + 1);
    if (tests.empty()) {
      rec.skipped("weak_el", "no free interior nodes");
      return;
    }
    const auto rs = weak_el_residual(bf, tests, s, grid);
    rec.rows("weak_el", rs);
    const NodalGradient g = energy_gradient(*dens, s, grid);
    double duality = 0.0;
    for (std::size_t i = 0; i < tests.size(); ++i) {
      const double pair = g.pair(tests[i].h, tests[i].upsilon);
      duality = std::max(duality, std::abs(pair - rs[i].raw) / std::max(rs[i].scale, 1e-300));
    }
    const double mr_ = max_ratio(rs);
    rec.put("weak_el.max_ratio", mr_);
    rec.put("weak_el.duality_defect", duality);
    rec.outcome("weak_el", mr_ <= ck.weak_el_tol && duality <= ck.duality_tol,
                "max ratio " + fmt(mr_) + ", duality " + fmt(duality));
  });

  guarded("strong", [&] {
    const StrongResiduals sr = strong_residuals(bf, s, grid);
    rec.row("strong_cauchy_sup", sr.cauchy_sup);
    rec.row("strong_cauchy_l2", sr.cauchy_l2);
    rec.row("strong_capriz_sup", sr.capriz_sup);
    rec.row("strong_capriz_l2", sr.capriz_l2);
    rec.put("strong.cauchy_l2_ratio", sr.cauchy_l2.ratio);
    rec.put("strong.capriz_l2_ratio", sr.capriz_l2.ratio);
    rec.outcome("strong", sr.cauchy_l2.ratio <= ck.strong_tol && sr.capriz_l2.ratio <= ck.strong_tol,
                "cauchy " + fmt(sr.cauchy_l2.ratio) + ", capriz " + fmt(sr.capriz_l2.ratio));
  });

  guarded("rotational", [&] {
    if (!dens->objective() || !man->rotation_generator_defined()) {
      rec.skipped("rotational", "density not objective or manifold without rotation action");
      return;
    }
    const RotationalResidual r = rotational_balance(bf, *man, grid);
    rec.row("rotational", r.max_cell);
    rec.put("rotational.ratio", r.max_cell.ratio);
    rec.outcome("rotational", r.max_cell.ratio <= ck.rotational_tol, "ratio " + fmt(r.max_cell.ratio));
  });

  guarded("configurational", [&] {
    const auto tests = random_reference_tests(s, grid, ck.tests, cfg.seed + 2);
    if (tests.empty()) {
      rec.skipped("configurational", "no free interior nodes");
      return;
    }
    const auto rs = configurational_residual(eshelby(bf, grid), bf, tests, grid);
    rec.rows("configurational", rs);
    const double m = max_ratio(rs);
    rec.put("configurational.max_ratio", m);
    rec.outcome("configurational", m <= ck.configurational_tol, "max ratio " + fmt(m));
  });

  guarded("eulerian", [&] {
    const auto tests = random_spatial_tests(s, grid, ck.tests, cfg.seed + 3);
    if (tests.empty()) {
      rec.skipped("eulerian", "no free interior nodes");
      return;
    }
    const auto rs = eulerian_residual(bf, tests, grid);
    rec.rows("eulerian", rs);
    const double m = max_ratio(rs);
    rec.put("eulerian.max_ratio", m);
    rec.outcome("eulerian", m <= ck.eulerian_tol, "max ratio " + fmt(m));
  });

  guarded("growth", [&] {
    if (!dens->growth_meta()) {
      rec.skipped("growth", "density declares no growth bound");
      return;
    }
    const GrowthReport g = check_growth(*dens, *dens->growth_meta(), make_state_sampler(man), ck.growth_samples, cfg.seed);
    rec.put_int("growth.samples", g.samples);
    rec.put_int("growth.violations", g.violations);
    rec.put("growth.min_slack", g.min_slack);
    if (g.variant == GrowthVariant::H3) {
      // informational: the same bound with |adj F|^2 in place of |adj F|^{3/2}
      rec.put_int("growth.adj_squared_violations", g.adj_squared_violations);
      rec.put("growth.adj_squared_min_slack", g.adj_squared_min_slack);
    }
    rec.outcome("growth", g.violations == 0, std::to_string(g.violations) + " violations in " + std::to_string(g.samples));
  });

  guarded("relaxed_energy", [&] {
    if (!sphere_valued(*man)) {
      rec.skipped("relaxed_energy", "needs S^2-valued descriptor");
      return;
    }
    const LineDefect line{ck.relaxed_line, ck.relaxed_multiplicity};
    FieldState smooth = s;
    for (int n = 0; n < grid.num_nodes(); ++n) {
      const Vec3 d = grid.node_position(n) - ck.relaxed_pole;
      if (!(d.norm() > 0.0)) throw Error(ErrorCode::InvalidParameter, "relaxed_pole lies on a grid node");
      smooth.nu.col(n) = d.normalized();
    }
    const double relaxed = relaxed_spin_energy(smooth, grid, line);
    double mass = 0.0;
    for (std::size_t i = 0; i + 1 < line.points.size(); ++i) {
      mass += line.multiplicity[i] * (line.points[i + 1] - line.points[i]).norm();
    }
    const double dir = direct_dirichlet(smooth, grid);
    const double recomputed = dir + kFourPi * mass;
    const double err = std::abs(relaxed - recomputed) / std::max(1.0, std::abs(recomputed));
    rec.put("relaxed.defect_field_dirichlet", dirichlet_energy(s, grid));
    rec.put("relaxed.smoothed_dirichlet", dir);
    rec.put("relaxed.line_mass", mass);
    rec.put("relaxed.total", relaxed);
    rec.put("relaxed.recomputed", recomputed);
    rec.outcome("relaxed_energy", err <= 1e-12, "relative mismatch " + fmt(err));
  });

  for (const auto& c : res.checks) rec.put("check." + c.name, c.status);
  rec.put("result", res.all_passed ? "pass" : "fail");
  return res;
}

}  // namespace cbody
