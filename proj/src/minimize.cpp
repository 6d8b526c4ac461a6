#include "cbody/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>

#include <Eigen/SparseCholesky>

#include "cbody/error.hpp"

namespace cbody {

void MinimizeConfig::validate() const {
  if (max_iters < 0) throw Error(ErrorCode::InvalidParameter, "max_iters must be >= 0");
  if (!(grad_tol > 0.0) || !(energy_tol > 0.0) || !(step0 > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "tolerances and step0 must be positive");
  }
  if (!(backtrack > 0.0 && backtrack < 1.0)) throw Error(ErrorCode::InvalidParameter, "backtrack must lie in (0,1)");
  if (!(armijo > 0.0 && armijo < 1.0)) throw Error(ErrorCode::InvalidParameter, "armijo must lie in (0,1)");
}

namespace {

struct Evaluation {
  bool admissible = false;
  double energy = std::numeric_limits<double>::infinity();
  NodalGradient grad;  // projected, masked
};

// Without the gradient, ev.grad is left empty.
Evaluation evaluate(const EnergyDensity& e, const FieldState& s, const Grid& grid, const Manifold& manifold,
                    bool with_gradient = true) {
  Evaluation ev;
  // Barrier: det F > 0 at every cell center and every corner sample.
  if (!(min_cell_det(s.u, grid) > 0.0)) return ev;
  EnergyGradient eg = energy_and_gradient(e, s, grid, with_gradient, true);
  if (eg.status != SampleStatus::Ok) return ev;
  ev.admissible = true;
  ev.energy = eg.energy;
  if (with_gradient) ev.grad = project_gradient(std::move(eg.grad), s, grid, manifold);
  return ev;
}

struct Direction {
  Eigen::Matrix3Xd u;
  Eigen::MatrixXd nu;
};

// Lumped-mass preconditioned gradient z = g / V_n, with interval-type bounds
// respected (components that would push nu out of M are dropped).
Direction precondition(const NodalGradient& g, const FieldState& s, const Grid& grid, const Manifold& manifold) {
  Direction z{Eigen::Matrix3Xd::Zero(3, grid.num_nodes()), Eigen::MatrixXd::Zero(g.nu.rows(), grid.num_nodes())};
  const bool bounded = manifold.has_boundary();
  for (int n = 0; n < grid.num_nodes(); ++n) {
    const double vn = grid.node_volume(n);
    if (vn <= 0.0) continue;
    z.u.col(n) = g.u.col(n) / vn;
    if (bounded) {
      z.nu.col(n) = -manifold.feasible_direction(s.nu.col(n), VecM(-g.nu.col(n) / vn));
    } else {
      z.nu.col(n) = g.nu.col(n) / vn;
    }
  }
  return z;
}

// Riesz map of the Sobolev metric: K + eps M on free nodes, K the Hessian of
// the discrete Dirichlet energy (edge couplings only), M the lumped mass.
class SobolevMetric {
 public:
  SobolevMetric(const FieldState& s, const Grid& grid) {
    u_.build(grid, s.pinned_u);
    same_ = s.pinned_u == s.pinned_nu;
    if (!same_) nu_.build(grid, s.pinned_nu);
  }

  Direction apply(const NodalGradient& g, const FieldState& s, const Grid& grid, const Manifold& manifold) const {
    Direction z{u_.solve(g.u), (same_ ? u_ : nu_).solve(g.nu)};
    const bool bounded = manifold.has_boundary();
    for (int n = 0; n < grid.num_nodes(); ++n) {
      if (z.nu.col(n).isZero(0.0)) continue;
      const VecM nu = s.nu.col(n);
      VecM v = manifold.tangent_project(nu, z.nu.col(n));
      if (bounded) v = -manifold.feasible_direction(nu, VecM(-v));
      z.nu.col(n) = v;
    }
    return z;
  }

 private:
  struct Factor {
    std::vector<int> row;  // node -> unknown, -1 when fixed
    int size = 0;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;

    void build(const Grid& grid, const std::vector<std::uint8_t>& pinned) {
      const int nn = grid.num_nodes();
      row.assign(static_cast<std::size_t>(nn), -1);
      for (int n = 0; n < nn; ++n) {
        if (grid.node_active(n) && !pinned[static_cast<std::size_t>(n)]) row[static_cast<std::size_t>(n)] = size++;
      }
      if (size == 0) return;
      double diam2 = 0.0;
      for (int a = 0; a < grid.dim(); ++a) diam2 = std::max(diam2, std::pow(grid.upper()(a) - grid.lower()(a), 2));
      std::vector<Eigen::Triplet<double>> trip;
      for (int n = 0; n < nn; ++n) {
        const int r = row[static_cast<std::size_t>(n)];
        if (r >= 0) trip.emplace_back(r, r, grid.node_volume(n) / diam2);
      }
      const double w = grid.cell_volume() / grid.corners();
      for (int c = 0; c < grid.num_cells(); ++c) {
        if (!grid.cell_active(c)) continue;
        for (int k = 0; k < grid.corners(); ++k) {
          for (int a = 0; a < grid.dim(); ++a) {
            const double wa = w / (grid.spacing(a) * grid.spacing(a));
            const int r0 = row[static_cast<std::size_t>(grid.cell_node(c, k))];
            const int r1 = row[static_cast<std::size_t>(grid.cell_node(c, k ^ (1 << a)))];
            if (r0 >= 0) trip.emplace_back(r0, r0, wa);
            if (r1 >= 0) trip.emplace_back(r1, r1, wa);
            if (r0 >= 0 && r1 >= 0) {
              trip.emplace_back(r0, r1, -wa);
              trip.emplace_back(r1, r0, -wa);
            }
          }
        }
      }
      Eigen::SparseMatrix<double> K(size, size);
      K.setFromTriplets(trip.begin(), trip.end());
      ldlt.compute(K);
      if (ldlt.info() != Eigen::Success) throw Error(ErrorCode::InvalidParameter, "metric factorization failed");
    }

    // Rows of g are field components, columns nodes.
    template <class M>
    M solve(const M& g) const {
      M out = M::Zero(g.rows(), g.cols());
      if (size == 0) return out;
      Eigen::MatrixXd rhs(size, g.rows());
      for (std::size_t n = 0; n < row.size(); ++n) {
        if (row[n] >= 0) rhs.row(row[n]) = g.col(static_cast<Eigen::Index>(n)).transpose();
      }
      const Eigen::MatrixXd x = ldlt.solve(rhs);
      for (std::size_t n = 0; n < row.size(); ++n) {
        if (row[n] >= 0) out.col(static_cast<Eigen::Index>(n)) = x.row(row[n]).transpose();
      }
      return out;
    }
  };

  Factor u_, nu_;
  bool same_ = true;
};

double sup_norm(const Direction& z) {
  double s = 0.0;
  for (int n = 0; n < z.u.cols(); ++n) s = std::max(s, std::sqrt(z.u.col(n).squaredNorm() + z.nu.col(n).squaredNorm()));
  return s;
}

double dot(const Direction& a, const Direction& b) { return a.u.cwiseProduct(b.u).sum() + a.nu.cwiseProduct(b.nu).sum(); }

// Moves a direction into the tangent space at the current state (vector transport).
void transport(Direction& d, const FieldState& s, const Grid& grid, const Manifold& manifold) {
  for (int n = 0; n < grid.num_nodes(); ++n) {
    const auto un = static_cast<std::size_t>(n);
    if (!grid.node_active(n) || s.pinned_u[un]) d.u.col(n).setZero();
    if (!grid.node_active(n) || s.pinned_nu[un]) {
      d.nu.col(n).setZero();
    } else {
      VecM v = manifold.tangent_project(s.nu.col(n), d.nu.col(n));
      d.nu.col(n) = manifold.feasible_direction(s.nu.col(n), v);
    }
  }
}

enum Block { kJoint = 0, kU = 1, kNu = 2 };

void restrict_block(Direction& d, Block b) {
  if (b == kU) d.nu.setZero();
  if (b == kNu) d.u.setZero();
}

FieldState step(const FieldState& s, const Direction& d, double t, const Grid& grid, const Manifold& manifold) {
  FieldState out = s;
  for (int n = 0; n < grid.num_nodes(); ++n) {
    if (!grid.node_active(n)) continue;
    const auto un = static_cast<std::size_t>(n);
    if (!s.pinned_u[un]) out.u.col(n) += t * d.u.col(n);
    if (!s.pinned_nu[un] && !d.nu.col(n).isZero(0.0)) {
      out.nu.col(n) = manifold.retract(s.nu.col(n), VecM(t * d.nu.col(n)));
    }
  }
  return out;
}

double pair(const NodalGradient& g, const Direction& d) { return g.u.cwiseProduct(d.u).sum() + g.nu.cwiseProduct(d.nu).sum(); }

}  // namespace

MinimizeResult minimize(const EnergyDensity& density, const FieldState& state0, const Grid& grid,
                        const Manifold& manifold, const MinimizeConfig& cfg) {
  cfg.validate();
  if (state0.max_constraint_violation(grid) > 1e-10) {
    throw Error(ErrorCode::InadmissibleStart, "initial descriptor field is off the manifold");
  }
  Evaluation cur = evaluate(density, state0, grid, manifold);
  if (!cur.admissible) {
    throw Error(ErrorCode::InadmissibleStart, "initial state has det F <= 0 or infinite energy");
  }

  MinimizeResult res;
  res.state = state0;
  res.energy_trace.push_back(cur.energy);

  std::optional<SobolevMetric> sobolev;
  if (cfg.metric == Metric::Sobolev) sobolev.emplace(state0, grid);
  auto direction_of = [&](const Direction& lumped) {
    return sobolev ? sobolev->apply(cur.grad, res.state, grid, manifold) : lumped;
  };

  Direction z = precondition(cur.grad, res.state, grid, manifold);
  double gnorm = sup_norm(z);
  res.grad_trace.push_back(gnorm);
  Direction p = direction_of(z);

  struct Memory {
    bool valid = false;
    Direction d, g;
    double gp = 0.0;
    double t = 0.0;
    double dE = 0.0;
    double slope = 0.0;
  };
  Memory mem[3];

  const double h = grid.min_spacing();
  for (int it = 0; it < cfg.max_iters; ++it) {
    if (gnorm <= cfg.grad_tol) break;

    Block block = kJoint;
    if (cfg.block_mode == BlockMode::Alternating) {
      Direction zu = z, zn = z;
      restrict_block(zu, kU);
      restrict_block(zn, kNu);
      const double su = sup_norm(zu), sn = sup_norm(zn);
      block = (it % 2 == 0) ? kU : kNu;
      if (block == kU && su <= cfg.grad_tol) block = kNu;
      if (block == kNu && sn <= cfg.grad_tol) block = kU;
    }

    Direction pb = p;
    restrict_block(pb, block);
    Direction gb{cur.grad.u, cur.grad.nu};
    restrict_block(gb, block);
    const double gp = dot(gb, pb);
    Direction d{-pb.u, -pb.nu};
    Memory& m = mem[block];
    if (cfg.method == DescentMethod::ConjugateGradient && m.valid && m.gp > 0.0) {
      Direction dp = m.d, gprev = m.g;
      transport(dp, res.state, grid, manifold);
      transport(gprev, res.state, grid, manifold);
      restrict_block(dp, block);
      restrict_block(gprev, block);
      const double beta = std::max(0.0, (gp - dot(gprev, pb)) / m.gp);
      d.u += beta * dp.u;
      d.nu += beta * dp.nu;
    }
    double slope = pair(cur.grad, d);
    if (!(slope < 0.0)) {
      d = Direction{-pb.u, -pb.nu};
      slope = pair(cur.grad, d);
    }
    const double dsup = sup_norm(d);
    if (!(slope < 0.0) || dsup == 0.0) {
      res.stop_reason = "line_search";
      break;
    }

    // Initial trial step.
    double t = cfg.step0 * h / dsup;
    if (m.valid && m.dE < 0.0) {
      const double by_decrease = 2.02 * m.dE / slope;
      const double by_slope = m.slope < 0.0 ? 1.5 * m.t * m.slope / slope : by_decrease;
      t = std::max(t * 1e-3, std::min({by_decrease, by_slope, 1e3 * t}));
    }
    if (m.valid && m.dE >= 0.0) t = m.t;

    bool accepted = false;
    Evaluation next;
    FieldState cand;
    const double scale = std::max(std::abs(cur.energy), 1.0);
    for (int trial = 0; trial < 80; ++trial) {
      bool ok = true;
      try {
        cand = step(res.state, d, t, grid, manifold);
      } catch (const Error&) {
        ok = false;
      }
      if (ok) next = evaluate(density, cand, grid, manifold, false);
      if (!ok || !next.admissible) {
        ++res.barrier_rejections;
        t *= cfg.backtrack;
        continue;
      }
      const double dE = next.energy - cur.energy;
      if (dE <= cfg.armijo * t * slope && dE < 0.0) {
        // One refinement toward the interpolated line minimum; keeps CG
        // close to exact line searches on near-quadratic energies.
        const double denom = 2.0 * (dE - slope * t);
        const double tq = denom > 0.0 ? -slope * t * t / denom : 2.0 * t;
        if (std::abs(tq - t) > 0.2 * t) {
          const double t2 = std::min(tq, 4.0 * t);
          try {
            FieldState c2 = step(res.state, d, t2, grid, manifold);
            Evaluation e2 = evaluate(density, c2, grid, manifold, false);
            if (e2.admissible && e2.energy < next.energy) {
              cand = std::move(c2);
              t = t2;
            }
          } catch (const Error&) {
          }
        }
        next = evaluate(density, cand, grid, manifold);
        accepted = next.admissible;
        if (accepted) break;
      }
      // Within roundoff of the current energy: fall back on the slope at the
      // trial point (approximate Wolfe test).
      if (!accepted && std::abs(dE) <= cfg.energy_tol * scale) {
        next = evaluate(density, cand, grid, manifold);
        Direction dt = d;
        transport(dt, cand, grid, manifold);
        const double slope_t = pair(next.grad, dt);
        if (slope_t > slope) {
          // Energies are indistinguishable here; the directional derivative
          // is not. Secant step to its zero.
          const double ts = std::min(t * slope / (slope - slope_t), 4.0 * t);
          if (std::abs(ts - t) > 0.1 * t) {
            try {
              FieldState c2 = step(res.state, d, ts, grid, manifold);
              Evaluation e2 = evaluate(density, c2, grid, manifold);
              if (e2.admissible && e2.energy - cur.energy <= cfg.energy_tol * scale) {
                cand = std::move(c2);
                next = std::move(e2);
                t = ts;
              }
            } catch (const Error&) {
            }
          }
          accepted = true;
          break;
        }
        if (slope_t <= (1.0 - 2.0 * cfg.armijo) * std::abs(slope)) {
          accepted = true;
          break;
        }
      }
      ++res.armijo_rejections;
      // Safeguarded quadratic interpolation.
      const double denom = 2.0 * (dE - slope * t);
      double tq = denom > 0.0 ? -slope * t * t / denom : cfg.backtrack * t;
      t = std::clamp(tq, 1e-3 * t, cfg.backtrack * t);
    }
    if (!accepted) {
      res.stop_reason = "line_search";
      break;
    }

    m.valid = true;
    m.d = d;
    m.g = gb;
    m.gp = gp;
    m.t = t;
    m.dE = next.energy - cur.energy;
    m.slope = slope;

    res.state = std::move(cand);
    cur = std::move(next);
    z = precondition(cur.grad, res.state, grid, manifold);
    gnorm = sup_norm(z);
    p = direction_of(z);
    ++res.iterations;
    res.energy_trace.push_back(cur.energy);
    res.grad_trace.push_back(gnorm);
    if (cfg.log) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "%d %.17g %.6e %.6e\n", res.iterations, cur.energy, gnorm, t);
      *cfg.log << buf;
    }
  }

  res.final_grad_norm = gnorm;
  res.converged = gnorm <= cfg.grad_tol;
  if (res.converged) {
    res.stop_reason = "converged";
  } else if (res.stop_reason.empty()) {
    res.stop_reason = "max_iters";
  }
  return res;
}

}  // namespace cbody
