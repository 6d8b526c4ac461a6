#pragma once

// Sampled falsifiers for the structural hypotheses on densities, derivative
// checks, and the relaxed line-defect energy.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cbody/energy.hpp"
#include "cbody/fields.hpp"
#include "cbody/manifolds.hpp"

namespace cbody {

using Rng = std::mt19937_64;

/// Draws random states with det F > 0 and nu on M.
struct StateSampler {
  std::function<PointState(Rng&)> draw;
  PointState operator()(Rng& rng) const { return draw(rng); }
};

struct SamplerOptions {
  /// F = I + f_spread * G (G standard normal), redrawn until det F >= min_det.
  double f_spread = 0.3;
  /// When > 0, F = Q1 diag(exp(log_stretch * g)) Q2 with random rotations instead.
  double log_stretch = 0.0;
  double min_det = 0.05;
  double n_scale = 1.0;
  /// Columns of N projected onto T_nu M.
  bool tangent_N = true;
};

StateSampler make_state_sampler(ManifoldSpec manifold, SamplerOptions opts = {});

struct GrowthReport {
  int samples = 0;
  int violations = 0;
  double min_slack = 0.0;
  PointState worst;
  GrowthVariant variant = GrowthVariant::H2;
  // H3 only: the same count against |F|^2 + |adj F|^2 + |N|^s.
  int adj_squared_violations = 0;
  double adj_squared_min_slack = 0.0;
};

GrowthReport check_growth(const EnergyDensity& e, const GrowthSpec& g, const StateSampler& sampler, int n,
                          std::uint64_t seed = 1);

enum class ConvexityMode { InN, InMinorsAndN };

struct ConvexityReport {
  int segments = 0;
  double max_defect = 0.0;  // max of e(mid) - (e(a) + e(b)) / 2
  double scale = 1.0;
  bool pass = true;
};

/// Throws Error(GeneratorUnavailable) for InMinorsAndN without a registered generator.
ConvexityReport check_convexity(const EnergyDensity& e, ConvexityMode mode, const StateSampler& sampler,
                                int n_segments, std::uint64_t seed = 1);

struct DerivativeCheckReport {
  int states = 0;
  double max_rel_error = 0.0;
  std::string worst_block;
};

/// Central differences with step h on every argument. The error of a block is
/// |analytic - numeric|_inf / max(|analytic|_inf, |numeric|_inf, 1).
DerivativeCheckReport check_derivatives(const EnergyDensity& e, const StateSampler& sampler, int n,
                                        std::uint64_t seed = 1, double h = 1e-5);

// ---------------------------------------------------------------------------

/// Oriented polyline carrying an integer multiplicity per segment.
struct LineDefect {
  std::vector<Vec3> points;
  std::vector<int> multiplicity;  // points.size() - 1 entries

  /// Throws Error(InvalidParameter) on zero-length segments, bad multiplicities or sizes.
  void validate() const;
  int segments() const { return points.size() < 2 ? 0 : static_cast<int>(points.size()) - 1; }
  Vec3 tangent(int s) const;
  double length(int s) const;
};

double line_defect_mass(const LineDefect& line);

/// 1/2 sum_s w_s |N_s|^2 over the corner samples of active cells. Throws Error(WrongManifold) unless nu is S^2-valued.
double dirichlet_energy(const FieldState& state, const Grid& grid);

/// dirichlet_energy + 4 pi mass(L) + macro_part.
double relaxed_spin_energy(const FieldState& state, const Grid& grid, const LineDefect& line,
                           double macro_part = 0.0);

}  // namespace cbody
