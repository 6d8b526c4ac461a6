#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "cbody/assembly.hpp"
#include "cbody/energy.hpp"
#include "cbody/fields.hpp"
#include "cbody/manifolds.hpp"

namespace cbody {

enum class BlockMode { Joint, Alternating };

/// Search direction. Gradient: steepest descent in the lumped-mass metric.
/// ConjugateGradient: Polak-Ribiere+ on top of it, with tangent projection as
/// vector transport and restarts whenever the direction stops descending.
enum class DescentMethod { Gradient, ConjugateGradient };

/// Inner product defining the gradient direction. Lumped: nodal mass only.
/// Sobolev: grid Dirichlet form plus a mass shift, factorized once per run;
/// removes the h^-2 growth of the condition number. The convergence test
/// uses the lumped norm in both cases.
enum class Metric { Lumped, Sobolev };

struct MinimizeConfig {
  int max_iters = 5000;
  double grad_tol = 1e-6;      // lumped sup norm of the projected gradient
  double energy_tol = 1e-13;   // tolerated roundoff increase, relative to |E|
  double step0 = 1.0;          // first trial step, in units of grid spacing / sup|d|
  double backtrack = 0.5;
  double armijo = 1e-4;
  BlockMode block_mode = BlockMode::Joint;
  DescentMethod method = DescentMethod::ConjugateGradient;
  Metric metric = Metric::Sobolev;
  std::uint64_t seed = 0;
  std::ostream* log = nullptr;  // one "iter energy gradnorm step" line per accepted iterate

  /// Throws Error(InvalidParameter).
  void validate() const;
};

struct MinimizeResult {
  FieldState state;
  std::vector<double> energy_trace;   // initial energy first, then one entry per accepted iterate
  std::vector<double> grad_trace;
  int iterations = 0;
  bool converged = false;
  int barrier_rejections = 0;
  int armijo_rejections = 0;
  double final_grad_norm = 0.0;
  /// "converged", "max_iters" (stall without convergence) or "line_search".
  std::string stop_reason;
};

/// Throws Error(InadmissibleStart) if det F <= 0 on an active cell or nu is off M.
MinimizeResult minimize(const EnergyDensity& density, const FieldState& state0, const Grid& grid,
                        const Manifold& manifold, const MinimizeConfig& cfg);

}  // namespace cbody
