#pragma once

// Scenario configuration (sectioned key = value text) and the batch runner:
// build a body, minimize, run the enabled checks, write artifacts.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cbody/energy.hpp"
#include "cbody/energy_checks.hpp"
#include "cbody/fields.hpp"
#include "cbody/manifolds.hpp"
#include "cbody/minimize.hpp"

namespace cbody {

struct GridConfig {
  int dim = 3;
  int resolution = 16;  // cells per axis
  Vec3 lower{-1.0, -1.0, -1.0};
  Vec3 upper{1.0, 1.0, 1.0};
  std::string domain = "box";  // box | ball (cells centered inside the inscribed ball)
};

struct ManifoldConfig {
  std::string name = "sphere";
  double lo = 0.0;  // interval bounds
  double hi = 1.0;
};

/// Density name plus its numeric and vector parameters; the allowed keys
/// depend on the name.
struct DensityConfig {
  std::string name = "dirichlet_sphere";
  std::map<std::string, double> values;
  std::map<std::string, Vec3> vectors;
};

struct BoundaryConfig {
  std::string u = "identity";  // none | identity | simple_shear | dilation
  double u_amount = 0.0;
  std::string u_region = "all";
  std::string nu = "none";     // none | constant | radial | split_x | layers
  VecM nu_value;
  VecM nu_value2;
  std::string nu_region = "all";
  double layer_amplitude = 0.0;
  std::string initial_nu = "constant";  // constant | radial | layers | split_x
  VecM initial_value;
  double initial_noise = 0.0;
};

struct CheckConfig {
  std::map<std::string, bool> enabled;
  int tests = 20;
  double weak_el_tol = 1e-5;
  double duality_tol = 1e-12;
  double strong_tol = 1e-3;
  double rotational_tol = 1e-6;
  double configurational_tol = 5e-2;
  double eulerian_tol = 5e-2;
  int expected_charge = 1;
  double energy_target = 0.0;
  double energy_rel_tol = 0.1;
  int growth_samples = 10000;
  std::vector<Vec3> relaxed_line;
  std::vector<int> relaxed_multiplicity;
  Vec3 relaxed_pole{0.0, 0.0, -1.5};

  bool on(const std::string& name) const;
};

struct OutputConfig {
  std::string dir = "out";
  bool binary = true;
  bool fields_csv = true;
};

struct ScenarioConfig {
  std::string name = "scenario";
  std::string description;
  std::uint64_t seed = 1;
  GridConfig grid;
  ManifoldConfig manifold;
  DensityConfig density;
  BoundaryConfig boundary;
  MinimizeConfig minimize;
  CheckConfig checks;
  OutputConfig output;

  /// Throws Error(ConfigError) naming the first problem found.
  void validate() const;
};

/// Names accepted in [checks] as on/off toggles.
const std::vector<std::string>& check_names();

/// Throws Error(ConfigError) on syntax errors, unknown sections or keys, bad
/// values and unresolvable names.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

// ---------------------------------------------------------------------------
// Building blocks, exposed for tests and tools.

Grid build_grid(const GridConfig& g);
ManifoldSpec build_manifold(const ManifoldConfig& m);
DensityPtr build_density(const DensityConfig& d, const ManifoldSpec& manifold);
/// Initial state with Dirichlet data applied (pins set).
FieldState build_initial_state(const ScenarioConfig& cfg, const Grid& grid, const ManifoldSpec& manifold);

// ---------------------------------------------------------------------------

struct CheckOutcome {
  std::string name;
  std::string status;  // pass | fail | skipped
  std::string detail;
};

struct ResidualRow {
  std::string law;
  int test = 0;
  double raw = 0.0;
  double scale = 0.0;
  double ratio = 0.0;
};

struct ScenarioResult {
  MinimizeResult minimization;
  std::optional<Grid> grid;
  std::vector<std::pair<std::string, std::string>> summary;  // report.txt, in order
  std::vector<ResidualRow> residuals;
  std::vector<CheckOutcome> checks;
  bool all_passed = true;
};

/// Minimize and run the enabled checks. Writes nothing.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

/// Writes trace.csv, fields_u.csv, fields_nu.csv, report.txt, residuals.csv
/// and fields.cbfd into cfg.output.dir (created if missing).
void write_artifacts(const ScenarioConfig& cfg, const ScenarioResult& result);

enum ExitCode : int { kExitOk = 0, kExitChecksFailed = 1, kExitConfigError = 2, kExitRuntimeError = 3 };

}  // namespace cbody
