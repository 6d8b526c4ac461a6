#include "cbody/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "cbody/error.hpp"

namespace cbody {

namespace {

// Product manifold names as reported by Manifold::name().
const std::string kDegreeProduct = "product(sphere,interval)";
const std::string kSmecticProduct = "product(euclidean1,sphere)";


namespace pt = boost::property_tree;

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); }

// Core value of radial descriptor fields: any direction not antipodal to a
// neighbouring grid direction keeps the discrete flux around the core integral.
const Vec3 kCoreDirection = Vec3(1.0, 2.0, 3.0).normalized();

const std::map<std::string, std::set<std::string>>& section_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"scenario", {"name", "description", "seed"}},
      {"grid", {"dim", "resolution", "lower", "upper", "domain"}},
      {"manifold", {"name", "lo", "hi"}},
      {"density",
       {"name", "kappa", "axis", "varpi", "well_component", "well_a", "well_b", "well_height", "well_slope", "lambda",
        "mu", "nu_stiffness", "gradient_stiffness", "coupling", "a", "b", "c", "offset", "K", "k1", "k2"}},
      {"boundary",
       {"u", "u_amount", "u_region", "nu", "nu_value", "nu_value2", "nu_region", "layer_amplitude", "initial_nu",
        "initial_value", "initial_noise"}},
      {"minimize",
       {"method", "metric", "block_mode", "max_iters", "grad_tol", "energy_tol", "step0", "backtrack", "armijo"}},
      {"checks", {}},  // toggles and parameters are listed separately
      {"output", {"dir", "binary", "fields_csv"}},
  };
  return keys;
}

const std::set<std::string>& check_param_keys() {
  static const std::set<std::string> keys = {
      "tests",          "weak_el_tol",  "duality_tol",          "strong_tol",     "rotational_tol",
      "configurational_tol", "eulerian_tol", "expected_charge", "energy_target", "energy_rel_tol",
      "growth_samples", "relaxed_line", "relaxed_multiplicity", "relaxed_pole"};
  return keys;
}

const std::map<std::string, std::set<std::string>>& density_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"dirichlet_sphere", {}},
      {"easy_axis_sphere", {"kappa", "axis"}},
      {"ginzburg_landau", {"varpi", "well_component", "well_a", "well_b", "well_height", "well_slope"}},
      {"quadratic_vector", {"lambda", "mu", "nu_stiffness", "gradient_stiffness", "coupling"}},
      {"quasicrystal", {"a", "b", "c", "offset", "K", "coupling"}},
      {"smectic_a", {"k1", "k2"}},
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& where, const std::string& v) {
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    config_error(where + ": not a number: '" + v + "'");
  }
  if (used != v.size() || !std::isfinite(d)) config_error(where + ": not a finite number: '" + v + "'");
  return d;
}

long long to_int(const std::string& where, const std::string& v) {
  const double d = to_double(where, v);
  if (d != std::floor(d) || std::abs(d) > 9.0e15) config_error(where + ": not an integer: '" + v + "'");
  return static_cast<long long>(d);
}

bool to_bool(const std::string& where, const std::string& v) {
  if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
  if (v == "off" || v == "false" || v == "0" || v == "no") return false;
  config_error(where + ": expected on|off, got '" + v + "'");
}

std::vector<double> to_list(const std::string& where, const std::string& v) {
  std::istringstream in(v);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(to_double(where, tok));
  return out;
}

VecM to_vecm(const std::string& where, const std::string& v) {
  const auto l = to_list(where, v);
  if (l.empty() || static_cast<int>(l.size()) > kMaxEmbed) config_error(where + ": expected 1.." + std::to_string(kMaxEmbed) + " numbers");
  VecM out(static_cast<Eigen::Index>(l.size()));
  for (std::size_t i = 0; i < l.size(); ++i) out(static_cast<Eigen::Index>(i)) = l[i];
  return out;
}

Vec3 to_vec3(const std::string& where, const std::string& v) {
  const auto l = to_list(where, v);
  if (l.size() != 3) config_error(where + ": expected three numbers");
  return Vec3(l[0], l[1], l[2]);
}

bool region_token_ok(const std::string& tok) {
  static const std::set<std::string> ok = {"all", "x-", "x+", "y-", "y+", "z-", "z+"};
  return ok.count(tok) > 0;
}

NodeRegion parse_region(const std::string& text, const Grid& grid) {
  std::istringstream in(text);
  std::string tok;
  std::vector<NodeRegion> parts;
  while (in >> tok) {
    if (tok == "all") return whole_boundary();
    const int axis = tok[0] - 'x';
    if (axis >= grid.dim()) config_error("boundary region '" + tok + "' needs a " + std::to_string(axis + 1) + "D grid");
    parts.push_back(box_face(grid, axis, tok[1] == '-' ? 0 : 1));
  }
  return [parts](const NodeInfo& info) {
    return std::any_of(parts.begin(), parts.end(), [&](const NodeRegion& r) { return r(info); });
  };
}

}  // namespace

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {"admissibility", "defects",      "dirichlet_energy",
                                                 "weak_el",       "strong",       "rotational",
                                                 "configurational", "eulerian",   "growth",
                                                 "relaxed_energy"};
  return names;
}

bool CheckConfig::on(const std::string& name) const {
  const auto it = enabled.find(name);
  return it != enabled.end() && it->second;
}

ScenarioConfig parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    config_error(std::string("syntax error: ") + e.what());
  }
  ScenarioConfig cfg;
  std::set<std::string> density_seen;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) config_error("key '" + section + "' outside of any section");
    const auto sk = section_keys().find(section);
    if (sk == section_keys().end()) config_error("unknown section [" + section + "]");
    for (const auto& [key, node] : body) {
      const std::string where = "[" + section + "] " + key;
      const std::string v = trim(node.data());
      const bool is_toggle = section == "checks" &&
                             std::find(check_names().begin(), check_names().end(), key) != check_names().end();
      const bool known = sk->second.count(key) > 0 || is_toggle ||
                         (section == "checks" && check_param_keys().count(key) > 0);
      if (!known) config_error("unknown key " + where);
      if (section == "scenario") {
        if (key == "name") cfg.name = v;
        if (key == "description") cfg.description = v;
        if (key == "seed") {
          const long long s = to_int(where, v);
          if (s < 0) config_error(where + ": must be >= 0");
          cfg.seed = static_cast<std::uint64_t>(s);
        }
      } else if (section == "grid") {
        if (key == "dim") cfg.grid.dim = static_cast<int>(to_int(where, v));
        if (key == "resolution") cfg.grid.resolution = static_cast<int>(to_int(where, v));
        if (key == "lower") cfg.grid.lower = to_vec3(where, v);
        if (key == "upper") cfg.grid.upper = to_vec3(where, v);
        if (key == "domain") cfg.grid.domain = v;
      } else if (section == "manifold") {
        if (key == "name") cfg.manifold.name = v;
        if (key == "lo") cfg.manifold.lo = to_double(where, v);
        if (key == "hi") cfg.manifold.hi = to_double(where, v);
      } else if (section == "density") {
        if (key == "name") {
          cfg.density.name = v;
        } else if (key == "axis") {
          cfg.density.vectors[key] = to_vec3(where, v);
          density_seen.insert(key);
        } else {
          cfg.density.values[key] = to_double(where, v);
          density_seen.insert(key);
        }
      } else if (section == "boundary") {
        auto& b = cfg.boundary;
        if (key == "u") b.u = v;
        if (key == "u_amount") b.u_amount = to_double(where, v);
        if (key == "u_region") b.u_region = v;
        if (key == "nu") b.nu = v;
        if (key == "nu_value") b.nu_value = to_vecm(where, v);
        if (key == "nu_value2") b.nu_value2 = to_vecm(where, v);
        if (key == "nu_region") b.nu_region = v;
        if (key == "layer_amplitude") b.layer_amplitude = to_double(where, v);
        if (key == "initial_nu") b.initial_nu = v;
        if (key == "initial_value") b.initial_value = to_vecm(where, v);
        if (key == "initial_noise") b.initial_noise = to_double(where, v);
      } else if (section == "minimize") {
        auto& m = cfg.minimize;
        if (key == "method") {
          if (v == "cg") m.method = DescentMethod::ConjugateGradient;
          else if (v == "gradient") m.method = DescentMethod::Gradient;
          else config_error(where + ": expected cg|gradient");
        }
        if (key == "metric") {
          if (v == "h1") m.metric = Metric::Sobolev;
          else if (v == "lumped") m.metric = Metric::Lumped;
          else config_error(where + ": expected h1 or lumped");
        }
        if (key == "block_mode") {
          if (v == "joint") m.block_mode = BlockMode::Joint;
          else if (v == "alternating") m.block_mode = BlockMode::Alternating;
          else config_error(where + ": expected joint|alternating");
        }
        if (key == "max_iters") m.max_iters = static_cast<int>(to_int(where, v));
        if (key == "grad_tol") m.grad_tol = to_double(where, v);
        if (key == "energy_tol") m.energy_tol = to_double(where, v);
        if (key == "step0") m.step0 = to_double(where, v);
        if (key == "backtrack") m.backtrack = to_double(where, v);
        if (key == "armijo") m.armijo = to_double(where, v);
      } else if (section == "checks") {
        auto& c = cfg.checks;
        if (is_toggle) c.enabled[key] = to_bool(where, v);
        if (key == "tests") c.tests = static_cast<int>(to_int(where, v));
        if (key == "weak_el_tol") c.weak_el_tol = to_double(where, v);
        if (key == "duality_tol") c.duality_tol = to_double(where, v);
        if (key == "strong_tol") c.strong_tol = to_double(where, v);
        if (key == "rotational_tol") c.rotational_tol = to_double(where, v);
        if (key == "configurational_tol") c.configurational_tol = to_double(where, v);
        if (key == "eulerian_tol") c.eulerian_tol = to_double(where, v);
        if (key == "expected_charge") c.expected_charge = static_cast<int>(to_int(where, v));
        if (key == "energy_target") c.energy_target = to_double(where, v);
        if (key == "energy_rel_tol") c.energy_rel_tol = to_double(where, v);
        if (key == "growth_samples") c.growth_samples = static_cast<int>(to_int(where, v));
        if (key == "relaxed_line") {
          const auto l = to_list(where, v);
          if (l.size() < 6 || l.size() % 3 != 0) config_error(where + ": expected at least two points (x y z each)");
          c.relaxed_line.clear();
          for (std::size_t i = 0; i < l.size(); i += 3) c.relaxed_line.emplace_back(l[i], l[i + 1], l[i + 2]);
        }
        if (key == "relaxed_multiplicity") {
          c.relaxed_multiplicity.clear();
          for (double d : to_list(where, v)) {
            if (d != std::floor(d)) config_error(where + ": multiplicities must be integers");
            c.relaxed_multiplicity.push_back(static_cast<int>(d));
          }
        }
        if (key == "relaxed_pole") c.relaxed_pole = to_vec3(where, v);
      } else if (section == "output") {
        if (key == "dir") cfg.output.dir = v;
        if (key == "binary") cfg.output.binary = to_bool(where, v);
        if (key == "fields_csv") cfg.output.fields_csv = to_bool(where, v);
      }
    }
  }
  const auto dk = density_keys().find(cfg.density.name);
  if (dk == density_keys().end()) config_error("unknown density '" + cfg.density.name + "'");
  for (const auto& k : density_seen) {
    if (dk->second.count(k) == 0) config_error("key '" + k + "' does not apply to density " + cfg.density.name);
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void ScenarioConfig::validate() const {
  if (name.empty()) config_error("[scenario] name must not be empty");
  if (grid.dim != 2 && grid.dim != 3) config_error("[grid] dim must be 2 or 3");
  if (grid.resolution < 2 || grid.resolution > 256) config_error("[grid] resolution must lie in [2, 256]");
  for (int a = 0; a < grid.dim; ++a) {
    if (!(grid.upper(a) > grid.lower(a))) config_error("[grid] upper must exceed lower on every axis");
  }
  if (grid.domain != "box" && grid.domain != "ball") config_error("[grid] domain must be box or ball");
  try {
    build_manifold(manifold);
  } catch (const Error& e) {
    config_error(std::string("[manifold] ") + e.what());
  }
  if (density_keys().count(density.name) == 0) config_error("unknown density '" + density.name + "'");
  static const std::set<std::string> u_modes = {"none", "identity", "simple_shear", "dilation"};
  static const std::set<std::string> nu_modes = {"none", "constant", "radial", "split_x", "layers"};
  static const std::set<std::string> init_modes = {"constant", "radial", "split_x", "layers"};
  if (u_modes.count(boundary.u) == 0) config_error("[boundary] u must be none|identity|simple_shear|dilation");
  if (nu_modes.count(boundary.nu) == 0) config_error("[boundary] nu must be none|constant|radial|split_x|layers");
  if (init_modes.count(boundary.initial_nu) == 0) config_error("[boundary] initial_nu must be constant|radial|split_x|layers");
  for (const std::string* text : {&boundary.u_region, &boundary.nu_region}) {
    std::istringstream in(*text);
    std::string tok;
    int count = 0;
    while (in >> tok) {
      if (!region_token_ok(tok)) config_error("[boundary] unknown region '" + tok + "'");
      ++count;
    }
    if (count == 0) config_error("[boundary] empty region");
  }
  if (boundary.u == "dilation" && !(boundary.u_amount > 0.0)) config_error("[boundary] dilation needs u_amount > 0");
  if (!(boundary.initial_noise >= 0.0)) config_error("[boundary] initial_noise must be >= 0");
  try {
    minimize.validate();
  } catch (const Error& e) {
    config_error(std::string("[minimize] ") + e.what());
  }
  if (checks.tests < 1) config_error("[checks] tests must be >= 1");
  if (checks.growth_samples < 1) config_error("[checks] growth_samples must be >= 1");
  for (double t : {checks.weak_el_tol, checks.duality_tol, checks.strong_tol, checks.rotational_tol,
                   checks.configurational_tol, checks.eulerian_tol, checks.energy_rel_tol}) {
    if (!(t > 0.0)) config_error("[checks] tolerances must be positive");
  }
  if (checks.on("relaxed_energy")) {
    if (checks.relaxed_line.size() < 2) config_error("[checks] relaxed_energy needs relaxed_line");
    if (checks.relaxed_multiplicity.size() + 1 != checks.relaxed_line.size()) {
      config_error("[checks] relaxed_multiplicity needs one entry per segment");
    }
    LineDefect line{checks.relaxed_line, checks.relaxed_multiplicity};
    try {
      line.validate();
    } catch (const Error& e) {
      config_error(std::string("[checks] ") + e.what());
    }
  }
  if (checks.on("dirichlet_energy") && !(checks.energy_target > 0.0)) {
    config_error("[checks] dirichlet_energy needs energy_target > 0");
  }
  if (output.dir.empty()) config_error("[output] dir must not be empty");
  // Resolve the density against the manifold last: it needs both.
  try {
    build_density(density, build_manifold(manifold));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    config_error(std::string("[density] ") + e.what());
  }
}

// ---------------------------------------------------------------------------

Grid build_grid(const GridConfig& g) {
  Grid grid = Grid::cube(g.dim, g.resolution, g.lower, g.upper);
  if (g.domain == "ball") {
    Vec3 center = 0.5 * (g.lower + g.upper);
    double radius = std::numeric_limits<double>::infinity();
    for (int a = 0; a < g.dim; ++a) radius = std::min(radius, 0.5 * (g.upper(a) - g.lower(a)));
    const int d = g.dim;
    grid.mask_cells([=](const Vec3& x) {
      Vec3 r = x - center;
      if (d == 2) r(2) = 0.0;
      return r.norm() < radius;
    });
  }
  return grid;
}

ManifoldSpec build_manifold(const ManifoldConfig& m) {
  if (m.name == "interval") {
    if (!(m.hi > m.lo)) config_error("interval needs hi > lo");
    return make_interval(m.lo, m.hi);
  }
  try {
    return manifold_by_name(m.name);
  } catch (const Error& e) {
    config_error(e.what());
  }
}

DensityPtr build_density(const DensityConfig& d, const ManifoldSpec& manifold) {
  auto get = [&](const std::string& k, double def) {
    const auto it = d.values.find(k);
    return it == d.values.end() ? def : it->second;
  };
  const int m = manifold->embed_dim();
  DensityPtr out;
  if (d.name == "dirichlet_sphere") {
    out = make_dirichlet_sphere();
  } else if (d.name == "easy_axis_sphere") {
    const auto it = d.vectors.find("axis");
    const Vec3 axis = it == d.vectors.end() ? Vec3::UnitZ() : it->second;
    if (!(axis.norm() > 0.0)) config_error("easy axis must be nonzero");
    out = make_easy_axis_sphere(get("kappa", 1.0), axis);
  } else if (d.name == "ginzburg_landau") {
    const double comp = get("well_component", 0.0);
    if (comp != std::floor(comp) || comp < 0 || comp >= m) config_error("well_component out of range for the manifold");
    const int index = static_cast<int>(comp);
    const double slope = get("well_slope", 0.0);
    const double a = get("well_a", 0.0), b = get("well_b", 1.0), height = get("well_height", 1.0);
    const double varpi = get("varpi", 1.0);
    if (!(varpi > 0.0) || !(height >= 0.0)) config_error("ginzburg_landau needs varpi > 0 and well_height >= 0");
    // The well only sees a component that no rotation moves.
    const std::string mn = manifold->name();
    const bool invariant = mn == "interval" || (mn == kDegreeProduct && index == 3) ||
                           (mn == kSmecticProduct && index == 0);
    TwoWell w = slope != 0.0 ? graded_double_well(m, index, a, slope, b, height)
                             : component_double_well(m, index, a, b, height, invariant);
    out = make_ginzburg_landau(std::move(w), varpi, m);
  } else if (d.name == "quadratic_vector") {
    if (m != 3) config_error("quadratic_vector needs a 3-component descriptor");
    const double lambda = get("lambda", 1.0), mu = get("mu", 1.0);
    const double a3 = get("nu_stiffness", 1.0), a5 = get("gradient_stiffness", 1.0), gamma = get("coupling", 0.0);
    if (!(mu > 0.0) || !(3.0 * lambda + 2.0 * mu > 0.0)) config_error("quadratic_vector needs mu > 0, 3 lambda + 2 mu > 0");
    if (!(a3 >= 0.0) || !(a5 > 0.0)) config_error("quadratic_vector needs nu_stiffness >= 0, gradient_stiffness > 0");
    if (gamma * gamma >= 2.0 * mu * a5) config_error("quadratic_vector coupling too large for a positive energy");
    QuadraticConstitutive k = QuadraticConstitutive::zeros(3);
    k.C = isotropic_stiffness(lambda, mu);
    k.A3 = a3 * Eigen::MatrixXd::Identity(3, 3);
    k.A5 = a5 * Eigen::MatrixXd::Identity(9, 9);
    for (int i = 0; i < 9; ++i) k.A2(i, i) = gamma;  // eps_ij <-> d_j nu_i
    k.centrosymmetric = true;
    out = make_quadratic_vector(std::move(k));
  } else if (d.name == "quasicrystal") {
    if (m != 3) config_error("quasicrystal needs a 3-component phason descriptor");
    QuasicrystalParams p;
    p.a = get("a", p.a);
    p.b = get("b", p.b);
    p.c = get("c", p.c);
    p.offset = get("offset", p.offset);
    p.K = get("K", p.K);
    const double gamma = get("coupling", 0.0);
    if (gamma != 0.0) {
      p.coupling = Eigen::MatrixXd::Zero(9, 9);
      for (int i = 0; i < 9; ++i) p.coupling(i, i) = gamma;
    }
    try {
      out = make_quasicrystal(std::move(p));
    } catch (const Error& e) {
      config_error(e.what());
    }
  } else if (d.name == "smectic_a") {
    if (manifold->name() != kSmecticProduct) config_error("smectic_a needs the smectic manifold");
    out = make_smectic_a(get("k1", 1.0), get("k2", 1.0));
  } else {
    config_error("unknown density '" + d.name + "'");
  }
  if (out->descriptor_dim() != m) {
    config_error("density " + d.name + " expects a " + std::to_string(out->descriptor_dim()) +
                 "-component descriptor, manifold " + manifold->name() + " has " + std::to_string(m));
  }
  return out;
}

namespace {

VecM sized(const VecM& v, int m, const std::string& what) {
  if (v.size() != m) config_error("[boundary] " + what + " needs " + std::to_string(m) + " components");
  return v;
}

// Descriptor value of a named pattern at x (before projection).
VecM pattern_value(const std::string& mode, const BoundaryConfig& b, const VecM& constant, const Grid& grid,
                   int m, const Vec3& x, bool interpolate) {
  if (mode == "constant") return sized(constant, m, "constant value");
  if (mode == "radial") {
    if (m != 3 && m != 4) config_error("[boundary] radial data needs a sphere-valued component");
    Vec3 c = 0.5 * (grid.lower() + grid.upper());
    Vec3 r = x - c;
    if (grid.dim() == 2) r(2) = 0.0;
    const Vec3 dir = r.norm() > 1e-12 * (grid.upper() - grid.lower()).norm() ? Vec3(r.normalized()) : kCoreDirection;
    if (m == 3) return dir;
    VecM v(4);
    v << dir, 0.5;  // degree of orientation: sphere part radial, order 1/2
    return v;
  }
  if (mode == "split_x") {
    const VecM lo = sized(b.nu_value, m, "nu_value");
    const VecM hi = sized(b.nu_value2, m, "nu_value2");
    const double t = (x(0) - grid.lower()(0)) / (grid.upper()(0) - grid.lower()(0));
    if (interpolate) return (1.0 - t) * lo + t * hi;
    return t < 0.5 ? lo : hi;
  }
  if (mode == "layers") {
    if (m != 4) config_error("[boundary] layers data needs the smectic manifold");
    VecM v(4);
    v << x(2) + b.layer_amplitude * std::sin(std::numbers::pi * x(0)) * std::cos(std::numbers::pi * x(1)), 0.0, 0.0,
        1.0;
    return v;
  }
  config_error("[boundary] unknown descriptor pattern '" + mode + "'");
}

}  // namespace

FieldState build_initial_state(const ScenarioConfig& cfg, const Grid& grid, const ManifoldSpec& manifold) {
  const int m = manifold->embed_dim();
  const BoundaryConfig& b = cfg.boundary;
  FieldState s = FieldState::identity(grid, manifold, manifold->project(VecM::Constant(m, 0.5)));
  Rng rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> n01(0.0, 1.0);
  for (int n = 0; n < grid.num_nodes(); ++n) {
    const Vec3 x = grid.node_position(n);
    VecM v = pattern_value(b.initial_nu, b, b.initial_value, grid, m, x, true);
    if (b.initial_noise > 0.0) {
      for (int i = 0; i < m; ++i) v(i) += b.initial_noise * n01(rng);
    }
    s.nu.col(n) = manifold->project(v);
  }
  if (b.u != "none") {
    const double amt = b.u_amount;
    const int d = grid.dim();
    const std::string mode = b.u;
    auto value = [=](const Vec3& x) -> VecM {
      Vec3 y = x;
      if (mode == "simple_shear") y(0) += amt * x(d - 1);
      if (mode == "dilation") y = amt * x;
      return VecM(y);
    };
    // Start from the affine extension of the boundary map.
    for (int n = 0; n < grid.num_nodes(); ++n) s.u.col(n) = value(grid.node_position(n));
    s = apply_dirichlet(s, grid, FieldKind::U, parse_region(b.u_region, grid), value);
  }
  if (b.nu != "none") {
    auto value = [&](const Vec3& x) { return pattern_value(b.nu, b, b.nu_value, grid, m, x, false); };
    s = apply_dirichlet(s, grid, FieldKind::Nu, parse_region(b.nu_region, grid), value);
  }
  return s;
}

}  // namespace cbody
