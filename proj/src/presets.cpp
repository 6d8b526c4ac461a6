#include "cbody/presets.hpp"

#include "cbody/error.hpp"

namespace cbody {

namespace {

const char* kHedgehog = R"([scenario]
name = nematic-hedgehog
description = Unit director field on a ball with radial anchoring; one point defect at the center.
seed = 11

[grid]
dim = 3
resolution = 24
lower = -1 -1 -1
upper = 1 1 1
domain = ball

[manifold]
name = sphere

[density]
name = dirichlet_sphere

[boundary]
u = identity
u_region = all
nu = radial
nu_region = all
initial_nu = radial

[minimize]
method = cg
max_iters = 4000
grad_tol = 1e-8

[checks]
admissibility = on
defects = on
expected_charge = 1
dirichlet_energy = on
energy_target = 12.566370614359172
energy_rel_tol = 0.1
weak_el = on
strong = on
rotational = on
configurational = off
eulerian = on

[output]
dir = out/nematic-hedgehog
)";

const char* kDegree = R"([scenario]
name = degree-of-orientation
description = Director plus degree of orientation in [-1/2, 1] with a double well on the order parameter.
seed = 12

[grid]
dim = 3
resolution = 16
lower = 0 0 0
upper = 1 1 1

[manifold]
name = degree_of_orientation

[density]
name = ginzburg_landau
varpi = 0.05
well_component = 3
well_a = 0
well_b = 0.6
well_height = 1

[boundary]
u = identity
u_region = all
nu = split_x
nu_value = 0 0 1 0.5
nu_value2 = 1 0 0 0.1
nu_region = x- x+
initial_nu = split_x
initial_noise = 0.02

[minimize]
method = cg
max_iters = 4000
grad_tol = 1e-8

[checks]
admissibility = on
weak_el = on
strong = on
rotational = on
configurational = on
eulerian = on

[output]
dir = out/degree-of-orientation
)";

const char* kMicrocracked = R"([scenario]
name = microcracked-vector
description = Linear elastic body with a vector descriptor for microcrack opening, coupled through the strain.
seed = 13

[grid]
dim = 3
resolution = 16
lower = 0 0 0
upper = 1 1 1

[manifold]
name = euclidean3

[density]
name = quadratic_vector
lambda = 1
mu = 1
nu_stiffness = 0.5
gradient_stiffness = 1
coupling = 0.2

[boundary]
u = identity
u_region = x- x+
nu = split_x
nu_value = 0 0 0
nu_value2 = 0.1 0 0
nu_region = x- x+
initial_nu = constant
initial_value = 0 0 0

[minimize]
method = cg
max_iters = 4000
grad_tol = 1e-9

[checks]
admissibility = on
weak_el = on
strong = on
configurational = on
eulerian = on

[output]
dir = out/microcracked-vector
)";

const char* kQuasicrystal = R"([scenario]
name = quasicrystal-shear
description = Quasicrystal with phonon-phason coupling under a simple shear imposed on two opposite faces; phason field free.
seed = 14

[grid]
dim = 3
resolution = 16
lower = 0 0 0
upper = 1 1 1

[manifold]
name = euclidean3

[density]
name = quasicrystal
a = 1
b = 1
c = 1
offset = 0.5
K = 1
coupling = 0.1

[boundary]
u = simple_shear
u_amount = 0.1
u_region = z- z+
nu = none
initial_nu = constant
initial_value = 0 0 0

[minimize]
method = cg
max_iters = 4000
grad_tol = 1e-9

[checks]
admissibility = on
weak_el = on
strong = on
rotational = on
configurational = on
eulerian = on
growth = on
growth_samples = 10000

[output]
dir = out/quasicrystal-shear
)";

const char* kSmectic = R"([scenario]
name = smectic-layers
description = Smectic A with undulating layer data on the boundary; the descriptor is the layer coordinate and the normal.
seed = 15

[grid]
dim = 3
resolution = 16
lower = 0 0 0
upper = 1 1 1

[manifold]
name = smectic

[density]
name = smectic_a
k1 = 1
k2 = 1

[boundary]
u = identity
u_region = all
nu = layers
nu_region = all
layer_amplitude = 0.05
initial_nu = layers

[minimize]
method = cg
max_iters = 4000
grad_tol = 1e-8

[checks]
admissibility = on
weak_el = on
strong = on
rotational = on
configurational = on
eulerian = on

[output]
dir = out/smectic-layers
)";

const char* kPorous = R"([scenario]
name = porous-interval
description = Scalar volume fraction in [0, 1] with a two-well energy whose wells drift along x.
seed = 16

[grid]
dim = 3
resolution = 16
lower = 0 0 0
upper = 1 1 1

[manifold]
name = interval
lo = 0
hi = 1

[density]
name = ginzburg_landau
varpi = 0.05
well_component = 0
well_a = 0.2
well_slope = 0.1
well_b = 0.8
well_height = 1

[boundary]
u = identity
u_region = all
nu = split_x
nu_value = 0.2
nu_value2 = 0.8
nu_region = x- x+
initial_nu = split_x
initial_noise = 0.02

[minimize]
method = cg
max_iters = 4000
grad_tol = 1e-8

[checks]
admissibility = on
weak_el = on
strong = on
rotational = on
configurational = on
eulerian = on

[output]
dir = out/porous-interval
)";

const char* kSpinRelaxed = R"([scenario]
name = spin-relaxed-demo
description = Hedgehog data compared with a smoothed field plus a unit line defect running from the core to the boundary.
seed = 17

[grid]
dim = 3
resolution = 16
lower = -1 -1 -1
upper = 1 1 1

[manifold]
name = sphere

[density]
name = dirichlet_sphere

[boundary]
u = identity
u_region = all
nu = radial
nu_region = all
initial_nu = radial

[minimize]
method = cg
max_iters = 4000
grad_tol = 1e-8

[checks]
admissibility = on
defects = on
expected_charge = 1
relaxed_energy = on
relaxed_line = 0 0 0  0 0 -1
relaxed_multiplicity = 1
relaxed_pole = 0 0 -1.5
weak_el = on

[output]
dir = out/spin-relaxed-demo
)";

}  // namespace

const std::vector<Preset>& preset_catalogue() {
  static const std::vector<Preset> list = [] {
    std::vector<Preset> out;
    for (const char* text : {kHedgehog, kDegree, kMicrocracked, kQuasicrystal, kSmectic, kPorous, kSpinRelaxed}) {
      ScenarioConfig c = parse_config(text);
      out.push_back({c.name, c.description, text});
    }
    return out;
  }();
  return list;
}

std::vector<ScenarioConfig> presets() {
  std::vector<ScenarioConfig> out;
  for (const auto& p : preset_catalogue()) {
    ScenarioConfig c = parse_config(p.text);
    c.validate();
    out.push_back(std::move(c));
  }
  return out;
}

bool is_preset(const std::string& name) {
  for (const auto& p : preset_catalogue()) {
    if (p.name == name) return true;
  }
  return false;
}

ScenarioConfig preset_config(const std::string& name) {
  for (const auto& p : preset_catalogue()) {
    if (p.name == name) return parse_config(p.text);
  }
  throw Error(ErrorCode::ConfigError, "unknown preset '" + name + "'");
}

}  // namespace cbody
