#pragma once

// Discrete surrogates of weak-diffeomorphism conditions (orientation and the
// Ciarlet-Necas injectivity inequality) and topological diagnostics for
// S^2-valued descriptors.
//
// Face fluxes of D_nu are computed as signed solid angles: the flux of D_nu
// through a face equals the signed area of the face's image under nu, and the
// image is taken as the two geodesic triangles obtained by splitting the face
// along the diagonal from its lowest corner. Fluxes through shared faces cancel
// exactly, so cell charges are exact integers.

#include <array>
#include <vector>

#include "cbody/fields.hpp"

namespace cbody {

struct OrientationReport {
  double min_det = 0.0;
  int violating_cells = 0;
};

OrientationReport check_orientation(const FieldState& state, const Grid& grid);

struct CiarletNecasReport {
  double image_volume = 0.0;   // voxel estimate of vol(u(B_0))
  double integral_det = 0.0;   // midpoint quadrature of det F
  double slack = 0.0;          // image_volume - integral_det
  double tolerance = 0.0;      // rel_tol * |integral_det|
  double voxel = 0.0;
  bool pass = false;           // slack >= -tolerance
};

/// Deformed cells are split into tetrahedra (triangles in 2D) and voxel
/// centers covered at least once are counted. voxel <= 0 selects half the
/// smallest grid spacing, shrunk by the mean linear stretch (mean |det F|)^(1/d)
/// when the image is contracted.
CiarletNecasReport check_ciarlet_necas(const FieldState& state, const Grid& grid, double voxel = 0.0,
                                       double rel_tol = 0.02);

struct AdmissibilityReport {
  double min_det = 0.0;
  int violating_cells = 0;
  double ciarlet_necas_slack = 0.0;
  double tolerance = 0.0;
  double voxel = 0.0;
  bool injectivity_pass = false;  // min_det > 0 and slack >= -tolerance
};

AdmissibilityReport check_admissibility(const FieldState& state, const Grid& grid, double voxel = 0.0,
                                        double rel_tol = 0.02);

/// Cell-centered D_nu^i = 1/2 eps_ijk nu . (d_j nu x d_k nu) with nu the
/// normalized cell average and the columns of N projected onto T_nu S^2.
/// Throws Error(WrongManifold) unless nu is S^2-valued on a 3D grid.
std::vector<Vec3> d_field(const FieldState& state, const Grid& grid);

struct Charge {
  int cell = 0;       // owning cell
  int charge = 0;
  double flux_over_4pi = 0.0;
};

struct DefectReport {
  std::vector<Vec3> d_field;
  std::vector<Charge> charges;
  int total_charge = 0;
  double total_flux = 0.0;
  double tolerance = 0.0;  // |total_flux - 4 pi total_charge| bound that was verified
};

/// Fluxes through the boundaries of box_size^3 blocks of active cells.
/// threshold: a block whose |flux / 4pi| reaches it is reported.
DefectReport defect_charges(const FieldState& state, const Grid& grid, int box_size = 1, double threshold = 0.5);

/// Closed coordinate box given by node index ranges lo[a] < hi[a].
struct BoxSurface {
  std::array<int, 3> lo{};
  std::array<int, 3> hi{};
};

struct DegreeResult {
  int degree = 0;
  double raw = 0.0;  // flux / 4pi before rounding
};

/// Throws Error(SurfaceOutsideDomain) if the box leaves the grid or contains an inactive cell.
DegreeResult degree_on_surface(const FieldState& state, const Grid& grid, const BoxSurface& box);

/// Signed area of the geodesic triangle (a, b, c) on S^2, in (-2 pi, 2 pi].
double solid_angle(const Vec3& a, const Vec3& b, const Vec3& c);

}  // namespace cbody
