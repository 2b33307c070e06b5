#pragma once

#include <optional>
#include <vector>

#include "nvss/ansatz.hpp"
#include "nvss/ode.hpp"
#include "nvss/special_functions.hpp"

namespace nvss {

struct SolverNumerics {
  double seed_interval = 0.0;  // 0: auto, 1e-3 * min(1, 1/E0)
  double picard_tolerance = 1e-13;
  double ode_abs_tol = 1e-10;
  double ode_rel_tol = 1e-8;
  double max_radius = 1e3;
  double radius_tolerance = 1e-8;  // relative in e^phi
  StepController controller = StepController::PI;

  void validate() const;  // throws std::invalid_argument
};

enum class StopReason { SupportBoundary, MaxRadius, DegenerateVacuum };

struct ExteriorField {
  double R = 0.0;        // matching radius
  double C = 0.0;        // r^2 phi' on the exterior
  double phi_inf = 0.0;  // field value at infinity
};

struct FieldValue {
  double phi;
  double dphi;
};

// Solved field on [0, r_last]: Picard seed nodes on [0, delta], a uniform grid
// of spacing h_nominal outward, and a geometric ladder of extra nodes toward
// the support boundary when one is found.  Between nodes the field is the
// cubic Hermite through (phi, dphi); beyond the support it is the closed-form
// vacuum law once extend_vacuum has run.
struct RadialProfile {
  std::vector<double> grid;
  std::vector<double> phi;
  std::vector<double> dphi;
  double phi0 = 0.0;
  PolytropicAnsatz ansatz;
  SolverNumerics numerics;

  double delta = 0.0;      // seed interval actually used
  double h_nominal = 0.0;  // uniform grid spacing
  StopReason stop = StopReason::MaxRadius;
  std::optional<double> support_radius;
  std::optional<ExteriorField> exterior;

  std::size_t size() const { return grid.size(); }
  FieldValue field_at(double r) const;
  double v_at(std::size_t i) const { return grid[i] * grid[i] * dphi[i]; }
};

// Right side of the v-equation, v = r^2 phi':
// pi c_{k,-1/2} r^{2k+2} e^{2 phi} h_{k+1/2}(e^phi).
double field_rhs(double r, double phi_val, const PolytropicAnsatz& ansatz);
double field_rhs(double r, double phi_val, const AnsatzKernels& kernels);

// Fixed point of the central integral operator on [0, delta]; on failure of
// the contraction test delta is halved, up to 20 times.
RadialProfile picard_seed(double phi0, const PolytropicAnsatz& ansatz,
                          const SolverNumerics& numerics);

RadialProfile integrate_steady_state(double phi0, const PolytropicAnsatz& ansatz,
                                     const SolverNumerics& numerics);

// Smallest r where E0 - e^phi <= radius_tolerance * E0; absent when the
// integration ran to max_radius below the threshold.
std::optional<double> detect_radius(const RadialProfile& profile,
                                    const PolytropicAnsatz& ansatz,
                                    const SolverNumerics& numerics);

// Attaches the closed-form vacuum exterior at R and returns it.
ExteriorField extend_vacuum(RadialProfile& profile, double R);

struct FlattenedSteadyState {
  RadialProfile profile;      // shifted field and rescaled ansatz
  double density_factor;      // e^{4 phi_inf}, multiplies the particle density
};

FlattenedSteadyState asymptotic_flatten(const RadialProfile& profile,
                                        double phi_inf);

// Output-grid spacing used by integrate_steady_state, coupled to the ode
// relative tolerance so grid-reconstruction error tracks solver error.
double nominal_grid_spacing(const SolverNumerics& numerics);

}  // namespace nvss
