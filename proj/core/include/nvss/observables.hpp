#pragma once

#include <optional>
#include <vector>

#include "nvss/solver.hpp"

namespace nvss {

struct ObservableProfile {
  std::vector<double> rho;
  std::vector<double> pressure;
  std::vector<double> pressure_t;
  std::vector<double> source;           // e^{4 phi} times the matter density
  std::vector<double> mass_cumulative;  // int_0^r s^2 (rho - (2k+3) P) ds
  bool center_regularized = false;      // k < 0: index 0 holds lim r^2 * value
};

double compute_rho(double r, double phi_val, const PolytropicAnsatz& ansatz);
struct PressurePair {
  double radial;
  double tangential;
};
PressurePair compute_pressures(double r, double phi_val,
                               const PolytropicAnsatz& ansatz);
double compute_source(double r, double phi_val, const PolytropicAnsatz& ansatz);

// Kernel-evaluator overloads used on whole profiles.
double compute_rho(double r, double phi_val, const AnsatzKernels& kernels);
PressurePair compute_pressures(double r, double phi_val,
                               const AnsatzKernels& kernels);
double compute_source(double r, double phi_val, const AnsatzKernels& kernels);

ObservableProfile build_observables(const RadialProfile& profile,
                                    const AnsatzKernels& kernels);

// M = int r^2 rho dr over the support (solid-angle factor absorbed; see the
// mass_includes_4pi output flag).  Error estimated by embedded-rule
// comparison per cell; throws std::runtime_error if the support is open and
// the tail has not converged at max_radius.
double total_mass(const RadialProfile& profile, const AnsatzKernels& kernels);

// E = M + int_0^inf r^2 phi'^2 dr, exterior tail C^2/R in closed form.
double total_energy(const RadialProfile& profile, double M);

// N = int r^2 n(r) dr with n(r) = e^{3 phi} int dp Psi(E) F^k evaluated by
// nested (|p|, angle) quadrature at each radial quadrature point.
double particle_number(const RadialProfile& profile,
                       const PolytropicAnsatz& ansatz);

// Density of particles at one radius (the momentum-space integral above);
// exposed for the reduced-vs-Cartesian quadrature cross checks.
double momentum_density(double r, double phi_val,
                        const PolytropicAnsatz& ansatz);

// Per-cell defect residuals measured from the stored node arrays alone, so
// `verify` can recompute them from a CSV round trip.  Entry i covers
// [grid[i], grid[i+1]]; cells inside the seed interval or shorter than
// 0.3 * h_nominal (the near-boundary ladder, where the defect quotient is
// roundoff-dominated) are skipped and reported as 0.
//
// Field residual: (dv - int r^2 q dr) / (h r_mid^2), the cell average of
// (1/r^2) v' - (rho - (2k+3) P).
std::vector<double> field_residual(const RadialProfile& profile,
                                   const AnsatzKernels& kernels);
// Momentum-balance residual: (dP - int [-phi' q + (2k/r) P] dr) / h.
std::vector<double> tov_residual(const RadialProfile& profile,
                                 const AnsatzKernels& kernels);

// Scale factors for the residual acceptance thresholds: max rho, and
// max rho |phi'| over nodes.
double field_residual_scale(const RadialProfile& profile,
                            const ObservableProfile& obs);
double tov_residual_scale(const RadialProfile& profile,
                          const ObservableProfile& obs);

struct SteadyStateSummary {
  std::optional<double> R;
  double M = 0.0;
  double energy_total = 0.0;
  double particle_number = 0.0;
  double phi0 = 0.0;
  std::optional<double> phi_inf;
  bool finite_radius_detected = false;
  bool window_ok = false;
  double alpha0 = 0.0;  // closed-form limit
  double beta0 = 0.0;
};

}  // namespace nvss
