#pragma once

#include <array>
#include <vector>

#include "nvss/solver.hpp"

namespace nvss {

using Vec3 = std::array<double, 3>;

struct Invariants {
  double E;  // e^phi sqrt(1 + |p|^2)
  double F;  // e^{2 phi} |x cross p|^2
};

Invariants invariants_cartesian(const Vec3& x, const Vec3& p, double phi_val);

struct OrbitState {
  double r;  // > 0
  double w;  // e^phi x.p/|x|
  double F;  // > 0, conserved
};

OrbitState to_reduced(const Vec3& x, const Vec3& p, double phi_val);

// Etilde = w^2/2 + F/(2 r^2) + e^{2 phi}/2 = E^2/2.
double reduced_energy(const OrbitState& state, double phi_val);

struct Trajectory {
  std::vector<double> s;
  std::vector<double> r;
  std::vector<double> w;
  std::vector<double> energy;  // Etilde along the orbit
};

struct OrbitOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-11;
  int samples = 256;  // output nodes over the span
};

// dr/ds = w, dw/ds = F/r^3 - e^{2 phi} phi'; F is a constant parameter, never
// integrated.  The field comes from profile.field_at (Hermite interior,
// closed-form vacuum exterior), so the force is consistent with the stored
// derivative nodes.
Trajectory integrate_orbit(const RadialProfile& profile,
                           const OrbitState& initial, double span,
                           const OrbitOptions& opt = {});

// Psi(E) F^k with (E, F) from invariants_cartesian and phi interpolated from
// the profile; zero for E > E0.
double eval_density(const Vec3& x, const Vec3& p, const RadialProfile& profile,
                    const PolytropicAnsatz& ansatz);
double eval_density_reduced(const OrbitState& state,
                            const RadialProfile& profile,
                            const PolytropicAnsatz& ansatz);

}  // namespace nvss
