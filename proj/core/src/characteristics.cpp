#include "nvss/characteristics.hpp"

#include <cmath>
#include <stdexcept>

namespace nvss {

namespace {

double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

}  // namespace

Invariants invariants_cartesian(const Vec3& x, const Vec3& p, double phi_val) {
  double e_phi = std::exp(phi_val);
  Vec3 c = cross(x, p);
  return {e_phi * std::sqrt(1.0 + dot(p, p)), e_phi * e_phi * dot(c, c)};
}

OrbitState to_reduced(const Vec3& x, const Vec3& p, double phi_val) {
  double r = std::sqrt(dot(x, x));
  if (!(r > 0.0)) throw std::invalid_argument("to_reduced: |x| must be positive");
  double e_phi = std::exp(phi_val);
  double xp = dot(x, p);
  OrbitState s;
  s.r = r;
  s.w = e_phi * xp / r;
  s.F = e_phi * e_phi * (dot(x, x) * dot(p, p) - xp * xp);
  return s;
}

double reduced_energy(const OrbitState& state, double phi_val) {
  double e2 = std::exp(2.0 * phi_val);
  return 0.5 * state.w * state.w + 0.5 * state.F / (state.r * state.r) +
         0.5 * e2;
}

Trajectory integrate_orbit(const RadialProfile& profile,
                           const OrbitState& initial, double span,
                           const OrbitOptions& opt) {
  if (!(initial.r > 0.0) || !(initial.F > 0.0))
    throw std::invalid_argument("integrate_orbit: need r > 0 and F > 0");
  if (!(span > 0.0) || opt.samples < 2)
    throw std::invalid_argument("integrate_orbit: bad span or sample count");

  const double F = initial.F;  // constant parameter, never integrated
  auto rhs = [&](double, const std::array<double, 2>& y,
                 std::array<double, 2>& dy) {
    double r = y[0];
    FieldValue f = profile.field_at(r);
    dy[0] = y[1];
    dy[1] = F / (r * r * r) - std::exp(2.0 * f.phi) * f.dphi;
  };

  OdeOptions ode;
  ode.abs_tol = opt.abs_tol;
  ode.rel_tol = opt.rel_tol;
  Dopri5<2> stepper({initial.r, initial.w}, 0.0, ode);

  Trajectory t;
  t.s.reserve(opt.samples);
  t.r.reserve(opt.samples);
  t.w.reserve(opt.samples);
  t.energy.reserve(opt.samples);
  for (int i = 0; i < opt.samples; ++i) {
    double s = span * double(i) / double(opt.samples - 1);
    stepper.advance_to(rhs, s);
    double r = stepper.y()[0], w = stepper.y()[1];
    OrbitState st{r, w, F};
    t.s.push_back(s);
    t.r.push_back(r);
    t.w.push_back(w);
    t.energy.push_back(reduced_energy(st, profile.field_at(r).phi));
  }
  return t;
}

double eval_density_reduced(const OrbitState& state,
                            const RadialProfile& profile,
                            const PolytropicAnsatz& ansatz) {
  double phi = profile.field_at(state.r).phi;
  double e2 = std::exp(2.0 * phi);
  double E = std::sqrt(state.w * state.w + state.F / (state.r * state.r) + e2);
  if (E > ansatz.E0) return 0.0;
  return ansatz.psi(E) * std::pow(state.F, ansatz.k);
}

double eval_density(const Vec3& x, const Vec3& p, const RadialProfile& profile,
                    const PolytropicAnsatz& ansatz) {
  double r = std::sqrt(dot(x, x));
  if (!(r > 0.0)) throw std::invalid_argument("eval_density: |x| must be positive");
  double phi = profile.field_at(r).phi;
  Invariants inv = invariants_cartesian(x, p, phi);
  if (inv.E > ansatz.E0) return 0.0;
  return ansatz.psi(inv.E) * std::pow(inv.F, ansatz.k);
}

}  // namespace nvss
