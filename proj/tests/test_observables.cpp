#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nvss/observables.hpp"
#include "nvss/quadrature.hpp"

using namespace nvss;

namespace {

PolytropicAnsatz energy_weighted(double k, double mu, double E0,
                                 double amp = 1.0) {
  PolytropicAnsatz a;
  a.variant = PsiVariant::EnergyWeighted;
  a.k = k;
  a.mu = mu;
  a.E0 = E0;
  a.amplitude = amp;
  return a;
}

RadialProfile solved_baseline() {
  PolytropicAnsatz a = energy_weighted(0.0, 0.5, std::sqrt(0.9));
  SolverNumerics num;
  RadialProfile p = integrate_steady_state(std::log(0.5 * std::sqrt(0.9)), a,
                                           num);
  extend_vacuum(p, *detect_radius(p, a, num));
  return p;
}

}  // namespace

TEST_CASE("density and pressures, hand-integrated at mu = 0") {
  // k = 0, E0 = 2, phi = 0:
  //   rho = 2 pi int_1^2 E^3 sqrt(E^2-1) dE = 2 pi (2 sqrt(3)^5/5 + 2 sqrt(3)^3/3)/2
  //   P   = (2/3) pi 3^(5/2)/5,  P_T = P,  source = rho - 3 P.
  PolytropicAnsatz a = energy_weighted(0.0, 0.0, 2.0);
  double s3 = std::numbers::sqrt3;
  double rho_ref = std::numbers::pi * (0.4 * std::pow(s3, 5) +
                                       (2.0 / 3.0) * std::pow(s3, 3));
  double P_ref = (2.0 / 3.0) * std::numbers::pi * std::pow(s3, 5) / 5.0;
  CHECK(compute_rho(1.0, 0.0, a) == doctest::Approx(rho_ref).epsilon(1e-9));
  PressurePair pp = compute_pressures(1.0, 0.0, a);
  CHECK(pp.radial == doctest::Approx(P_ref).epsilon(1e-9));
  CHECK(pp.tangential == doctest::Approx(P_ref).epsilon(1e-9));
  CHECK(compute_source(1.0, 0.0, a) ==
        doctest::Approx(rho_ref - 3.0 * P_ref).epsilon(1e-9));
}

TEST_CASE("pointwise observable identities at random parameters") {
  std::mt19937_64 rng(11);
  auto uniform = [&](double a, double b) {
    return a + (b - a) * double(rng() >> 11) * 0x1.0p-53;
  };
  for (int trial = 0; trial < 30; ++trial) {
    double k = uniform(-0.4, 2.0);
    PolytropicAnsatz a = energy_weighted(k, uniform(0.0, 2.0),
                                         uniform(0.5, 2.0), uniform(0.1, 3.0));
    double r = uniform(0.1, 3.0);
    double phi = std::log(uniform(0.2, 0.95) * a.E0);
    double rho = compute_rho(r, phi, a);
    PressurePair pp = compute_pressures(r, phi, a);
    double src = compute_source(r, phi, a);
    CHECK(pp.tangential ==
          doctest::Approx((k + 1.0) * pp.radial).epsilon(1e-11));
    CHECK(src ==
          doctest::Approx(rho - (2.0 * k + 3.0) * pp.radial).epsilon(1e-10));
  }
}

TEST_CASE("cumulative mass equals the field flux") {
  // Integrating the field equation: r^2 phi'(r) = int_0^r s^2 q ds, so the
  // stored cumulative source integral must match the solved flux at every node.
  RadialProfile p = solved_baseline();
  AnsatzKernels kernels(p.ansatz);
  ObservableProfile obs = build_observables(p, kernels);
  double vmax = p.v_at(p.size() - 1);
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK(std::abs(obs.mass_cumulative[i] - p.v_at(i)) < 1e-8 * vmax);
  }
}

TEST_CASE("total mass against an independent adaptive quadrature") {
  RadialProfile p = solved_baseline();
  AnsatzKernels kernels(p.ansatz);
  double M = total_mass(p, kernels);
  QuadResult q = integrate_gk(
      [&](double r) {
        double rho = compute_rho(r, p.field_at(r).phi, kernels);
        return r * r * rho;
      },
      1e-12, *p.support_radius, {1e-12, 1e-10, 400});
  CHECK(q.converged);
  CHECK(M == doctest::Approx(q.value).epsilon(1e-8));
}

TEST_CASE("total energy exceeds the mass by the field energy") {
  RadialProfile p = solved_baseline();
  AnsatzKernels kernels(p.ansatz);
  double M = total_mass(p, kernels);
  double E = total_energy(p, M);
  CHECK(E > M);
  // Tail dominates: the exterior contributes C^2 / R exactly.
  double tail = p.exterior->C * p.exterior->C / p.exterior->R;
  CHECK(E - M > tail);
}

TEST_CASE("momentum density against a Cartesian-formulation quadrature") {
  // n(r) = e^{3 phi} int d^3p Psi(E) F^k with E = e^phi sqrt(1 + |p|^2) and
  // F = e^{2 phi} r^2 |p_perp|^2.  The angular integral is closed form:
  // 4 pi for k = 0 and (8 pi / 3) e^{2 phi} r^2 p^2 for k = 1, leaving a 1-D
  // radial-momentum integral evaluated here on its own, unmapped domain.
  for (double k : {0.0, 1.0}) {
    PolytropicAnsatz a = energy_weighted(k, 1.0, 1.0);
    double r = 1.3, phi = std::log(0.55);
    double u = std::exp(phi);
    double pmax = std::sqrt(a.E0 * a.E0 / (u * u) - 1.0);
    double angular = k == 0.0 ? 4.0 * std::numbers::pi
                              : (8.0 * std::numbers::pi / 3.0) * u * u * r * r;
    QuadResult q = integrate_gk(
        [&](double pm) {
          double E = u * std::sqrt(1.0 + pm * pm);
          double extra = k == 0.0 ? 1.0 : pm * pm;
          return pm * pm * extra * a.psi(E);
        },
        0.0, pmax, {1e-15, 1e-12, 400});
    double ref = std::exp(3.0 * phi) * angular * q.value;
    CHECK(momentum_density(r, phi, a) == doctest::Approx(ref).epsilon(1e-6));
  }
}

TEST_CASE("residuals sit far below their scales on the baseline") {
  RadialProfile p = solved_baseline();
  AnsatzKernels kernels(p.ansatz);
  ObservableProfile obs = build_observables(p, kernels);
  double fmax = 0.0, tmax = 0.0;
  for (double v : field_residual(p, kernels)) fmax = std::max(fmax, std::abs(v));
  for (double v : tov_residual(p, kernels)) tmax = std::max(tmax, std::abs(v));
  CHECK(fmax < 1e-8 * field_residual_scale(p, obs));
  CHECK(tmax < 1e-6 * tov_residual_scale(p, obs));
  CHECK(fmax > 0.0);  // a defect, not an identity
  CHECK(tmax > 0.0);
}

TEST_CASE("a priori bound on the total mass") {
  RadialProfile p = solved_baseline();
  AnsatzKernels kernels(p.ansatz);
  double M = total_mass(p, kernels);
  double k = p.ansatz.k, R = *p.support_radius;
  double bound = std::numbers::pi * beta_coeff(k, -0.5) *
                 kernels.g(k + 0.5, std::exp(p.phi0)) *
                 std::pow(R, 2.0 * k + 3.0) / (2.0 * k + 3.0);
  CHECK(M <= bound);
}
