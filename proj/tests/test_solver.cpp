#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nvss/solver.hpp"

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

PolytropicAnsatz baseline() {
  return energy_weighted(0.0, 0.5, std::sqrt(0.9));
}

double baseline_phi0() { return std::log(0.5 * std::sqrt(0.9)); }

}  // namespace

TEST_CASE("field right side, hand-integrated at mu = 0") {
  // k = 0, E0 = 2, phi = 0: pi c_{0,-1/2} r^2 h_{1/2}(1) = 2 pi sqrt(3) r^2.
  PolytropicAnsatz a = energy_weighted(0.0, 0.0, 2.0);
  CHECK(field_rhs(1.0, 0.0, a) ==
        doctest::Approx(2.0 * std::numbers::pi * std::numbers::sqrt3)
            .epsilon(1e-9));
  CHECK(field_rhs(2.0, 0.0, a) ==
        doctest::Approx(8.0 * std::numbers::pi * std::numbers::sqrt3)
            .epsilon(1e-9));
}

TEST_CASE("seed interval reproduces the central Taylor series") {
  // Near r = 0 with k = 0: phi = phi0 + s(phi0) r^2 / 6 + O(r^4), where
  // s(phi0) is the field right side with the r^2 factor removed.
  PolytropicAnsatz a = baseline();
  SolverNumerics num;
  RadialProfile seed = picard_seed(baseline_phi0(), a, num);
  double s0 = field_rhs(1.0, baseline_phi0(), a);
  for (double frac : {0.2, 0.5, 1.0}) {
    double r = frac * seed.delta;
    FieldValue f = seed.field_at(r);
    double taylor = baseline_phi0() + s0 * r * r / 6.0;
    CHECK(f.phi == doctest::Approx(taylor).epsilon(1e-10));
    CHECK(f.dphi == doctest::Approx(s0 * r / 3.0).epsilon(1e-6));
  }
}

TEST_CASE("degenerate start is the constant vacuum solution") {
  PolytropicAnsatz a = baseline();
  SolverNumerics num;
  RadialProfile p = integrate_steady_state(std::log(a.E0) + 0.1, a, num);
  CHECK(p.stop == StopReason::DegenerateVacuum);
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK(p.phi[i] == p.phi0);
    CHECK(p.dphi[i] == 0.0);
    CHECK(field_rhs(std::max(p.grid[i], 1e-3), p.phi[i], a) == 0.0);
  }
}

TEST_CASE("baseline support radius regression and self-convergence") {
  PolytropicAnsatz a = baseline();
  SolverNumerics num;
  RadialProfile p = integrate_steady_state(baseline_phi0(), a, num);
  std::optional<double> R = detect_radius(p, a, num);
  REQUIRE(R.has_value());
  CHECK(*R == doctest::Approx(6.0627838).epsilon(1e-6));

  SolverNumerics tight = num;
  tight.ode_abs_tol = 1e-12;
  tight.ode_rel_tol = 1e-10;
  RadialProfile pt = integrate_steady_state(baseline_phi0(), a, tight);
  std::optional<double> Rt = detect_radius(pt, a, tight);
  REQUIRE(Rt.has_value());
  CHECK(std::abs(*R - *Rt) < 1e-7 * *R);
}

TEST_CASE("the flux r^2 phi' is nonnegative and nondecreasing") {
  PolytropicAnsatz a = baseline();
  SolverNumerics num;
  RadialProfile p = integrate_steady_state(baseline_phi0(), a, num);
  double prev = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double v = p.v_at(i);
    CHECK(v >= prev - 1e-12 * std::max(1.0, prev));
    prev = v;
  }
}

TEST_CASE("step controllers agree within tolerance") {
  PolytropicAnsatz a = baseline();
  SolverNumerics pi_num, i_num;
  i_num.controller = StepController::I;
  RadialProfile pp = integrate_steady_state(baseline_phi0(), a, pi_num);
  RadialProfile pi = integrate_steady_state(baseline_phi0(), a, i_num);
  double tol = 10.0 * std::max(pi_num.ode_rel_tol, pi_num.ode_abs_tol);
  for (double r : {0.5, 1.0, 2.0, 4.0}) {
    CHECK(std::abs(pp.field_at(r).phi - pi.field_at(r).phi) < tol);
  }
}

TEST_CASE("vacuum exterior matches the interior at the support boundary") {
  PolytropicAnsatz a = baseline();
  SolverNumerics num;
  RadialProfile p = integrate_steady_state(baseline_phi0(), a, num);
  std::optional<double> R = detect_radius(p, a, num);
  REQUIRE(R.has_value());
  ExteriorField ext = extend_vacuum(p, *R);
  CHECK(ext.C > 0.0);
  // phi(r) = phi_inf - C / r outside: continuous value and derivative at R.
  FieldValue at_R = p.field_at(*R * (1.0 - 1e-13));
  CHECK(ext.phi_inf - ext.C / *R == doctest::Approx(at_R.phi).epsilon(1e-9));
  FieldValue outside = p.field_at(2.0 * *R);
  CHECK(outside.phi ==
        doctest::Approx(ext.phi_inf - ext.C / (2.0 * *R)).epsilon(1e-12));
  CHECK(outside.dphi ==
        doctest::Approx(ext.C / (4.0 * *R * *R)).epsilon(1e-12));
}

TEST_CASE("asymptotic flattening sends phi_inf to zero and rescales E0") {
  PolytropicAnsatz a = baseline();
  SolverNumerics num;
  RadialProfile p = integrate_steady_state(baseline_phi0(), a, num);
  ExteriorField ext = extend_vacuum(p, *detect_radius(p, a, num));
  FlattenedSteadyState flat = asymptotic_flatten(p, ext.phi_inf);
  REQUIRE(flat.profile.exterior.has_value());
  CHECK(flat.profile.exterior->phi_inf == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(flat.profile.ansatz.E0 ==
        doctest::Approx(std::exp(-ext.phi_inf) * a.E0).epsilon(1e-14));
  CHECK(flat.density_factor ==
        doctest::Approx(std::exp(4.0 * ext.phi_inf)).epsilon(1e-14));
  // The shifted field still solves the equation: same flux for the rescaled
  // ansatz, checked through the right side at a few radii.
  for (double r : {0.5, 1.5, 3.0}) {
    double lhs = field_rhs(r, p.field_at(r).phi, a);
    double rhs = field_rhs(r, flat.profile.field_at(r).phi,
                           flat.profile.ansatz);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
  }
}

TEST_CASE("numerics validation rejects bad inputs") {
  SolverNumerics num;
  num.ode_rel_tol = -1.0;
  CHECK_THROWS_AS(num.validate(), std::invalid_argument);
  num = SolverNumerics{};
  num.max_radius = 0.0;
  CHECK_THROWS_AS(num.validate(), std::invalid_argument);
  PolytropicAnsatz a;
  a.k = -0.6;
  CHECK_THROWS_AS(a.validate(), std::invalid_argument);
  a = PolytropicAnsatz{};
  a.mu = -1.5;
  CHECK_THROWS_AS(a.validate(), std::invalid_argument);
  a = PolytropicAnsatz{};
  a.E0 = 0.0;
  CHECK_THROWS_AS(a.validate(), std::invalid_argument);
}
