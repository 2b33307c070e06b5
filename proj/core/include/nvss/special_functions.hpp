#pragma once

#include "nvss/ansatz.hpp"

namespace nvss {

// Gamma(a+1) Gamma(b+1) / Gamma(a+b+2) for a, b > -1; throws std::domain_error
// outside that range.
double beta_coeff(double a, double b);

// h_m(u) = int_u^inf Psi(E) (E^2 - u^2)^m dE, by adaptive quadrature for every
// variant (the integrand vanishes above the cutoff so the range is [u, E0]).
// Requires m > -1 on the quadrature path and u > 0.
double eval_h(double m, double u, const PolytropicAnsatz& ansatz);

// g_m(u) = int_u^inf Psi(E) E^2 (E^2 - u^2)^m dE = h_{m+1}(u) + u^2 h_m(u);
// evaluated as a single quadrature.
double eval_g(double m, double u, const PolytropicAnsatz& ansatz);

// d/du h_m(u) = -2 m u h_{m-1}(u); requires m > 0.
double eval_h_derivative(double m, double u, const PolytropicAnsatz& ansatz);

// Closed form for the unit-amplitude energy-weighted variant:
// (1/2) beta_coeff(mu, m) (E0^2 - u^2)_+^(mu+m+1).
double closed_form_h(double m, double u, double mu, double E0);

// Kernel evaluator used by the solver and observables.  For the
// energy-weighted variant it scales the closed form (exact, smooth in u, so
// the ODE error estimator never sees quadrature noise); otherwise it falls
// through to the adaptive quadrature above.
class AnsatzKernels {
 public:
  explicit AnsatzKernels(const PolytropicAnsatz& ansatz);

  double h(double m, double u) const;
  double g(double m, double u) const;
  double dh(double m, double u) const;  // d/du
  const PolytropicAnsatz& ansatz() const { return ansatz_; }

 private:
  PolytropicAnsatz ansatz_;
  bool closed_form_;
};

namespace detail {
// Lanczos (g = 7, 9 terms) log-Gamma for x > 0.
double log_gamma(double x);
}  // namespace detail

}  // namespace nvss
