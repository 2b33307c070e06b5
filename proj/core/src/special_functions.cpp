#include "nvss/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nvss/quadrature.hpp"

namespace nvss {

namespace detail {

double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma: argument must be > 0");
  static constexpr double c[9] = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  if (x < 0.5) {
    // Reflection keeps the Lanczos sum in its accurate range.
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) -
           log_gamma(1.0 - x);
  }
  double z = x - 1.0;
  double sum = c[0];
  for (int i = 1; i < 9; ++i) sum += c[i] / (z + i);
  double t = z + 7.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t +
         std::log(sum);
}

}  // namespace detail

double beta_coeff(double a, double b) {
  if (!(a > -1.0) || !(b > -1.0))
    throw std::domain_error("beta_coeff: exponents must exceed -1");
  return std::exp(detail::log_gamma(a + 1.0) + detail::log_gamma(b + 1.0) -
                  detail::log_gamma(a + b + 2.0));
}

namespace {

// h_m and g_m reduce, under E^2 = u^2 + (E0^2 - u^2) t, to
//   (D^{m+1}/2) int_0^1 t^m (1-t)^w f(t) dt,  D = E0^2 - u^2,
// with w the cutoff exponent and f smooth (the endpoint powers are split off
// analytically per variant, so relative accuracy survives D -> 0).
struct MappedKernel {
  const PolytropicAnsatz& ansatz;
  double u2, D;
  bool with_e2;  // g_m carries an extra factor E^2

  double operator()(double t) const {
    double E2 = u2 + D * t;
    double E = std::sqrt(E2);
    double f;
    switch (ansatz.variant) {
      case PsiVariant::EnergyWeighted:
        f = ansatz.amplitude * std::pow(D, ansatz.mu);
        break;
      case PsiVariant::PlainPowerLaw:
        f = ansatz.amplitude * std::pow(D / (ansatz.E0 + E), ansatz.mu) / E;
        break;
      case PsiVariant::Tabulated:
      default:
        f = ansatz.psi(E) / E;
        break;
    }
    return with_e2 ? f * E2 : f;
  }
};

double kernel_quadrature(double m, double u, const PolytropicAnsatz& ansatz,
                         bool with_e2) {
  if (!(m > -1.0)) throw std::domain_error("kernel order must exceed -1");
  if (!(u > 0.0)) throw std::domain_error("kernel argument must be positive");
  if (u >= ansatz.E0 || ansatz.amplitude == 0.0) return 0.0;
  double D = ansatz.E0 * ansatz.E0 - u * u;
  MappedKernel f{ansatz, u * u, D, with_e2};
  QuadResult q = beta_weighted_integral(m, ansatz.cutoff_exponent(), f);
  if (!q.converged)
    throw std::runtime_error("kernel quadrature did not converge");
  return 0.5 * std::pow(D, m + 1.0) * q.value;
}

}  // namespace

double eval_h(double m, double u, const PolytropicAnsatz& ansatz) {
  return kernel_quadrature(m, u, ansatz, false);
}

double eval_g(double m, double u, const PolytropicAnsatz& ansatz) {
  return kernel_quadrature(m, u, ansatz, true);
}

double eval_h_derivative(double m, double u, const PolytropicAnsatz& ansatz) {
  if (!(m > 0.0))
    throw std::domain_error("eval_h_derivative: order must be positive");
  return -2.0 * m * u * eval_h(m - 1.0, u, ansatz);
}

double closed_form_h(double m, double u, double mu, double E0) {
  if (u > E0) throw std::domain_error("closed_form_h: argument above cutoff");
  if (!(mu > -1.0) || !(m > -1.0))
    throw std::domain_error("closed_form_h: exponents must exceed -1");
  double D = E0 * E0 - u * u;
  if (D <= 0.0) return 0.0;
  return 0.5 * beta_coeff(mu, m) * std::pow(D, mu + m + 1.0);
}

AnsatzKernels::AnsatzKernels(const PolytropicAnsatz& ansatz)
    : ansatz_(ansatz),
      closed_form_(ansatz.variant == PsiVariant::EnergyWeighted) {
  ansatz_.validate();
}

double AnsatzKernels::h(double m, double u) const {
  if (u >= ansatz_.E0 || ansatz_.amplitude == 0.0) return 0.0;
  if (closed_form_)
    return ansatz_.amplitude * closed_form_h(m, u, ansatz_.mu, ansatz_.E0);
  return eval_h(m, u, ansatz_);
}

double AnsatzKernels::g(double m, double u) const {
  if (u >= ansatz_.E0 || ansatz_.amplitude == 0.0) return 0.0;
  if (closed_form_) return h(m + 1.0, u) + u * u * h(m, u);
  return eval_g(m, u, ansatz_);
}

double AnsatzKernels::dh(double m, double u) const {
  if (u >= ansatz_.E0 || ansatz_.amplitude == 0.0) return 0.0;
  return -2.0 * m * u * h(m - 1.0, u);
}

}  // namespace nvss
