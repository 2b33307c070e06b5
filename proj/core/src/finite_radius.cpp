#include "nvss/finite_radius.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nvss {

WindowCheck check_window(double mu, double k, double E0) {
  WindowCheck w;
  double denom = mu + k + 2.5;
  w.lower = (2.0 * mu + 1.0) / denom;
  w.upper = (2.0 * mu + 2.0 * k + 3.0) / denom;
  double e2 = E0 * E0;
  w.margin_lower = e2 - w.lower;
  w.margin_upper = w.upper - e2;
  w.ok = (mu > -1.0) && (k > -0.5) && w.margin_lower > 0.0 &&
         w.margin_upper > 0.0;
  return w;
}

double alpha_limit(double mu, double k) {
  if (!(mu > -1.0) || !(k > -0.5))
    throw std::domain_error("alpha_limit: exponents outside admissible range");
  return 1.0 / (mu + k + 2.5);
}

double beta_limit(double mu, double k, double E0) {
  if (!(mu > -1.0) || !(k > -0.5))
    throw std::domain_error("beta_limit: exponents outside admissible range");
  return -E0 * E0 * (mu + k + 2.5) + 2.0 * mu + 2.0 * k + 3.0;
}

FiniteRadiusDiagnostics build_diagnostics(const RadialProfile& profile,
                                          const ObservableProfile& obs,
                                          const AnsatzKernels& kernels) {
  const PolytropicAnsatz& a = kernels.ansatz();
  const double k = a.k, E0 = a.E0, logE0 = std::log(E0);
  const std::size_t n = profile.size();
  FiniteRadiusDiagnostics d;
  d.alpha0_theory = alpha_limit(a.mu, k);
  d.beta0_theory = beta_limit(a.mu, k, E0);
  d.eta.resize(n);
  d.q.resize(n);
  d.m = obs.mass_cumulative;
  d.x.resize(n);
  d.y.resize(n);
  d.alpha.resize(n);
  d.beta.resize(n);
  d.beta_middle.resize(n);
  d.beta_mb.resize(n);
  d.valid.assign(n, 1);

  for (std::size_t i = 0; i < n; ++i) {
    double r = profile.grid[i];
    double eta = logE0 - profile.phi[i];
    d.eta[i] = eta;
    d.q[i] = obs.rho[i] - (2.0 * k + 3.0) * obs.pressure[i];
    if (!(eta > 0.0)) {
      d.valid[i] = 0;
      d.x[i] = d.y[i] = d.alpha[i] = d.beta[i] = d.beta_middle[i] =
          d.beta_mb[i] = 0.0;
      continue;
    }
    d.x[i] = r > 0.0 ? d.m[i] / (r * eta) : 0.0;
    d.y[i] = obs.pressure[i] > 0.0
                 ? r * r * d.q[i] * d.q[i] / obs.pressure[i]
                 : 0.0;

    double u = std::exp(profile.phi[i]);
    double u2 = u * u;
    double eps = (E0 - u) * (E0 + u);
    if (eps < 1e-10 * E0 * E0) {
      // boundary-layer switch: closed-form limits of the 0/0 kernel ratios
      d.alpha[i] = d.alpha0_theory;
      d.beta[i] = d.beta0_theory;
      d.beta_middle[i] = 0.0;
      d.beta_mb[i] = -(2.0 * k + 3.0) * 0.5 *
                         (beta_coeff(a.mu, k + 0.5) / beta_coeff(a.mu, k + 1.5)) +
                     (2.0 * k + 1.0) *
                         (beta_coeff(a.mu, k - 0.5) / beta_coeff(a.mu, k + 0.5));
      continue;
    }
    double h_half = kernels.h(k + 0.5, u);
    double h_32 = kernels.h(k + 1.5, u);
    double g_half = kernels.g(k + 0.5, u);
    double g_mhalf = kernels.g(k - 0.5, u);
    if (h_half <= 0.0 || h_32 <= 0.0) {
      d.valid[i] = 0;
      d.alpha[i] = d.beta[i] = d.beta_middle[i] = d.beta_mb[i] = 0.0;
      continue;
    }
    d.alpha[i] = h_32 / ((2.0 * k + 3.0) * eta * u2 * h_half);
    double t1 = -(2.0 * k + 3.0) * eta * u2 * g_half / h_32;
    double t2 = -2.0 * (2.0 * k + 3.0) * eta * g_half / h_half;
    double t3 = 2.0 * (2.0 * k + 1.0) * eta * g_mhalf / h_half;
    d.beta[i] = t1 + t2 + t3;
    d.beta_middle[i] = t2;
    // coefficient that closes the y-flow under the radial momentum balance
    d.beta_mb[i] = -(2.0 * k + 3.0) * eta * g_half / h_32 + t3 -
                   (2.0 * k + 3.0) * eta;
  }
  return d;
}

XyResiduals xy_residuals(const FiniteRadiusDiagnostics& diag,
                         const RadialProfile& profile) {
  const std::size_t n = profile.size();
  XyResiduals out;
  out.res_x.assign(n, 0.0);
  out.res_y.assign(n, 0.0);
  out.res_eta.assign(n, 0.0);
  out.scale_x.assign(n, 0.0);
  out.scale_y.assign(n, 0.0);
  out.scale_eta.assign(n, 0.0);
  out.mask.assign(n, 0);
  const double H = profile.h_nominal;
  if (H <= 0.0 || n < 5) return out;

  double R = profile.support_radius.value_or(profile.grid.back());
  double layer = std::max(10.0 * H, 0.1 * R);
  auto uniform = [&](std::size_t i) {
    return std::abs(profile.grid[i + 1] - profile.grid[i] - H) < 1e-9 * H;
  };
  for (std::size_t i = 2; i + 2 < n; ++i) {
    if (!(uniform(i - 2) && uniform(i - 1) && uniform(i) && uniform(i + 1)))
      continue;
    if (profile.grid[i - 2] < profile.delta * (1.0 - 1e-12)) continue;
    if (R - profile.grid[i] < layer) continue;
    if (!(diag.valid[i - 2] && diag.valid[i - 1] && diag.valid[i] &&
          diag.valid[i + 1] && diag.valid[i + 2]))
      continue;
    auto d5 = [&](const std::vector<double>& f) {
      return (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) /
             (12.0 * H);
    };
    double r = profile.grid[i];
    double xp = d5(diag.x), yp = d5(diag.y), ep = d5(diag.eta);
    double x = diag.x[i], y = diag.y[i], eta = diag.eta[i];
    double ax = diag.alpha[i] * y;
    out.res_x[i] = r * xp - (-x + x * x + ax);
    out.scale_x[i] = std::abs(r * xp) + std::abs(x) + x * x + std::abs(ax);
    double lin = (2.0 + 2.0 * profile.ansatz.k) * y;
    double bxy = diag.beta_mb[i] * x * y;
    out.res_y[i] = r * yp - (lin - bxy);
    out.scale_y[i] = std::abs(r * yp) + std::abs(lin) + std::abs(bxy);
    out.res_eta[i] = r * ep + eta * x;
    out.scale_eta[i] = std::abs(r * ep) + std::abs(eta * x);
    out.mask[i] = 1;
  }
  return out;
}

}  // namespace nvss
