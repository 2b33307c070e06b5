#include "nvss/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nvss/quadrature.hpp"

namespace nvss {

namespace {

constexpr double kPi = std::numbers::pi;

// r^{2k} with the r = 0 convention: quantities carrying this factor are
// reported as 0 at the center for k > 0 and as the (finite, zero) limit of
// r^2 * quantity for k < 0, flagged by the caller.
double r_pow_2k(double r, double k) {
  if (r == 0.0) return k == 0.0 ? 1.0 : 0.0;
  return std::pow(r, 2.0 * k);
}

}  // namespace

double compute_rho(double r, double phi_val, const AnsatzKernels& kernels) {
  const PolytropicAnsatz& a = kernels.ansatz();
  double u = std::exp(phi_val);
  if (u >= a.E0) return 0.0;
  return kPi * r_pow_2k(r, a.k) * beta_coeff(a.k, -0.5) *
         kernels.g(a.k + 0.5, u);
}

PressurePair compute_pressures(double r, double phi_val,
                               const AnsatzKernels& kernels) {
  const PolytropicAnsatz& a = kernels.ansatz();
  double u = std::exp(phi_val);
  if (u >= a.E0) return {0.0, 0.0};
  double h32 = kernels.h(a.k + 1.5, u);
  double rk = r_pow_2k(r, a.k);
  return {kPi * rk * beta_coeff(a.k, 0.5) * h32,
          0.5 * kPi * rk * beta_coeff(a.k + 1.0, -0.5) * h32};
}

double compute_source(double r, double phi_val, const AnsatzKernels& kernels) {
  const PolytropicAnsatz& a = kernels.ansatz();
  double u = std::exp(phi_val);
  if (u >= a.E0) return 0.0;
  return kPi * r_pow_2k(r, a.k) * beta_coeff(a.k, -0.5) * u * u *
         kernels.h(a.k + 0.5, u);
}

double compute_rho(double r, double phi_val, const PolytropicAnsatz& ansatz) {
  return compute_rho(r, phi_val, AnsatzKernels(ansatz));
}
PressurePair compute_pressures(double r, double phi_val,
                               const PolytropicAnsatz& ansatz) {
  return compute_pressures(r, phi_val, AnsatzKernels(ansatz));
}
double compute_source(double r, double phi_val,
                      const PolytropicAnsatz& ansatz) {
  return compute_source(r, phi_val, AnsatzKernels(ansatz));
}

namespace {

// Integrand of the cumulative mass function, r^2 q, written with the
// combined power r^{2k+2} so k < 0 needs no special casing.
double r2_source(double r, double phi_val, const AnsatzKernels& kernels) {
  const PolytropicAnsatz& a = kernels.ansatz();
  double u = std::exp(phi_val);
  if (u >= a.E0) return 0.0;
  return kPi * std::pow(r, 2.0 * a.k + 2.0) * beta_coeff(a.k, -0.5) * u * u *
         kernels.h(a.k + 0.5, u);
}

double r2_rho(double r, double phi_val, const AnsatzKernels& kernels) {
  const PolytropicAnsatz& a = kernels.ansatz();
  double u = std::exp(phi_val);
  if (u >= a.E0) return 0.0;
  return kPi * std::pow(r, 2.0 * a.k + 2.0) * beta_coeff(a.k, -0.5) *
         kernels.g(a.k + 0.5, u);
}

}  // namespace

ObservableProfile build_observables(const RadialProfile& profile,
                                    const AnsatzKernels& kernels) {
  const std::size_t n = profile.size();
  ObservableProfile obs;
  obs.center_regularized = kernels.ansatz().k < 0.0;
  obs.rho.resize(n);
  obs.pressure.resize(n);
  obs.pressure_t.resize(n);
  obs.source.resize(n);
  obs.mass_cumulative.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double r = profile.grid[i], phi = profile.phi[i];
    if (i == 0 && obs.center_regularized) {
      // stored as lim r^2 * quantity, which vanishes since 2k+2 > 0
      obs.rho[i] = obs.pressure[i] = obs.pressure_t[i] = obs.source[i] = 0.0;
    } else {
      obs.rho[i] = compute_rho(r, phi, kernels);
      PressurePair p = compute_pressures(r, phi, kernels);
      obs.pressure[i] = p.radial;
      obs.pressure_t[i] = p.tangential;
      obs.source[i] = compute_source(r, phi, kernels);
    }
  }
  obs.mass_cumulative[0] = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    auto f = [&](double r) {
      return r2_source(r, profile.field_at(r).phi, kernels);
    };
    obs.mass_cumulative[i + 1] =
        obs.mass_cumulative[i] +
        gk15_panel(f, profile.grid[i], profile.grid[i + 1]);
  }
  return obs;
}

double total_mass(const RadialProfile& profile, const AnsatzKernels& kernels) {
  if (kernels.ansatz().amplitude == 0.0) return 0.0;
  const std::size_t n = profile.size();
  auto f = [&](double r) { return r2_rho(r, profile.field_at(r).phi, kernels); };
  double M = 0.0, M_half = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double a = profile.grid[i], b = profile.grid[i + 1], m = 0.5 * (a + b);
    M += gk15_panel(f, a, b);
    M_half += gk15_panel(f, a, m) + gk15_panel(f, m, b);
  }
  if (profile.stop == StopReason::MaxRadius) {
    double rho_end = compute_rho(profile.grid.back(), profile.phi.back(), kernels);
    double rho_max = 0.0;
    for (std::size_t i = 1; i < n; ++i)
      rho_max = std::max(rho_max,
                         compute_rho(profile.grid[i], profile.phi[i], kernels));
    if (rho_end > 1e-10 * rho_max)
      throw std::runtime_error("total_mass: open support, tail not converged");
  }
  if (std::abs(M_half - M) > 1e-9 * std::max(1.0, std::abs(M_half)))
    throw std::runtime_error("total_mass: quadrature refinement disagrees");
  return M_half;
}

double total_energy(const RadialProfile& profile, double M) {
  auto f = [&](double r) {
    double d = profile.field_at(r).dphi;
    return r * r * d * d;
  };
  double field = 0.0;
  for (std::size_t i = 0; i + 1 < profile.size(); ++i)
    field += gk15_panel(f, profile.grid[i], profile.grid[i + 1]);
  if (profile.exterior) {
    const ExteriorField& e = *profile.exterior;
    field += e.C * e.C / e.R;
  } else if (profile.size() > 1) {
    // open grid: vacuum-like decay gives int_r^inf (v/r^2)^2 r^2 = v^2/r
    double v = profile.v_at(profile.size() - 1);
    field += v * v / profile.grid.back();
  }
  return M + field;
}

double momentum_density(double r, double phi_val,
                        const PolytropicAnsatz& ansatz) {
  double u = std::exp(phi_val);
  if (u >= ansatz.E0 || ansatz.amplitude == 0.0) return 0.0;
  double k = ansatz.k;
  double pmax = std::sqrt((ansatz.E0 * ansatz.E0) / (u * u) - 1.0);
  // angle integral via xi = cos(theta) = 2t - 1, weight (1-xi^2)^k absorbed
  auto inner = [&](double p) {
    double Fbase = 4.0 * u * u * r * r * p * p;  // F = Fbase * t(1-t)
    double E = u * std::sqrt(1.0 + p * p);
    QuadResult q = beta_weighted_integral(
        k, k, [&](double) { return ansatz.psi(E) * std::pow(Fbase, k); },
        {1e-30, 1e-12, 64});
    return 2.0 * q.value;
  };
  QuadOptions opt;
  opt.abs_tol = 1e-300;
  opt.rel_tol = 1e-10;
  opt.max_panels = 400;
  QuadResult q = integrate_gk([&](double p) { return p * p * inner(p); }, 0.0,
                              pmax, opt);
  if (!q.converged)
    throw std::runtime_error("momentum_density: quadrature did not converge");
  return std::exp(3.0 * phi_val) * 2.0 * kPi * q.value;
}

double particle_number(const RadialProfile& profile,
                       const PolytropicAnsatz& ansatz) {
  if (ansatz.amplitude == 0.0) return 0.0;
  double r_end = profile.support_radius.value_or(profile.grid.back());
  if (r_end == 0.0) return 0.0;
  QuadOptions opt;
  opt.abs_tol = 1e-300;
  opt.rel_tol = 1e-9;
  opt.max_panels = 400;
  QuadResult q = integrate_gk(
      [&](double r) {
        return r * r * momentum_density(r, profile.field_at(r).phi, ansatz);
      },
      0.0, r_end, opt);
  if (!q.converged)
    throw std::runtime_error("particle_number: quadrature did not converge");
  return q.value;
}

namespace {

bool skip_cell(const RadialProfile& profile, std::size_t i) {
  double a = profile.grid[i], b = profile.grid[i + 1];
  if (a < profile.delta * (1.0 - 1e-12)) return true;  // Picard seed region
  return (b - a) < 0.3 * profile.h_nominal;  // near-boundary ladder
}

}  // namespace

std::vector<double> field_residual(const RadialProfile& profile,
                                   const AnsatzKernels& kernels) {
  const std::size_t n = profile.size();
  std::vector<double> res(n > 0 ? n - 1 : 0, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (skip_cell(profile, i)) continue;
    double a = profile.grid[i], b = profile.grid[i + 1];
    double dv = profile.v_at(i + 1) - profile.v_at(i);
    double I = gk15_panel(
        [&](double r) { return r2_source(r, profile.field_at(r).phi, kernels); },
        a, b);
    double rmid = 0.5 * (a + b);
    res[i] = (dv - I) / ((b - a) * rmid * rmid);
  }
  return res;
}

std::vector<double> tov_residual(const RadialProfile& profile,
                                 const AnsatzKernels& kernels) {
  const std::size_t n = profile.size();
  const double k = kernels.ansatz().k;
  std::vector<double> res(n > 0 ? n - 1 : 0, 0.0);
  auto pressure = [&](double r, double phi) {
    return compute_pressures(r, phi, kernels).radial;
  };
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (skip_cell(profile, i)) continue;
    double a = profile.grid[i], b = profile.grid[i + 1];
    double h = b - a;
    // phi' in the integrand comes from the solved flux v = r^2 phi'
    // (Hermite with the field-equation slope v' = r^2 q).  Using the phi
    // interpolant's own derivative would make the integrand the exact
    // derivative of P(r, phi-hat) and the defect would vanish identically.
    double va = a * a * profile.dphi[i], vb = b * b * profile.dphi[i + 1];
    double sa = r2_source(a, profile.phi[i], kernels);
    double sb = r2_source(b, profile.phi[i + 1], kernels);
    auto v_hat = [&](double r) {
      double t = (r - a) / h, u = 1.0 - t;
      return u * u * (1.0 + 2.0 * t) * va + t * t * (1.0 + 2.0 * u) * vb +
             h * t * u * (u * sa - t * sb);
    };
    double dP = pressure(b, profile.phi[i + 1]) - pressure(a, profile.phi[i]);
    double I = gk15_panel(
        [&](double r) {
          FieldValue f = profile.field_at(r);
          double q = r2_source(r, f.phi, kernels) / (r * r);
          return -(v_hat(r) / (r * r)) * q + (2.0 * k / r) * pressure(r, f.phi);
        },
        a, b);
    res[i] = (dP - I) / h;
  }
  return res;
}

double field_residual_scale(const RadialProfile&, const ObservableProfile& obs) {
  double s = 0.0;
  for (double v : obs.rho) s = std::max(s, v);
  return s;
}

double tov_residual_scale(const RadialProfile& profile,
                          const ObservableProfile& obs) {
  double s = 0.0;
  for (std::size_t i = 0; i < profile.size(); ++i)
    s = std::max(s, obs.rho[i] * std::abs(profile.dphi[i]));
  return s;
}

}  // namespace nvss
