#include "nvss/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nvss/quadrature.hpp"

namespace nvss {

void SolverNumerics::validate() const {
  if (!(seed_interval >= 0.0))
    throw std::invalid_argument("seed_interval must be non-negative");
  if (!(picard_tolerance > 0.0))
    throw std::invalid_argument("picard_tolerance must be positive");
  if (!(ode_abs_tol > 0.0) || !(ode_rel_tol > 0.0))
    throw std::invalid_argument("ode tolerances must be positive");
  if (!(radius_tolerance > 0.0))
    throw std::invalid_argument("radius_tolerance must be positive");
  if (!(max_radius > 0.0))
    throw std::invalid_argument("max_radius must be positive");
}

double nominal_grid_spacing(const SolverNumerics& numerics) {
  double h = 0.05 * std::cbrt(numerics.ode_rel_tol / 1e-8);
  return std::clamp(h, 1e-4, 0.25);
}

double field_rhs(double r, double phi_val, const AnsatzKernels& kernels) {
  const PolytropicAnsatz& a = kernels.ansatz();
  double u = std::exp(phi_val);
  if (u >= a.E0 || a.amplitude == 0.0) return 0.0;
  return std::numbers::pi * beta_coeff(a.k, -0.5) *
         std::pow(r, 2.0 * a.k + 2.0) * u * u * kernels.h(a.k + 0.5, u);
}

double field_rhs(double r, double phi_val, const PolytropicAnsatz& ansatz) {
  return field_rhs(r, phi_val, AnsatzKernels(ansatz));
}

namespace {

double default_delta(const SolverNumerics& numerics, double E0) {
  if (numerics.seed_interval > 0.0) return numerics.seed_interval;
  return 1e-3 * std::min(1.0, 1.0 / E0);
}

double internal_tol(double user_tol) {
  return std::max(user_tol * 1e-4, 3e-14);
}

// Exact integral of s^p times the linear interpolant of f over [s0, s1],
// with s0, s1 in [0, 1] so the antiderivative powers stay well scaled.
double power_weighted_cell(double p, double s0, double s1, double f0,
                           double f1) {
  double a1 = (std::pow(s1, p + 1.0) - std::pow(s0, p + 1.0)) / (p + 1.0);
  double a2 = (std::pow(s1, p + 2.0) - std::pow(s0, p + 2.0)) / (p + 2.0);
  double slope = (f1 - f0) / (s1 - s0);
  return f0 * a1 + slope * (a2 - s0 * a1);
}

struct PicardResult {
  std::vector<double> grid, phi, dphi;
  double delta;
  double phi_end, v_end;
  bool vacuum;  // zero source on the whole seed interval
};

PicardResult picard_run(double phi0, const AnsatzKernels& kernels,
                        const SolverNumerics& numerics) {
  const PolytropicAnsatz& a = kernels.ansatz();
  const double u0 = std::exp(phi0);
  const double c = std::numbers::pi * beta_coeff(a.k, -0.5);
  const double p_inner = 2.0 * a.k + 2.0, p_outer = 2.0 * a.k + 1.0;
  const double threshold = a.E0 * (1.0 - numerics.radius_tolerance);
  const int N = 32;

  double delta = default_delta(numerics, a.E0);
  PicardResult out;
  out.vacuum = (u0 >= threshold) || a.amplitude == 0.0;
  if (out.vacuum) {  // exactly constant; avoid the log(exp(phi0)) round trip
    const int Nv = 32;
    out.delta = delta;
    for (int j = 0; j <= Nv; ++j) {
      out.grid.push_back(delta * double(j) / Nv);
      out.phi.push_back(phi0);
      out.dphi.push_back(0.0);
    }
    out.phi_end = phi0;
    out.v_end = 0.0;
    return out;
  }

  auto source = [&](double u) {
    return u < a.E0 ? u * u * kernels.h(a.k + 0.5, u) : 0.0;
  };

  std::vector<double> s(N + 1), u(N + 1), unew(N + 1), inner(N + 1),
      V(N + 1), J(N + 1);
  for (int j = 0; j <= N; ++j) s[j] = double(j) / N;

  for (int halving = 0;; ++halving) {
    if (halving > 20)
      throw std::runtime_error("picard_seed: contraction failed after 20 halvings");
    std::fill(u.begin(), u.end(), u0);
    double dist_prev = -1.0;
    bool ok = true;
    for (int iter = 0;; ++iter) {
      if (iter > 200) {
        ok = false;
        break;
      }
      // inner[j] = int_0^{s_j} sigma^{2k+2} source(u(sigma)) dsigma
      inner[0] = 0.0;
      for (int j = 0; j < N; ++j)
        inner[j + 1] = inner[j] + power_weighted_cell(p_inner, s[j], s[j + 1],
                                                      source(u[j]),
                                                      source(u[j + 1]));
      // V = u * inner / s^{2k+3}; finite V(0) by the power counting of inner
      V[0] = u[0] * source(u[0]) / (2.0 * a.k + 3.0);
      for (int j = 1; j <= N; ++j)
        V[j] = u[j] * inner[j] / std::pow(s[j], 2.0 * a.k + 3.0);
      J[0] = 0.0;
      for (int j = 0; j < N; ++j)
        J[j + 1] = J[j] +
                   power_weighted_cell(p_outer, s[j], s[j + 1], V[j], V[j + 1]);
      double scale = c * std::pow(delta, 2.0 * a.k + 2.0);
      double dist = 0.0;
      for (int j = 0; j <= N; ++j) {
        unew[j] = u0 + scale * J[j];
        dist = std::max(dist, std::abs(unew[j] - u[j]));
      }
      u.swap(unew);
      for (int j = 0; j <= N; ++j)
        if (u[j] > u0 + 1.0) ok = false;  // outside the a-priori band
      if (!ok) break;
      if (dist <= numerics.picard_tolerance) break;
      if (dist_prev >= 0.0 && dist > 0.5 * dist_prev &&
          dist > 4.0 * numerics.picard_tolerance) {
        ok = false;  // not contracting fast enough on this interval
        break;
      }
      dist_prev = dist;
    }
    if (ok) break;
    delta *= 0.5;
  }

  out.delta = delta;
  out.grid.resize(N + 1);
  out.phi.resize(N + 1);
  out.dphi.resize(N + 1);
  const double vscale = c * std::pow(delta, 2.0 * a.k + 1.0);
  for (int j = 0; j <= N; ++j) {
    out.grid[j] = delta * s[j];
    out.phi[j] = std::log(u[j]);
    out.dphi[j] = (j == 0) ? 0.0 : vscale * inner[j] / (s[j] * s[j]);
  }
  out.phi_end = out.phi[N];
  out.v_end = c * std::pow(delta, 2.0 * a.k + 3.0) * inner[N];
  return out;
}

RadialProfile seed_to_profile(const PicardResult& seed, double phi0,
                              const PolytropicAnsatz& ansatz,
                              const SolverNumerics& numerics) {
  RadialProfile p;
  p.grid = seed.grid;
  p.phi = seed.phi;
  p.dphi = seed.dphi;
  p.phi0 = phi0;
  p.ansatz = ansatz;
  p.numerics = numerics;
  p.delta = seed.delta;
  p.h_nominal = nominal_grid_spacing(numerics);
  return p;
}

}  // namespace

RadialProfile picard_seed(double phi0, const PolytropicAnsatz& ansatz,
                          const SolverNumerics& numerics) {
  numerics.validate();
  AnsatzKernels kernels(ansatz);
  return seed_to_profile(picard_run(phi0, kernels, numerics), phi0, ansatz,
                         numerics);
}

RadialProfile integrate_steady_state(double phi0,
                                     const PolytropicAnsatz& ansatz,
                                     const SolverNumerics& numerics) {
  numerics.validate();
  AnsatzKernels kernels(ansatz);
  PicardResult seed = picard_run(phi0, kernels, numerics);
  RadialProfile p = seed_to_profile(seed, phi0, ansatz, numerics);

  if (seed.vacuum) {
    p.stop = StopReason::DegenerateVacuum;
    if (std::exp(phi0) >= ansatz.E0 * (1.0 - numerics.radius_tolerance))
      p.support_radius = 0.0;
    return p;
  }

  const double phi_stop =
      std::log(ansatz.E0 * (1.0 - numerics.radius_tolerance));
  OdeOptions opt;
  opt.abs_tol = internal_tol(numerics.ode_abs_tol);
  opt.rel_tol = internal_tol(numerics.ode_rel_tol);
  opt.controller = numerics.controller;

  auto rhs = [&](double r, const std::array<double, 2>& y,
                 std::array<double, 2>& dy) {
    dy[0] = y[1] / (r * r);
    dy[1] = field_rhs(r, y[0], kernels);
  };

  const double H = p.h_nominal;
  Dopri5<2> stepper({seed.phi_end, seed.v_end}, seed.delta, opt);

  auto push_node = [&](double r, double phi_val, double v) {
    p.grid.push_back(r);
    p.phi.push_back(phi_val);
    p.dphi.push_back(v / (r * r));
  };

  // Integrates from a stored state to r_target with a fresh stepper; used by
  // the crossing refinement so the main stepper's state stays untouched.
  auto phi_from = [&](double r0, std::array<double, 2> y0, double r1) {
    Dopri5<2> local(y0, r0, opt);
    local.advance_to(rhs, r1);
    return local.y();
  };

  bool crossed = false;
  double r_prev = seed.delta;
  std::array<double, 2> y_prev = {seed.phi_end, seed.v_end};
  long j = 1;
  while (!crossed) {
    double r_node = seed.delta + H * double(j);
    bool last = r_node >= numerics.max_radius;
    if (last) r_node = numerics.max_radius;
    stepper.advance_to(rhs, r_node);
    if (stepper.y()[0] >= phi_stop) {
      crossed = true;
      break;  // refine inside (r_prev, r_node); the crossed node is dropped
    }
    push_node(r_node, stepper.y()[0], stepper.y()[1]);
    r_prev = r_node;
    y_prev = stepper.y();
    if (last) {
      p.stop = StopReason::MaxRadius;
      return p;
    }
    ++j;
  }

  // Bisect the threshold crossing to machine width in r.
  double lo = r_prev, hi = stepper.x();
  for (int it = 0; it < 80 && hi - lo > 1e-14 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    if (phi_from(r_prev, y_prev, mid)[0] >= phi_stop)
      hi = mid;
    else
      lo = mid;
  }
  const double R = hi;

  // Geometric ladder toward R so the stored profile reaches the boundary
  // layer (eta down to ~radius_tolerance) for the limit diagnostics.
  Dopri5<2> tail(y_prev, r_prev, opt);
  double gap = R - r_prev;
  for (int jj = 1; jj <= 24; ++jj) {
    double r_node = R - gap * std::pow(0.5, jj);
    if (r_node <= p.grid.back() * (1.0 + 1e-15)) continue;
    if (R - r_node < 1e-11 * R) break;
    tail.advance_to(rhs, r_node);
    push_node(r_node, std::min(tail.y()[0], phi_stop), tail.y()[1]);
  }
  tail.advance_to(rhs, R);
  push_node(R, std::min(tail.y()[0], phi_stop), tail.y()[1]);

  p.stop = StopReason::SupportBoundary;
  p.support_radius = R;
  return p;
}

std::optional<double> detect_radius(const RadialProfile& profile,
                                    const PolytropicAnsatz& ansatz,
                                    const SolverNumerics& numerics) {
  if (profile.support_radius) return profile.support_radius;
  const double threshold = ansatz.E0 * (1.0 - numerics.radius_tolerance);
  for (std::size_t i = 0; i < profile.size(); ++i)
    if (std::exp(profile.phi[i]) >= threshold) return profile.grid[i];
  return std::nullopt;
}

FieldValue RadialProfile::field_at(double r) const {
  if (exterior && r >= exterior->R) {
    double C = exterior->C;
    return {exterior->phi_inf - C / r, C / (r * r)};
  }
  if (r <= grid.front()) return {phi.front(), dphi.front()};
  if (r >= grid.back()) return {phi.back(), dphi.back()};
  auto it = std::upper_bound(grid.begin(), grid.end(), r);
  std::size_t i = static_cast<std::size_t>(it - grid.begin()) - 1;
  double h = grid[i + 1] - grid[i], t = (r - grid[i]) / h;
  double t2 = t * t, t3 = t2 * t;
  double f = (2 * t3 - 3 * t2 + 1) * phi[i] + (t3 - 2 * t2 + t) * h * dphi[i] +
             (-2 * t3 + 3 * t2) * phi[i + 1] + (t3 - t2) * h * dphi[i + 1];
  double df = ((6 * t2 - 6 * t) * phi[i] + (3 * t2 - 4 * t + 1) * h * dphi[i] +
               (-6 * t2 + 6 * t) * phi[i + 1] + (3 * t2 - 2 * t) * h * dphi[i + 1]) /
              h;
  return {f, df};
}

ExteriorField extend_vacuum(RadialProfile& profile, double R) {
  if (!(R > 0.0) || !std::isfinite(R))
    throw std::invalid_argument("extend_vacuum: R must be positive and finite");
  FieldValue at_R = profile.field_at(R);
  ExteriorField ext;
  ext.R = R;
  ext.C = R * R * at_R.dphi;
  ext.phi_inf = at_R.phi + ext.C / R;
  profile.exterior = ext;
  return ext;
}

FlattenedSteadyState asymptotic_flatten(const RadialProfile& profile,
                                        double phi_inf) {
  if (!std::isfinite(phi_inf))
    throw std::invalid_argument("asymptotic_flatten: phi_inf must be finite");
  FlattenedSteadyState out;
  out.profile = profile;
  out.density_factor = std::exp(4.0 * phi_inf);
  for (double& v : out.profile.phi) v -= phi_inf;
  out.profile.phi0 -= phi_inf;
  if (out.profile.exterior) out.profile.exterior->phi_inf -= phi_inf;

  PolytropicAnsatz& a = out.profile.ansatz;
  const double k = a.k;
  a.E0 *= std::exp(-phi_inf);
  switch (a.variant) {
    case PsiVariant::EnergyWeighted:
      a.amplitude *= std::exp((2.0 * k + 2.0 * a.mu + 5.0) * phi_inf);
      break;
    case PsiVariant::PlainPowerLaw:
      a.amplitude *= std::exp((2.0 * k + a.mu + 4.0) * phi_inf);
      break;
    case PsiVariant::Tabulated:
      for (double& e : a.psi_energies) e *= std::exp(-phi_inf);
      a.amplitude *= std::exp((2.0 * k + 4.0) * phi_inf);
      break;
  }
  return out;
}

}  // namespace nvss
