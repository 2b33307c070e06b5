// Acceptance gate: one line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "nvss/characteristics.hpp"
#include "nvss/pipeline.hpp"

using namespace nvss;
namespace fs = std::filesystem;
using clk = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  if (!pass) ++failures;
  std::printf("criterion %2d: %s  %s\n", criterion, pass ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
}

double seconds_since(clk::time_point t0) {
  return std::chrono::duration<double>(clk::now() - t0).count();
}

PolytropicAnsatz energy_weighted(double k, double mu, double E0) {
  PolytropicAnsatz a;
  a.variant = PsiVariant::EnergyWeighted;
  a.k = k;
  a.mu = mu;
  a.E0 = E0;
  a.amplitude = 1.0;
  return a;
}

PolytropicAnsatz baseline() { return energy_weighted(0.0, 0.5, std::sqrt(0.9)); }
double baseline_phi0() { return std::log(0.5 * std::sqrt(0.9)); }

struct SolvedCase {
  RadialProfile profile;
  ObservableProfile obs;
};

SolvedCase solve_case(const PolytropicAnsatz& a, double phi0,
                      const SolverNumerics& num) {
  SolvedCase c;
  c.profile = integrate_steady_state(phi0, a, num);
  if (auto R = detect_radius(c.profile, a, num); R && *R > 0.0)
    extend_vacuum(c.profile, *R);
  AnsatzKernels kernels(a);
  c.obs = build_observables(c.profile, kernels);
  return c;
}

std::vector<const SolvedCase*> produced;

double uniform(std::mt19937_64& rng, double a, double b) {
  return a + (b - a) * double(rng() >> 11) * 0x1.0p-53;
}

// 1. Kernel quadrature against the closed form.
void criterion_1() {
  auto t0 = clk::now();
  const double pairs[4][2] = {{0.0, 1.0}, {0.5, 1.0}, {1.0, 2.0}, {-0.5, 1.0}};
  double worst = 0.0;
  std::mt19937_64 rng(101);
  for (auto [mu, E0] : pairs) {
    PolytropicAnsatz a = energy_weighted(0.0, mu, E0);
    for (int i = 0; i < 20; ++i) {
      double m = uniform(rng, 0.25, 3.0);
      double u = uniform(rng, 0.02, 0.98) * E0;
      double ref = closed_form_h(m, u, mu, E0);
      worst = std::max(worst, std::abs(eval_h(m, u, a) - ref) / ref);
    }
  }
  double dt = seconds_since(t0);
  std::ostringstream d;
  d << "kernel vs closed form: max rel err " << worst << " (bound 1e-8), "
    << dt << " s (bound 1)";
  report(1, worst <= 1e-8 && dt < 1.0, d.str());
}

// 2. Pointwise identities at every node of every produced profile.
void criterion_2() {
  double worst_pt = 0.0, worst_src = 0.0;
  std::size_t nodes = 0;
  for (const SolvedCase* c : produced) {
    double k = c->profile.ansatz.k;
    for (std::size_t i = 0; i < c->profile.size(); ++i) {
      ++nodes;
      double denom = std::max({c->obs.rho[i], c->obs.pressure_t[i], 1e-30});
      worst_pt = std::max(
          worst_pt, std::abs(c->obs.pressure_t[i] -
                             (k + 1.0) * c->obs.pressure[i]) / denom);
      worst_src = std::max(
          worst_src,
          std::abs(c->obs.source[i] - (c->obs.rho[i] -
                                       (2.0 * k + 3.0) * c->obs.pressure[i])) /
              std::max(c->obs.rho[i], 1e-30));
    }
  }
  std::ostringstream d;
  d << "P_T = (k+1) P rel " << worst_pt << " (bound 1e-10), source identity rel "
    << worst_src << " (bound 1e-9) over " << nodes << " nodes";
  report(2, worst_pt <= 1e-10 && worst_src <= 1e-9, d.str());
}

// 3. Residual magnitudes and their shrink under 100x tighter tolerances.
void criterion_3(const SolvedCase& base) {
  auto t0 = clk::now();
  AnsatzKernels kernels(base.profile.ansatz);
  auto max_abs = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  };
  double f0 = max_abs(field_residual(base.profile, kernels));
  double t0v = max_abs(tov_residual(base.profile, kernels));
  double fscale = field_residual_scale(base.profile, base.obs);
  double tscale = tov_residual_scale(base.profile, base.obs);

  SolverNumerics tight;
  tight.ode_abs_tol = 1e-12;
  tight.ode_rel_tol = 1e-10;
  SolvedCase tc = solve_case(baseline(), baseline_phi0(), tight);
  double f1 = max_abs(field_residual(tc.profile, kernels));
  double t1 = max_abs(tov_residual(tc.profile, kernels));
  double dt = seconds_since(t0);
  bool pass = f0 <= 1e-8 * fscale && t0v <= 1e-6 * tscale &&
              f0 / std::max(f1, 1e-300) >= 100.0 &&
              t0v / std::max(t1, 1e-300) >= 100.0 && dt < 10.0;
  std::ostringstream d;
  d << "field " << f0 << " <= " << 1e-8 * fscale << ", balance " << t0v
    << " <= " << 1e-6 * tscale << ", shrink x" << f0 / std::max(f1, 1e-300)
    << "/x" << t0v / std::max(t1, 1e-300) << " (bound 100), " << dt
    << " s (bound 10)";
  report(3, pass, d.str());
}

// 4. Boundary exponents across the parameter window.
std::vector<SolvedCase> criterion_4() {
  auto t0 = clk::now();
  std::vector<SolvedCase> kept;
  double worst_a = 0.0, worst_b = 0.0;
  int count = 0;
  bool ok = true;
  for (double mu : {0.0, 0.5, 1.0}) {
    for (double k : {0.0, 0.5}) {
      WindowCheck w = check_window(mu, k, 1.0);
      for (double frac : {0.35, 0.65}) {
        double E0 = std::sqrt(w.lower + frac * (w.upper - w.lower));
        PolytropicAnsatz a = energy_weighted(k, mu, E0);
        SolverNumerics num;
        SolvedCase c = solve_case(a, std::log(0.5 * E0), num);
        ++count;
        if (!c.profile.support_radius) {
          ok = false;
          continue;
        }
        AnsatzKernels kernels(a);
        FiniteRadiusDiagnostics diag =
            build_diagnostics(c.profile, c.obs, kernels);
        std::size_t last = c.profile.size();
        while (last-- > 0)
          if (diag.valid[last] && diag.eta[last] > 0.0) break;
        double da = std::abs(diag.alpha[last] - alpha_limit(mu, k));
        double db = std::abs(diag.beta[last] - beta_limit(mu, k, E0));
        worst_a = std::max(worst_a, da);
        worst_b = std::max(worst_b, db);
        ok = ok && da <= 1e-3 && db <= 1e-3 && diag.beta[last] > 0.0 &&
             diag.beta[last] < 2.0 * k + 2.0;
        kept.push_back(std::move(c));
      }
    }
  }
  double dt = seconds_since(t0);
  std::ostringstream d;
  d << count << " window cases: max |alpha - alpha0| " << worst_a
    << ", max |beta - beta0| " << worst_b << " (bounds 1e-3), " << dt
    << " s (bound 120)";
  report(4, ok && count >= 12 && dt < 120.0, d.str());
  return kept;
}

// 5. Degenerate start gives the constant vacuum solution.
void criterion_5() {
  PolytropicAnsatz a = baseline();
  SolverNumerics num;
  RadialProfile p = integrate_steady_state(std::log(a.E0) + 0.05, a, num);
  bool ok = p.stop == StopReason::DegenerateVacuum;
  double worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    ok = ok && p.phi[i] == p.phi0 && p.dphi[i] == 0.0;
    worst = std::max(
        worst, std::abs(field_rhs(std::max(p.grid[i], 1e-6), p.phi[i], a)));
  }
  std::ostringstream d;
  d << "phi0 above the cutoff: constant field, max source " << worst
    << " (bound 0)";
  report(5, ok && worst == 0.0, d.str());
}

// 6. Monotone flux, finite asymptotics, energy split with the exterior tail.
void criterion_6(const SolvedCase& base) {
  const RadialProfile& p = base.profile;
  bool monotone = true;
  double prev = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double v = p.v_at(i);
    monotone = monotone && v >= prev - 1e-12 * std::max(1.0, prev);
    prev = v;
  }
  AnsatzKernels kernels(p.ansatz);
  double M = total_mass(p, kernels);
  double C = p.exterior ? p.exterior->C : prev;
  double phi_inf = p.exterior ? p.exterior->phi_inf : p.phi.back();
  double E = total_energy(p, M);
  double tail = p.exterior ? C * C / p.exterior->R : 0.0;
  bool ok = monotone && C <= M * (1.0 + 1e-12) && std::isfinite(phi_inf) &&
            std::exp(phi_inf) >= p.ansatz.E0 && std::isfinite(E) &&
            E >= M + tail;
  std::ostringstream d;
  d << "flux monotone, C " << C << " <= M " << M << ", e^{phi_inf} "
    << std::exp(phi_inf) << " >= E0 " << p.ansatz.E0 << ", energy " << E
    << " >= M + tail " << M + tail;
  report(6, ok, d.str());
}

// 7. Bound characteristics conserve their invariants and the density.
void criterion_7(const SolvedCase& base) {
  auto t0 = clk::now();
  const RadialProfile& p = base.profile;
  double R = *p.support_radius;
  std::mt19937_64 rng(707);
  double worst_E = 0.0, worst_f = 0.0;
  int used = 0;
  for (int trial = 0; used < 50 && trial < 200; ++trial) {
    double r0 = uniform(rng, 0.15, 0.7) * R;
    FieldValue f = p.field_at(r0);
    double F = uniform(rng, 0.2, 0.95) * std::pow(r0, 3) *
               std::exp(2.0 * f.phi) * f.dphi;
    if (F <= 0.0) continue;
    OrbitState init{r0, 0.0, F};
    double f0 = eval_density_reduced(init, p, p.ansatz);
    if (f0 <= 0.0) continue;
    ++used;
    double E0tilde = reduced_energy(init, f.phi);
    Trajectory t = integrate_orbit(p, init, 60.0, {1e-12, 1e-11, 128});
    for (std::size_t i = 0; i < t.s.size(); ++i) {
      worst_E = std::max(worst_E,
                         std::abs(t.energy[i] - E0tilde) / E0tilde);
      OrbitState st{t.r[i], t.w[i], F};
      worst_f = std::max(worst_f,
                         std::abs(eval_density_reduced(st, p, p.ansatz) - f0) /
                             f0);
    }
  }
  double dt = seconds_since(t0);
  std::ostringstream d;
  d << used << " bound orbits: energy drift " << worst_E
    << " (bound 1e-8), density drift " << worst_f << " (bound 1e-6), " << dt
    << " s (bound 30)";
  report(7, used == 50 && worst_E <= 1e-8 && worst_f <= 1e-6 && dt < 30.0,
         d.str());
}

// 8. Autonomous-system residuals close and shrink under refinement.
void criterion_8(const SolvedCase& base) {
  auto masked_max = [](const XyResiduals& xy) {
    double m = 0.0;
    for (std::size_t i = 0; i < xy.mask.size(); ++i) {
      if (!xy.mask[i]) continue;
      if (xy.scale_x[i] > 0) m = std::max(m, std::abs(xy.res_x[i]) / xy.scale_x[i]);
      if (xy.scale_y[i] > 0) m = std::max(m, std::abs(xy.res_y[i]) / xy.scale_y[i]);
      if (xy.scale_eta[i] > 0)
        m = std::max(m, std::abs(xy.res_eta[i]) / xy.scale_eta[i]);
    }
    return m;
  };
  AnsatzKernels kernels(base.profile.ansatz);
  FiniteRadiusDiagnostics diag =
      build_diagnostics(base.profile, base.obs, kernels);
  double r0 = masked_max(xy_residuals(diag, base.profile));

  SolverNumerics tight;
  tight.ode_abs_tol = 1e-12;
  tight.ode_rel_tol = 1e-10;
  SolvedCase tc = solve_case(baseline(), baseline_phi0(), tight);
  FiniteRadiusDiagnostics dt_diag =
      build_diagnostics(tc.profile, tc.obs, kernels);
  double r1 = masked_max(xy_residuals(dt_diag, tc.profile));
  bool ok = r0 <= 1e-4 && r1 < r0;
  std::ostringstream d;
  d << "max scaled residual " << r0 << " (bound 1e-4), refined " << r1;
  report(8, ok, d.str());
}

// 9. Total mass under its closed-form a priori bound.
void criterion_9(const std::vector<const SolvedCase*>& cases) {
  bool ok = true;
  double worst = 0.0;
  for (const SolvedCase* c : cases) {
    if (!c->profile.support_radius) continue;
    const PolytropicAnsatz& a = c->profile.ansatz;
    AnsatzKernels kernels(a);
    double M = total_mass(c->profile, kernels);
    double R = *c->profile.support_radius;
    double bound = std::numbers::pi * beta_coeff(a.k, -0.5) *
                   kernels.g(a.k + 0.5, std::exp(c->profile.phi0)) *
                   std::pow(R, 2.0 * a.k + 3.0) / (2.0 * a.k + 3.0);
    worst = std::max(worst, M / bound);
    ok = ok && M <= bound;
  }
  std::ostringstream d;
  d << "max M / bound over " << cases.size() << " profiles: " << worst
    << " (bound 1)";
  report(9, ok, d.str());
}

// 10. Byte-identical repeated solve and parallel scan.
void criterion_10() {
  fs::path dir = fs::temp_directory_path() / "nvss_acceptance_c10";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto slurp = [](const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
  };
  RunConfig cfg;
  cfg.ansatz = baseline();
  cfg.phi0 = baseline_phi0();
  cfg.profile_path = (dir / "p.csv").string();
  cfg.summary_path = (dir / "p.summary").string();
  cfg.atlas_path = (dir / "atlas.csv").string();
  cfg.scan["mu"] = {0.0, 0.5, 1.0};
  std::ostringstream log;
  bool ok = run_solve(cfg, log) == kExitOk;
  std::string p1 = slurp(cfg.profile_path), s1 = slurp(cfg.summary_path);
  ok = ok && run_solve(cfg, log) == kExitOk;
  ok = ok && slurp(cfg.profile_path) == p1 && slurp(cfg.summary_path) == s1;
  ok = ok && run_scan(cfg, 3, log) == kExitOk;
  std::string a1 = slurp(cfg.atlas_path);
  ok = ok && run_scan(cfg, 1, log) == kExitOk;
  ok = ok && slurp(cfg.atlas_path) == a1 && !p1.empty() && !a1.empty();
  report(10, ok, "repeated solve and 3-thread vs serial scan byte-identical");
}

}  // namespace

int main() {
  criterion_1();

  SolverNumerics num;
  SolvedCase base = solve_case(baseline(), baseline_phi0(), num);
  std::vector<SolvedCase> window_cases = criterion_4();

  produced.push_back(&base);
  for (const SolvedCase& c : window_cases) produced.push_back(&c);
  criterion_2();
  criterion_3(base);
  criterion_5();
  criterion_6(base);
  criterion_7(base);
  criterion_8(base);
  criterion_9(produced);
  criterion_10();

  std::printf("%s\n", failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL");
  return failures == 0 ? 0 : 1;
}
