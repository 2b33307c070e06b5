#include "nvss/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "nvss/characteristics.hpp"

namespace nvss {

namespace {

double masked_max_rel(const std::vector<double>& res,
                      const std::vector<double>& scale,
                      const std::vector<char>& mask) {
  double m = 0.0;
  for (std::size_t i = 0; i < res.size(); ++i)
    if (mask[i] && scale[i] > 0.0)
      m = std::max(m, std::abs(res[i]) / scale[i]);
  return m;
}

double vec_abs_max(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

PipelineResult analyze(RadialProfile profile, const OutputFlags& flags) {
  AnsatzKernels kernels(profile.ansatz);
  PipelineResult out;

  std::optional<double> R =
      detect_radius(profile, profile.ansatz, profile.numerics);
  if (R && *R > 0.0 && !profile.exterior) extend_vacuum(profile, *R);

  out.obs = build_observables(profile, kernels);
  out.window = check_window(profile.ansatz.mu, profile.ansatz.k,
                            profile.ansatz.E0);

  SteadyStateSummary& s = out.summary;
  s.R = R;
  s.phi0 = profile.phi0;
  s.finite_radius_detected = R.has_value();
  s.window_ok = out.window.ok;
  s.M = total_mass(profile, kernels);
  s.energy_total = total_energy(profile, s.M);
  s.particle_number = nvss::particle_number(profile, profile.ansatz);
  if (profile.exterior) s.phi_inf = profile.exterior->phi_inf;
  if (profile.stop == StopReason::DegenerateVacuum) s.phi_inf = profile.phi0;
  s.alpha0 = alpha_limit(profile.ansatz.mu, profile.ansatz.k);
  s.beta0 = beta_limit(profile.ansatz.mu, profile.ansatz.k, profile.ansatz.E0);

  out.max_field_residual = vec_abs_max(field_residual(profile, kernels));
  out.max_tov_residual = vec_abs_max(tov_residual(profile, kernels));

  if (R && *R > 0.0) {
    out.diag = build_diagnostics(profile, out.obs, kernels);
    XyResiduals xy = xy_residuals(*out.diag, profile);
    double mx = masked_max_rel(xy.res_x, xy.scale_x, xy.mask);
    double my = masked_max_rel(xy.res_y, xy.scale_y, xy.mask);
    double me = masked_max_rel(xy.res_eta, xy.scale_eta, xy.mask);
    out.max_xy_residual = std::max({mx, my, me});
    for (std::size_t i = out.diag->eta.size(); i-- > 0;) {
      if (out.diag->valid[i] && out.diag->eta[i] > 0.0) {
        out.alpha0_measured = out.diag->alpha[i];
        out.beta0_measured = out.diag->beta[i];
        break;
      }
    }
  }
  (void)flags;
  out.profile = std::move(profile);
  return out;
}

}  // namespace

PipelineResult run_pipeline(const PolytropicAnsatz& ansatz, double phi0,
                            const SolverNumerics& numerics,
                            const OutputFlags& flags) {
  RadialProfile profile = integrate_steady_state(phi0, ansatz, numerics);
  if (flags.asymptotically_flatten) {
    std::optional<double> R = detect_radius(profile, ansatz, numerics);
    if (R && *R > 0.0) {
      extend_vacuum(profile, *R);
      profile = asymptotic_flatten(profile, profile.exterior->phi_inf).profile;
    }
  }
  return analyze(std::move(profile), flags);
}

namespace {

SummaryDocument make_summary_doc(const RunConfig& cfg,
                                 const PipelineResult& result) {
  SummaryDocument doc;
  doc.config = cfg;
  doc.config.ansatz = result.profile.ansatz;  // flattening may rescale it
  doc.config.phi0 = result.profile.phi0;
  doc.config.scan.clear();
  doc.summary = result.summary;
  if (cfg.flags.mass_includes_4pi)
    doc.summary.M = 4.0 * std::numbers::pi * result.summary.M;
  doc.exterior = result.profile.exterior;
  doc.delta = result.profile.delta;
  doc.h_nominal = result.profile.h_nominal;
  switch (result.profile.stop) {
    case StopReason::SupportBoundary: doc.stop_reason = "support_boundary"; break;
    case StopReason::MaxRadius: doc.stop_reason = "open_support"; break;
    case StopReason::DegenerateVacuum: doc.stop_reason = "vacuum"; break;
  }
  doc.max_field_residual = result.max_field_residual;
  doc.max_tov_residual = result.max_tov_residual;
  doc.max_xy_residual = result.max_xy_residual;
  doc.alpha0_measured = result.alpha0_measured;
  doc.beta0_measured = result.beta0_measured;
  return doc;
}

void emit_orbits_file(const std::string& path, const PipelineResult& result,
                      int count, std::ostream& log) {
  const RadialProfile& profile = result.profile;
  double R = profile.support_radius.value_or(profile.grid.back());
  if (R <= 0.0) {
    log << "warning: no support region, skipping orbit emission\n";
    return;
  }
  std::ofstream os(path);
  os << "orbit,s,r,w,Etilde,f\n";
  std::mt19937_64 rng(0x5eedull);
  auto uniform = [&](double a, double b) {
    // fixed 53-bit mapping keeps scan outputs byte-identical across reruns
    return a + (b - a) * double(rng() >> 11) * 0x1.0p-53;
  };
  for (int orbit = 0; orbit < count; ++orbit) {
    double r0 = uniform(0.25 * R, 0.75 * R);
    FieldValue f0 = profile.field_at(r0);
    double Fcirc = std::pow(r0, 3) * std::exp(2.0 * f0.phi) * f0.dphi;
    OrbitState init{r0, 0.0, uniform(0.3, 0.9) * Fcirc};
    if (init.F <= 0.0) continue;
    OrbitOptions opt;
    Trajectory t = integrate_orbit(profile, init, 40.0 * R, opt);
    for (std::size_t i = 0; i < t.s.size(); ++i) {
      OrbitState st{t.r[i], t.w[i], init.F};
      os << orbit << ',' << format_double(t.s[i]) << ','
         << format_double(t.r[i]) << ',' << format_double(t.w[i]) << ','
         << format_double(t.energy[i]) << ','
         << format_double(eval_density_reduced(st, profile, profile.ansatz))
         << '\n';
    }
  }
}

}  // namespace

int run_solve(const RunConfig& config, std::ostream& log) {
  PipelineResult result;
  try {
    result = run_pipeline(config.ansatz, config.phi0, config.numerics,
                          config.flags);
  } catch (const std::exception& e) {
    log << "solver error: " << e.what() << "\n";
    return kExitSolver;
  }
  if (!result.window.ok)
    log << "warning: (mu, k, E0) outside the finite-radius window ["
        << format_double(result.window.lower) << ", "
        << format_double(result.window.upper)
        << "] for E0^2; compact support is not guaranteed\n";

  auto fail_io = [&](const std::string& what) {
    std::remove(config.profile_path.c_str());
    std::remove(config.summary_path.c_str());
    log << "I/O error: " << what << "\n";
    return kExitIo;
  };
  {
    std::ofstream os(config.profile_path);
    if (!os) return fail_io("cannot open " + config.profile_path);
    write_profile_csv(os, result.profile, result.obs,
                      config.flags.emit_diagnostics && result.diag
                          ? &*result.diag
                          : nullptr);
    if (!os.good()) return fail_io("write failed on " + config.profile_path);
  }
  {
    std::ofstream os(config.summary_path);
    if (!os) return fail_io("cannot open " + config.summary_path);
    write_summary(os, make_summary_doc(config, result));
    if (!os.good()) return fail_io("write failed on " + config.summary_path);
  }
  if (config.flags.emit_orbits > 0)
    emit_orbits_file(config.profile_path + ".orbits.csv", result,
                     config.flags.emit_orbits, log);
  return kExitOk;
}

namespace {

struct ScanTuple {
  double phi0, k, mu, E0;
};

std::string scan_row(const ScanTuple& t, const RunConfig& cfg) {
  RunConfig local = cfg;
  local.phi0 = t.phi0;
  local.ansatz.k = t.k;
  local.ansatz.mu = t.mu;
  local.ansatz.E0 = t.E0;
  std::ostringstream row;
  row << format_double(t.phi0) << ',' << format_double(t.k) << ','
      << format_double(t.mu) << ',' << format_double(t.E0) << ',';
  try {
    local.ansatz.validate();
    PipelineResult r =
        run_pipeline(local.ansatz, local.phi0, local.numerics, local.flags);
    double M = cfg.flags.mass_includes_4pi ? 4.0 * std::numbers::pi * r.summary.M
                                           : r.summary.M;
    row << (r.summary.R ? format_double(*r.summary.R) : "") << ','
        << format_double(M) << ',' << format_double(r.summary.energy_total)
        << ',' << format_double(r.summary.particle_number) << ','
        << (r.summary.phi_inf ? format_double(*r.summary.phi_inf) : "") << ','
        << format_double(r.alpha0_measured) << ','
        << format_double(r.summary.alpha0) << ','
        << format_double(r.beta0_measured) << ','
        << format_double(r.summary.beta0) << ','
        << (r.summary.window_ok ? "true" : "false") << ','
        << (r.summary.finite_radius_detected ? "true" : "false") << ','
        << format_double(r.max_field_residual) << ','
        << format_double(r.max_tov_residual) << ','
        << format_double(r.max_xy_residual) << ",ok";
  } catch (const std::exception& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), ',', ';');
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    row << ",,,,,,,,,,,,," << msg;
  }
  return row.str();
}

}  // namespace

int run_scan(const RunConfig& config, int jobs, std::ostream& log) {
  auto axis = [&](const std::string& name, double fallback) {
    auto it = config.scan.find(name);
    if (it != config.scan.end()) return it->second;
    return std::vector<double>{fallback};
  };
  std::vector<double> phi0s = axis("phi0", config.phi0);
  std::vector<double> ks = axis("k", config.ansatz.k);
  std::vector<double> mus = axis("mu", config.ansatz.mu);
  std::vector<double> E0s = axis("E0", config.ansatz.E0);

  std::vector<ScanTuple> tuples;
  for (double p : phi0s)
    for (double k : ks)
      for (double m : mus)
        for (double e : E0s) tuples.push_back({p, k, m, e});

  if (jobs <= 0) jobs = int(std::thread::hardware_concurrency());
  jobs = std::clamp<int>(jobs, 1, int(tuples.size()));

  std::vector<std::string> rows(tuples.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= tuples.size()) return;
      rows[i] = scan_row(tuples[i], config);
    }
  };
  std::vector<std::thread> pool;
  for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  std::size_t ok_count = 0;
  for (const std::string& r : rows)
    if (r.size() >= 3 && r.compare(r.size() - 3, 3, ",ok") == 0) ++ok_count;

  std::ofstream os(config.atlas_path);
  if (!os) {
    log << "I/O error: cannot open " << config.atlas_path << "\n";
    return kExitIo;
  }
  os << "phi0,k,mu,E0,R,M,energy_total,particle_number,phi_inf,"
        "alpha0_measured,alpha0_theory,beta0_measured,beta0_theory,"
        "window_ok,finite_radius_detected,max_field_residual,"
        "max_tov_residual,max_xy_residual,status\n";
  for (const std::string& r : rows) os << r << '\n';
  if (!os.good()) {
    std::remove(config.atlas_path.c_str());
    log << "I/O error: write failed on " << config.atlas_path << "\n";
    return kExitIo;
  }
  log << "scan: " << ok_count << "/" << tuples.size() << " tuples ok\n";
  return ok_count > 0 ? kExitOk : kExitSolver;
}

int run_verify(const std::string& profile_path, const std::string& summary_path,
               std::ostream& report) {
  StoredProfile stored;
  SummaryDocument doc;
  try {
    std::ifstream ps(profile_path);
    if (!ps) {
      report << "cannot open " << profile_path << "\n";
      return kExitIo;
    }
    stored = read_profile_csv(ps);
    std::ifstream ss(summary_path);
    if (!ss) {
      report << "cannot open " << summary_path << "\n";
      return kExitIo;
    }
    doc = read_summary(ss);
  } catch (const std::exception& e) {
    report << "malformed input: " << e.what() << "\n";
    return kExitBadInput;
  }

  RadialProfile profile;
  profile.grid = stored.r;
  profile.phi = stored.phi;
  profile.dphi = stored.dphi;
  profile.phi0 = doc.config.phi0;
  profile.ansatz = doc.config.ansatz;
  profile.numerics = doc.config.numerics;
  profile.delta = doc.delta;
  profile.h_nominal = doc.h_nominal;
  profile.exterior = doc.exterior;
  profile.support_radius = doc.summary.R;
  profile.stop = doc.stop_reason == "support_boundary"
                     ? StopReason::SupportBoundary
                     : doc.stop_reason == "vacuum" ? StopReason::DegenerateVacuum
                                                   : StopReason::MaxRadius;

  AnsatzKernels kernels(profile.ansatz);
  const double k = profile.ansatz.k;
  const std::size_t n = profile.size();
  bool all_pass = true;
  auto check = [&](const std::string& name, double measured, double bound) {
    bool ok = measured <= bound;
    all_pass = all_pass && ok;
    report << (ok ? "PASS" : "FAIL") << " " << name
           << " measured=" << format_double(measured)
           << " bound=" << format_double(bound) << "\n";
  };

  double rho_max = vec_abs_max(stored.rho);
  double rel_pt = 0.0, rel_src = 0.0, rel_rho = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double denom = std::max({stored.rho[i], stored.PT[i], 1e-30});
    rel_pt = std::max(rel_pt,
                      std::abs(stored.PT[i] - (k + 1.0) * stored.P[i]) / denom);
    rel_src = std::max(
        rel_src,
        std::abs(stored.source[i] -
                 (stored.rho[i] - (2.0 * k + 3.0) * stored.P[i])) /
            std::max(stored.rho[i], 1e-30));
    bool center = (i == 0 && k < 0.0);
    double rho_re = center ? 0.0
                           : compute_rho(stored.r[i], stored.phi[i], kernels);
    rel_rho = std::max(rel_rho, std::abs(rho_re - stored.rho[i]) /
                                    std::max(rho_max, 1e-30));
  }
  check("pressure_ratio_identity", rel_pt, 1e-10);
  check("source_identity", rel_src, 1e-9);
  check("density_recompute", rel_rho, 1e-9);

  ObservableProfile obs = build_observables(profile, kernels);
  check("field_residual", vec_abs_max(field_residual(profile, kernels)),
        1e-8 * std::max(field_residual_scale(profile, obs), 1e-30));
  check("tov_residual", vec_abs_max(tov_residual(profile, kernels)),
        1e-6 * std::max(tov_residual_scale(profile, obs), 1e-30));

  if (profile.support_radius && *profile.support_radius > 0.0) {
    FiniteRadiusDiagnostics diag = build_diagnostics(profile, obs, kernels);
    XyResiduals xy = xy_residuals(diag, profile);
    double worst = std::max({masked_max_rel(xy.res_x, xy.scale_x, xy.mask),
                             masked_max_rel(xy.res_y, xy.scale_y, xy.mask),
                             masked_max_rel(xy.res_eta, xy.scale_eta, xy.mask)});
    check("xy_residuals", worst, 1e-4);
  }
  report << (all_pass ? "VERIFY PASS" : "VERIFY FAIL") << "\n";
  return all_pass ? kExitOk : kExitSolver;
}

}  // namespace nvss
