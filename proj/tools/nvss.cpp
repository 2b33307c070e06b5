#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "nvss/characteristics.hpp"
#include "nvss/pipeline.hpp"

namespace {

int load_config(const std::string& path, nvss::RunConfig& out) {
  std::ifstream is(path);
  if (!is) {
    std::cerr << "cannot open " << path << "\n";
    return nvss::kExitIo;
  }
  std::ostringstream text;
  text << is.rdbuf();
  try {
    out = nvss::parse_config(text.str());
    out.validate();
  } catch (const nvss::ConfigError& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return nvss::kExitBadInput;
  }
  return nvss::kExitOk;
}

int cmd_limits(double mu, double k, double E0) {
  using nvss::format_double;
  try {
    nvss::PolytropicAnsatz a;
    a.mu = mu;
    a.k = k;
    a.E0 = E0;
    a.amplitude = 1.0;
    a.validate();
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return nvss::kExitBadInput;
  }
  nvss::WindowCheck w = nvss::check_window(mu, k, E0);
  std::cout << "window_E0sq = [" << format_double(w.lower) << ", "
            << format_double(w.upper) << "]\n"
            << "window_ok = " << (w.ok ? "true" : "false") << "\n"
            << "alpha0 = " << format_double(nvss::alpha_limit(mu, k)) << "\n"
            << "beta0 = " << format_double(nvss::beta_limit(mu, k, E0)) << "\n"
            << "beta0_range = (0, " << format_double(2.0 * k + 2.0) << ")\n";
  return nvss::kExitOk;
}

// Rebuild the field profile that `solve` wrote; the sibling summary supplies
// the ansatz and run metadata.
int load_profile(const std::string& profile_path, nvss::RadialProfile& out) {
  std::string summary_path = profile_path;
  std::size_t dot = summary_path.rfind(".csv");
  if (dot != std::string::npos && dot == summary_path.size() - 4)
    summary_path.resize(dot);
  summary_path += ".summary";
  try {
    std::ifstream ps(profile_path);
    if (!ps) {
      std::cerr << "cannot open " << profile_path << "\n";
      return nvss::kExitIo;
    }
    nvss::StoredProfile stored = nvss::read_profile_csv(ps);
    std::ifstream ss(summary_path);
    if (!ss) {
      std::cerr << "cannot open " << summary_path << "\n";
      return nvss::kExitIo;
    }
    nvss::SummaryDocument doc = nvss::read_summary(ss);
    out.grid = stored.r;
    out.phi = stored.phi;
    out.dphi = stored.dphi;
    out.phi0 = doc.config.phi0;
    out.ansatz = doc.config.ansatz;
    out.numerics = doc.config.numerics;
    out.delta = doc.delta;
    out.h_nominal = doc.h_nominal;
    out.exterior = doc.exterior;
    out.support_radius = doc.summary.R;
  } catch (const std::exception& e) {
    std::cerr << "malformed input: " << e.what() << "\n";
    return nvss::kExitBadInput;
  }
  return nvss::kExitOk;
}

int cmd_orbit(const std::string& profile_path, double r0, double w0, double F,
              double span) {
  nvss::RadialProfile profile;
  if (int rc = load_profile(profile_path, profile)) return rc;
  if (r0 <= 0.0 || F < 0.0 || span <= 0.0) {
    std::cerr << "need r0 > 0, F >= 0, span > 0\n";
    return nvss::kExitBadInput;
  }
  nvss::OrbitState init{r0, w0, F};
  nvss::OrbitOptions opt;
  nvss::Trajectory t;
  try {
    t = nvss::integrate_orbit(profile, init, span, opt);
  } catch (const std::exception& e) {
    std::cerr << "orbit integration failed: " << e.what() << "\n";
    return nvss::kExitSolver;
  }
  std::cout << "s,r,w,Etilde,f\n";
  for (std::size_t i = 0; i < t.s.size(); ++i) {
    nvss::OrbitState st{t.r[i], t.w[i], F};
    std::cout << nvss::format_double(t.s[i]) << ','
              << nvss::format_double(t.r[i]) << ','
              << nvss::format_double(t.w[i]) << ','
              << nvss::format_double(t.energy[i]) << ','
              << nvss::format_double(
                     nvss::eval_density_reduced(st, profile, profile.ansatz))
              << '\n';
  }
  return nvss::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"static spherically symmetric Nordstrom-Vlasov steady states"};
  app.require_subcommand(1);

  std::string config_path, profile_path, summary_path;
  int jobs = 0;
  double mu = 0.0, k = 0.0, E0 = 1.0;
  double r0 = 1.0, w0 = 0.0, F = 0.0, span = 100.0;

  CLI::App* solve = app.add_subcommand("solve", "solve one steady state");
  solve->add_option("config", config_path, "run configuration file")
      ->required();

  CLI::App* scan = app.add_subcommand("scan", "parameter scan to an atlas CSV");
  scan->add_option("config", config_path, "run configuration file")->required();
  scan->add_option("--jobs", jobs, "worker threads (0 = hardware)");

  CLI::App* verify =
      app.add_subcommand("verify", "recheck invariants of a written profile");
  verify->add_option("profile", profile_path, "profile CSV")->required();
  verify->add_option("summary", summary_path, "summary file")->required();

  CLI::App* limits =
      app.add_subcommand("limits", "closed-form boundary limits and window");
  limits->add_option("--mu", mu)->required();
  limits->add_option("--k", k)->required();
  limits->add_option("--E0", E0)->required();

  CLI::App* orbit =
      app.add_subcommand("orbit", "integrate a characteristic in a profile");
  orbit->add_option("profile", profile_path, "profile CSV")->required();
  orbit->add_option("--r0", r0, "initial radius")->required();
  orbit->add_option("--w0", w0, "initial radial momentum");
  orbit->add_option("--F", F, "squared angular momentum")->required();
  orbit->add_option("--span", span, "integration span in s");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : nvss::kExitBadInput;
  }

  if (solve->parsed() || scan->parsed()) {
    nvss::RunConfig config;
    if (int rc = load_config(config_path, config)) return rc;
    return solve->parsed() ? nvss::run_solve(config, std::cerr)
                           : nvss::run_scan(config, jobs, std::cerr);
  }
  if (verify->parsed())
    return nvss::run_verify(profile_path, summary_path, std::cout);
  if (limits->parsed()) return cmd_limits(mu, k, E0);
  return cmd_orbit(profile_path, r0, w0, F, span);
}
