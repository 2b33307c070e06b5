#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nvss/finite_radius.hpp"
#include "nvss/observables.hpp"
#include "nvss/solver.hpp"

namespace nvss {

struct ConfigError : std::runtime_error {
  int line;  // 0 when not tied to a source line
  ConfigError(int line_, const std::string& what_)
      : std::runtime_error(line_ > 0 ? "line " + std::to_string(line_) + ": " + what_
                                     : what_),
        line(line_) {}
};

struct OutputFlags {
  bool mass_includes_4pi = false;
  bool asymptotically_flatten = false;
  bool emit_diagnostics = true;
  int emit_orbits = 0;
};

struct RunConfig {
  PolytropicAnsatz ansatz;
  double phi0 = 0.0;
  SolverNumerics numerics;
  OutputFlags flags;
  std::string profile_path = "profile.csv";
  std::string summary_path = "profile.summary";
  std::string atlas_path = "atlas.csv";
  // Scan ranges; absent or singleton maps mean single-run for that axis.
  std::map<std::string, std::vector<double>> scan;  // keys: phi0, k, mu, E0

  void validate() const;  // throws ConfigError
};

// Sections [ansatz], [solver], [output], [scan]; key = value lines, '#'
// comments.  Unknown keys or sections are rejected with the line number.
RunConfig parse_config(const std::string& text);
std::string serialize_config(const RunConfig& config);

// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

// Profile CSV: header r,phi,dphi,rho,P,PT,source,mass_cum,eta,x,y,alpha,beta.
// Diagnostic columns are empty outside the support or when diag == nullptr.
void write_profile_csv(std::ostream& os, const RadialProfile& profile,
                       const ObservableProfile& obs,
                       const FiniteRadiusDiagnostics* diag);

struct StoredProfile {
  std::vector<double> r, phi, dphi, rho, P, PT, source, mass_cum;
  std::vector<std::optional<double>> eta, x, y, alpha, beta;
};
StoredProfile read_profile_csv(std::istream& is);  // throws ConfigError

struct SummaryDocument {
  // Everything `verify` needs to rebuild the run: ansatz, numerics, phi0,
  // exterior data, plus the reported summary and residual maxima.
  RunConfig config;                   // ansatz + numerics + phi0 + flags
  SteadyStateSummary summary;
  std::optional<ExteriorField> exterior;
  double delta = 0.0;
  double h_nominal = 0.0;
  std::string stop_reason;
  double max_field_residual = 0.0;
  double max_tov_residual = 0.0;
  double max_xy_residual = 0.0;  // worst of res_x, res_y, res_eta over scales
  double alpha0_measured = 0.0;
  double beta0_measured = 0.0;
};
void write_summary(std::ostream& os, const SummaryDocument& doc);
SummaryDocument read_summary(std::istream& is);  // throws ConfigError

}  // namespace nvss
