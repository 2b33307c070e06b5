#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nvss/profile_io.hpp"

namespace nvss {

struct PipelineResult {
  RadialProfile profile;
  ObservableProfile obs;
  std::optional<FiniteRadiusDiagnostics> diag;
  SteadyStateSummary summary;
  WindowCheck window;
  double max_field_residual = 0.0;
  double max_tov_residual = 0.0;
  double max_xy_residual = 0.0;
  double alpha0_measured = 0.0;
  double beta0_measured = 0.0;
};

// Solve + observables + diagnostics + summary for one parameter point.
PipelineResult run_pipeline(const PolytropicAnsatz& ansatz, double phi0,
                            const SolverNumerics& numerics,
                            const OutputFlags& flags);

// Exit codes shared with the CLI: 0 ok, 2 solver failure, 3 I/O failure,
// 4 malformed input.
inline constexpr int kExitOk = 0;
inline constexpr int kExitSolver = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitBadInput = 4;

int run_solve(const RunConfig& config, std::ostream& log);
int run_scan(const RunConfig& config, int jobs, std::ostream& log);
int run_verify(const std::string& profile_path, const std::string& summary_path,
               std::ostream& report);

}  // namespace nvss
