#pragma once

#include <vector>

#include "nvss/observables.hpp"

namespace nvss {

struct WindowCheck {
  bool ok = false;
  double lower = 0.0;  // window endpoints for E0^2
  double upper = 0.0;
  double margin_lower = 0.0;  // E0^2 - lower
  double margin_upper = 0.0;  // upper - E0^2
};

// Sufficient condition for compact support: exponent bounds plus the E0^2
// window ((2mu+1)/(mu+k+5/2), (2mu+2k+3)/(mu+k+5/2)).  Finite radius can
// still occur outside the window; failing this check is a warning, not an
// error.
WindowCheck check_window(double mu, double k, double E0);

// Boundary limit of the pressure-to-source ratio alpha: 1/(mu+k+5/2).
double alpha_limit(double mu, double k);

// Boundary limit of the y-equation coefficient written in boundary-limit
// form: -E0^2 (mu+k+5/2) + 2mu + 2k + 3; lies in (0, 2k+2) exactly inside
// the window.
double beta_limit(double mu, double k, double E0);

struct FiniteRadiusDiagnostics {
  std::vector<double> eta;   // log E0 - phi
  std::vector<double> q;     // rho - (2k+3) P
  std::vector<double> m;     // cumulative int s^2 q ds
  std::vector<double> x;     // m / (r eta)
  std::vector<double> y;     // r^2 q^2 / P
  std::vector<double> alpha; // P / (eta q), kernel form
  std::vector<double> beta;  // boundary-limit coefficient form
  std::vector<double> beta_middle;  // its decaying middle term, reported alone
  std::vector<double> beta_mb;      // momentum-balance form closing the y-flow
  std::vector<char> valid;          // 0 for degenerate nodes (eta <= 0)
  double alpha0_theory = 0.0;
  double beta0_theory = 0.0;
};

// Arrays are evaluated from the h/g kernels directly (never as ratios of
// near-zero observables); for eps = E0^2 - e^{2 phi} < 1e-10 E0^2 the
// evaluation switches to the eps-expansion to avoid cancellation.
FiniteRadiusDiagnostics build_diagnostics(const RadialProfile& profile,
                                          const ObservableProfile& obs,
                                          const AnsatzKernels& kernels);

struct XyResiduals {
  std::vector<double> res_x;    // r x' + x - x^2 - alpha y
  std::vector<double> res_y;    // r y' - (2+2k) y + beta_mb x y
  std::vector<double> res_eta;  // r eta' + eta x
  std::vector<double> scale_x;  // local equation scales
  std::vector<double> scale_y;
  std::vector<double> scale_eta;
  std::vector<char> mask;  // 1 where the stencil is inside the uniform grid
                           // and away from the boundary layer
};

// Derivatives by 5-point centered differences on the uniform interior grid;
// nodes whose stencil touches the seed region, the near-boundary ladder, or
// the layer R - r < max(10 h, 0.1 R) are masked out (boundary behavior is
// covered by the alpha/beta limit diagnostics instead).
XyResiduals xy_residuals(const FiniteRadiusDiagnostics& diag,
                         const RadialProfile& profile);

}  // namespace nvss
