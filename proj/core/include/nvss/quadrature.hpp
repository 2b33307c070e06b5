#pragma once

#include <functional>

namespace nvss {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
  int panels = 0;
};

struct QuadOptions {
  double abs_tol = 1e-14;
  double rel_tol = 1e-12;
  int max_panels = 200;
};

// Single non-adaptive Gauss-Kronrod 15 panel; for integrands known smooth on
// [a, b] (per-cell defect integrals).
double gk15_panel(const std::function<double(double)>& f, double a, double b);

// Globally adaptive Gauss-Kronrod 7-15 on [a, b].
QuadResult integrate_gk(const std::function<double(double)>& f, double a,
                        double b, const QuadOptions& opt = {});

// int_0^1 t^m (1-t)^w f(t) dt for m, w > -1 and smooth f.  Splits at 1/2 and
// absorbs both endpoint powers with the substitutions tau = t^(m+1),
// sigma = (1-t)^(w+1), then integrates adaptively; accurate relative to the
// integral's own scale even when f is tiny.
QuadResult beta_weighted_integral(double m, double w,
                                  const std::function<double(double)>& f,
                                  const QuadOptions& opt = {});

}  // namespace nvss
