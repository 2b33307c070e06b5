#include "nvss/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace nvss {
namespace {

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1] (symmetric half listed).
constexpr double kx[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kw[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double gw[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel eval_panel(const std::function<double(double)>& f, double a, double b) {
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * kx[i]);
    fv[14 - i] = f(c + h * kx[i]);
  }
  fv[7] = f(c);
  double resk = kw[7] * fv[7], resg = gw[3] * fv[7];
  for (int i = 0; i < 7; ++i) resk += kw[i] * (fv[i] + fv[14 - i]);
  for (int i = 0; i < 3; ++i) resg += gw[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
  double value = resk * h;
  double err = std::abs((resk - resg) * h);
  // Standard QUADPACK-style sharpening of the raw Gauss-Kronrod difference.
  double resabs = 0.0;
  for (int i = 0; i < 7; ++i)
    resabs += kw[i] * (std::abs(fv[i]) + std::abs(fv[14 - i]));
  resabs = (resabs + kw[7] * std::abs(fv[7])) * std::abs(h);
  if (resabs > 0.0 && err > 0.0)
    err = resabs * std::min(1.0, std::pow(200.0 * err / resabs, 1.5));
  return {a, b, value, err};
}

}  // namespace

double gk15_panel(const std::function<double(double)>& f, double a, double b) {
  return eval_panel(f, a, b).value;
}

QuadResult integrate_gk(const std::function<double(double)>& f, double a,
                        double b, const QuadOptions& opt) {
  QuadResult out;
  if (a == b) return out;
  std::priority_queue<Panel> heap;
  Panel p0 = eval_panel(f, a, b);
  double total = p0.value, err = p0.error;
  heap.push(p0);
  int panels = 1;
  while (err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total)) &&
         panels < opt.max_panels) {
    Panel worst = heap.top();
    heap.pop();
    double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {  // interval at roundoff width
      heap.push({worst.a, worst.b, worst.value, 0.0});
      continue;
    }
    Panel l = eval_panel(f, worst.a, mid), r = eval_panel(f, mid, worst.b);
    total += l.value + r.value - worst.value;
    err += l.error + r.error - worst.error;
    heap.push(l);
    heap.push(r);
    ++panels;
  }
  out.value = total;
  out.error = err;
  out.panels = panels;
  out.converged = err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
  return out;
}

QuadResult beta_weighted_integral(double m, double w,
                                  const std::function<double(double)>& f,
                                  const QuadOptions& opt) {
  // Split at 1/2; tau = t^(m+1) on the left, sigma = (1-t)^(w+1) on the
  // right, so both weights integrate exactly and the transformed integrands
  // are bounded.
  const double pm = m + 1.0, pw = w + 1.0;
  auto left = [&](double tau) {
    double t = std::pow(tau, 1.0 / pm);
    return std::pow(1.0 - t, w) * f(t);
  };
  auto right = [&](double sigma) {
    double t = 1.0 - std::pow(sigma, 1.0 / pw);
    return std::pow(t, m) * f(t);
  };
  QuadOptions half = opt;
  half.abs_tol = 0.5 * opt.abs_tol;
  QuadResult l = integrate_gk(left, 0.0, std::pow(0.5, pm), half);
  QuadResult r = integrate_gk(right, 0.0, std::pow(0.5, pw), half);
  QuadResult out;
  out.value = l.value / pm + r.value / pw;
  out.error = l.error / pm + r.error / pw;
  out.panels = l.panels + r.panels;
  out.converged = l.converged && r.converged;
  return out;
}

}  // namespace nvss
