#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

namespace nvss {

enum class StepController { PI, I };

struct OdeOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  double h_init = 0.0;  // 0: pick automatically
  double h_max = std::numeric_limits<double>::infinity();
  StepController controller = StepController::PI;
  long max_steps = 50'000'000;
};

// Dormand-Prince 5(4) with FSAL.  advance_to lands exactly on the requested
// endpoint, so profile nodes carry integrator accuracy with no interpolant in
// between; a stepper instance keeps its step size and FSAL stage across calls.
template <std::size_t N>
class Dopri5 {
 public:
  using State = std::array<double, N>;

  Dopri5(State y0, double x0, const OdeOptions& opt) : opt_(opt), x_(x0), y_(y0) {}

  double x() const { return x_; }
  const State& y() const { return y_; }
  long steps_accepted() const { return accepted_; }

  void reset(State y0, double x0) {
    x_ = x0;
    y_ = y0;
    have_k1_ = false;
    h_ = 0.0;
    err_prev_ = 1.0;
  }

  template <class F>  // F: void(double x, const State& y, State& dydx)
  void advance_to(F&& f, double x_end) {
    if (x_end < x_) throw std::invalid_argument("Dopri5: backward integration");
    if (x_end == x_) return;
    if (!have_k1_) {
      f(x_, y_, k_[0]);
      have_k1_ = true;
      if (h_ <= 0.0) h_ = initial_step(x_end);
    }
    long guard = 0;
    while (x_ < x_end) {
      if (++guard > opt_.max_steps) throw std::runtime_error("Dopri5: step budget exhausted");
      double h = std::min({h_, opt_.h_max, x_end - x_});
      bool hit_end = (x_ + h >= x_end - 1e-14 * std::abs(x_end));
      if (hit_end) h = x_end - x_;

      State ynew;
      double err = try_step(f, h, ynew);
      if (err <= 1.0) {
        x_ = hit_end ? x_end : x_ + h;
        y_ = ynew;
        k_[0] = k_[6];  // FSAL
        ++accepted_;
        h_ = h * growth(err);
        err_prev_ = std::max(err, 1e-10);
      } else {
        h_ = h * std::clamp(0.9 * std::pow(err, -0.2), 0.1, 1.0);
        if (h_ < 1e-15 * std::max(1.0, std::abs(x_)))
          throw std::runtime_error("Dopri5: step size underflow");
      }
    }
  }

 private:
  template <class F>
  double try_step(F&& f, double h, State& ynew) {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

    State ytmp;
    for (std::size_t i = 0; i < N; ++i) ytmp[i] = y_[i] + h * a21 * k_[0][i];
    f(x_ + c2 * h, ytmp, k_[1]);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y_[i] + h * (a31 * k_[0][i] + a32 * k_[1][i]);
    f(x_ + c3 * h, ytmp, k_[2]);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y_[i] + h * (a41 * k_[0][i] + a42 * k_[1][i] + a43 * k_[2][i]);
    f(x_ + c4 * h, ytmp, k_[3]);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y_[i] + h * (a51 * k_[0][i] + a52 * k_[1][i] + a53 * k_[2][i] +
                             a54 * k_[3][i]);
    f(x_ + c5 * h, ytmp, k_[4]);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y_[i] + h * (a61 * k_[0][i] + a62 * k_[1][i] + a63 * k_[2][i] +
                             a64 * k_[3][i] + a65 * k_[4][i]);
    f(x_ + h, ytmp, k_[5]);
    for (std::size_t i = 0; i < N; ++i)
      ynew[i] = y_[i] + h * (b1 * k_[0][i] + b3 * k_[2][i] + b4 * k_[3][i] +
                             b5 * k_[4][i] + b6 * k_[5][i]);
    f(x_ + h, ynew, k_[6]);

    double sum = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      double e = h * (e1 * k_[0][i] + e3 * k_[2][i] + e4 * k_[3][i] +
                      e5 * k_[4][i] + e6 * k_[5][i] + e7 * k_[6][i]);
      double sc = opt_.abs_tol +
                  opt_.rel_tol * std::max(std::abs(y_[i]), std::abs(ynew[i]));
      sum += (e / sc) * (e / sc);
    }
    return std::sqrt(sum / N);
  }

  double growth(double err) const {
    double fac;
    if (opt_.controller == StepController::PI)
      fac = 0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5.0) *
            std::pow(err_prev_, 0.4 / 5.0);
    else
      fac = 0.9 * std::pow(std::max(err, 1e-10), -1.0 / 5.0);
    return std::clamp(fac, 0.2, 5.0);
  }

  double initial_step(double x_end) const {
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      double sc = opt_.abs_tol + opt_.rel_tol * std::abs(y_[i]);
      d0 += (y_[i] / sc) * (y_[i] / sc);
      d1 += (k_[0][i] / sc) * (k_[0][i] / sc);
    }
    double h = (d0 > 0 && d1 > 0) ? 0.01 * std::sqrt(d0 / d1)
                                  : 1e-6 * (x_end - x_);
    return std::min({h, 0.1 * (x_end - x_), opt_.h_max});
  }

  OdeOptions opt_;
  double x_;
  State y_;
  std::array<State, 7> k_{};
  bool have_k1_ = false;
  double h_ = 0.0;
  double err_prev_ = 1.0;
  long accepted_ = 0;
};

}  // namespace nvss
