#include <benchmark/benchmark.h>

#include <cmath>

#include "nvss/observables.hpp"
#include "nvss/solver.hpp"

namespace {

nvss::PolytropicAnsatz baseline_ansatz() {
  nvss::PolytropicAnsatz a;
  a.variant = nvss::PsiVariant::EnergyWeighted;
  a.k = 0.0;
  a.mu = 0.5;
  a.E0 = std::sqrt(0.9);
  a.amplitude = 1.0;
  return a;
}

nvss::PolytropicAnsatz power_law_ansatz() {
  nvss::PolytropicAnsatz a = baseline_ansatz();
  a.variant = nvss::PsiVariant::PlainPowerLaw;
  return a;
}

void bm_kernel_closed_form(benchmark::State& state) {
  nvss::AnsatzKernels kernels(baseline_ansatz());
  double u = 0.6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels.h(1.5, u));
  }
}
BENCHMARK(bm_kernel_closed_form);

void bm_kernel_quadrature(benchmark::State& state) {
  nvss::AnsatzKernels kernels(power_law_ansatz());
  double u = 0.6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels.h(1.5, u));
  }
}
BENCHMARK(bm_kernel_quadrature);

void bm_field_rhs(benchmark::State& state) {
  nvss::AnsatzKernels kernels(baseline_ansatz());
  for (auto _ : state) {
    benchmark::DoNotOptimize(nvss::field_rhs(1.5, -0.5, kernels));
  }
}
BENCHMARK(bm_field_rhs);

void bm_solve_baseline(benchmark::State& state) {
  nvss::PolytropicAnsatz a = baseline_ansatz();
  nvss::SolverNumerics num;
  double phi0 = std::log(0.5 * a.E0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(nvss::integrate_steady_state(phi0, a, num));
  }
}
BENCHMARK(bm_solve_baseline);

void bm_observables(benchmark::State& state) {
  nvss::PolytropicAnsatz a = baseline_ansatz();
  nvss::SolverNumerics num;
  nvss::RadialProfile p =
      nvss::integrate_steady_state(std::log(0.5 * a.E0), a, num);
  nvss::AnsatzKernels kernels(a);
  for (auto _ : state) {
    benchmark::DoNotOptimize(nvss::build_observables(p, kernels));
  }
}
BENCHMARK(bm_observables);

}  // namespace

BENCHMARK_MAIN();
