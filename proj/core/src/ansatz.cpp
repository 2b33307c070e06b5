#include "nvss/ansatz.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nvss {

std::string to_string(PsiVariant v) {
  switch (v) {
    case PsiVariant::EnergyWeighted: return "energy_weighted";
    case PsiVariant::PlainPowerLaw: return "plain_power_law";
    case PsiVariant::Tabulated: return "tabulated";
  }
  return "unknown";
}

PsiVariant psi_variant_from_string(const std::string& s) {
  if (s == "energy_weighted") return PsiVariant::EnergyWeighted;
  if (s == "plain_power_law") return PsiVariant::PlainPowerLaw;
  if (s == "tabulated") return PsiVariant::Tabulated;
  throw std::invalid_argument("unknown ansatz variant '" + s + "'");
}

void PolytropicAnsatz::validate() const {
  if (!(k > -0.5)) throw std::invalid_argument("k must exceed -1/2");
  if (variant != PsiVariant::Tabulated && !(mu > -1.0))
    throw std::invalid_argument("mu must exceed -1");
  if (!(E0 > 0.0)) throw std::invalid_argument("E0 must be positive");
  if (!(amplitude >= 0.0))
    throw std::invalid_argument("amplitude must be non-negative");
  if (variant == PsiVariant::Tabulated) {
    if (psi_energies.size() < 2 || psi_energies.size() != psi_values.size())
      throw std::invalid_argument(
          "tabulated ansatz needs matching energy/value lists of length >= 2");
    if (!std::is_sorted(psi_energies.begin(), psi_energies.end()) ||
        std::adjacent_find(psi_energies.begin(), psi_energies.end()) !=
            psi_energies.end())
      throw std::invalid_argument("tabulated energies must strictly increase");
    if (psi_energies.front() <= 0.0)
      throw std::invalid_argument("tabulated energies must be positive");
    if (std::abs(psi_energies.back() - E0) > 1e-12 * E0)
      throw std::invalid_argument("tabulated grid must end at E0");
    for (double v : psi_values)
      if (!(v >= 0.0))
        throw std::invalid_argument("tabulated values must be non-negative");
    if (psi_values.back() != 0.0)
      throw std::invalid_argument("tabulated values must vanish at E0");
  }
}

double PolytropicAnsatz::psi(double E) const {
  if (E >= E0 || E <= 0.0) return 0.0;
  switch (variant) {
    case PsiVariant::EnergyWeighted:
      return amplitude * E * std::pow(E0 * E0 - E * E, mu);
    case PsiVariant::PlainPowerLaw:
      return amplitude * std::pow(E0 - E, mu);
    case PsiVariant::Tabulated: {
      if (E <= psi_energies.front()) return amplitude * psi_values.front();
      if (!table_cache_)
        table_cache_ = std::make_shared<const MonotoneCubic>(
            MonotoneCubic::fit(psi_energies, psi_values));
      return amplitude * std::max(0.0, (*table_cache_)(E));
    }
  }
  return 0.0;
}

double PolytropicAnsatz::cutoff_exponent() const {
  return variant == PsiVariant::Tabulated ? 0.0 : mu;
}

MonotoneCubic MonotoneCubic::fit(std::vector<double> x, std::vector<double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n)
    throw std::invalid_argument("MonotoneCubic: need >= 2 matching nodes");
  std::vector<double> d(n, 0.0), slope(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i)
    slope[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
  d[0] = slope[0];
  d[n - 1] = slope[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i)
    d[i] = (slope[i - 1] * slope[i] > 0.0)
               ? 0.5 * (slope[i - 1] + slope[i])
               : 0.0;
  // Fritsch-Carlson limiter keeps the interpolant monotone per interval.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (slope[i] == 0.0) {
      d[i] = d[i + 1] = 0.0;
      continue;
    }
    double a = d[i] / slope[i], b = d[i + 1] / slope[i];
    double s = a * a + b * b;
    if (s > 9.0) {
      double t = 3.0 / std::sqrt(s);
      d[i] = t * a * slope[i];
      d[i + 1] = t * b * slope[i];
    }
  }
  MonotoneCubic c;
  c.x = std::move(x);
  c.y = std::move(y);
  c.d = std::move(d);
  return c;
}

double MonotoneCubic::operator()(double xi) const {
  if (xi <= x.front()) return y.front();
  if (xi >= x.back()) return y.back();
  auto it = std::upper_bound(x.begin(), x.end(), xi);
  std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
  double h = x[i + 1] - x[i], t = (xi - x[i]) / h;
  double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y[i] + (t3 - 2 * t2 + t) * h * d[i] +
         (-2 * t3 + 3 * t2) * y[i + 1] + (t3 - t2) * h * d[i + 1];
}

}  // namespace nvss
