#pragma once

#include <memory>
#include <string>
#include <vector>

namespace nvss {

enum class PsiVariant { EnergyWeighted, PlainPowerLaw, Tabulated };

std::string to_string(PsiVariant v);
PsiVariant psi_variant_from_string(const std::string& s);

// Microscopic equation of state Phi(E,F) = Psi(E) * F^k with Psi supported on
// (0, E0].  EnergyWeighted: Psi = amplitude * E * (E0^2 - E^2)_+^mu.
// PlainPowerLaw: Psi = amplitude * (E0 - E)_+^mu.  Tabulated: monotone cubic
// through (psi_energies, psi_values), zero for E >= E0 = psi_energies.back().
struct PolytropicAnsatz {
  PsiVariant variant = PsiVariant::EnergyWeighted;
  double k = 0.0;
  double mu = 0.5;
  double E0 = 1.0;
  double amplitude = 1.0;
  std::vector<double> psi_energies;
  std::vector<double> psi_values;

  // Throws std::invalid_argument naming the violated constraint
  // (k > -1/2, mu > -1, E0 > 0, amplitude >= 0, table shape/monotonicity).
  void validate() const;

  // Psi(E); zero for E outside the support.
  double psi(double E) const;

  // Exponent of the (E0 - E) vanish rate at the cutoff used by the kernel
  // quadrature to absorb the endpoint: mu for the power-law variants, 0 for
  // tabulated data (which vanishes at least linearly, handled unweighted).
  double cutoff_exponent() const;

 private:
  // Lazily built interpolant for the tabulated variant; rebuilt if the table
  // is edited after first use is not supported (tables are set once).
  mutable std::shared_ptr<const struct MonotoneCubic> table_cache_;
};

// Fritsch-Carlson monotone cubic interpolant; used for the tabulated variant
// and for reconstructing fields between stored profile nodes.
struct MonotoneCubic {
  std::vector<double> x, y, d;  // nodes, values, node derivatives

  static MonotoneCubic fit(std::vector<double> x, std::vector<double> y);
  double operator()(double xi) const;  // clamps outside [x.front(), x.back()]
};

}  // namespace nvss
