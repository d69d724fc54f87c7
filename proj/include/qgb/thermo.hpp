#pragma once

// Grand-canonical thermodynamics of the ideal Bose / Fermi gas on a metric
// graph: the Bose-Einstein function g_{1/2}, closed-form thermodynamic-limit
// densities, chemical-potential inversion, the critical inverse temperature
// and condensate fraction for gapped (L_max > 0) conditions, and
// finite-volume spectral sums with certified Weyl tail bounds.
//
// Units: hbar^2/2m = 1 and k_B = 1 throughout, so energies are k^2 and the
// inverse temperature beta carries dimension 1/energy.

#include "qgb/spectrum.hpp"

namespace qgb {

// g_{1/2}(z) = sum_{k>=1} z^k / sqrt(k).  Defined for z in [0, 0.9999]; the
// physical fugacity never exceeds e^{-beta L_max^2} < 1, and the cap keeps
// the series cost bounded.  Throws std::invalid_argument outside the domain.
double polylog_half(double z);

// Independent evaluation of g_{1/2} through its integral representation
// (2/sqrt(pi)) Int_0^inf z e^{-u^2} / (1 - z e^{-u^2}) du, used to
// cross-check the series.
double polylog_half_integral(double z);

// Thermodynamic-limit density of positive-energy states,
// rho_plus(beta, mu) = g_{1/2}(e^{beta mu}) / sqrt(4 pi beta).
// Requires mu <= -l_max^2 when l_max > 0 (gapped case), mu < 0 otherwise.
double rho_plus(double beta, double mu, double l_max);

// Critical inverse temperature: the unique solution of
//   rho0 = g_{1/2}(e^{-beta_c l_max^2}) / sqrt(4 pi beta_c).
// Requires rho0 > 0 and l_max > 0 (no finite beta_c exists for a gapless
// graph; that regime is rejected with std::invalid_argument).
double critical_beta(double rho0, double l_max);

// Condensate fraction rho_minus / rho0 at beta >= beta_c:
//   1 - sqrt(beta_c/beta) g_{1/2}(e^{-beta l_max^2}) / g_{1/2}(e^{-beta_c l_max^2}).
double condensate_fraction(double beta, double beta_c, double l_max);

// Result of a truncated spectral sum together with a rigorous bound on the
// neglected tail (from the Weyl counting estimate N(K) <= L K / pi + 2 E).
struct ThermoSum {
  double value = 0.0;
  double tail_bound = 0.0;
};

// Expected boson number N(beta, mu) = sum_n mult_n / (e^{beta(E_n - mu)} - 1)
// over the spectrum's window.  Requires mu < min eigenvalue and a window wide
// enough that the certified tail is below 1e-8 relative.
ThermoSum bose_number_finite(const Spectrum& s, double beta, double mu);

// Finite-volume free-energy densities
//   f_V = (1/(beta L)) sum_n mult_n log(1 - e^{-beta(E_n - mu)})   (bosons)
//   f_V = -(1/(beta L)) sum_n mult_n log(1 + e^{-beta(E_n - mu)})  (fermions)
// with the same tail certification.  Bosons require mu < min eigenvalue.
ThermoSum bose_free_energy_finite(const Spectrum& s, double beta, double mu);
ThermoSum fermi_free_energy_finite(const Spectrum& s, double beta, double mu);

// Thermodynamic-limit free-energy density of free fermions with Dirichlet
// conditions, f_{F,D}(beta, mu) = -(1/(pi beta)) Int_0^inf
// log(1 + e^{-beta(k^2 - mu)}) dk; mu may have either sign.
double dirichlet_fermi_free_energy(double beta, double mu);

// Chemical potential solving N(beta, mu) = n_target for a finite spectrum.
double invert_density_finite(const Spectrum& s, double beta, double n_target);

struct DensityInversion {
  double mu = 0.0;
  bool condensed = false;  // rho0 exceeds rho_plus(beta, -l_max^2): mu pinned
};

// Thermodynamic-limit inversion at fixed density rho0 for a gapped graph:
// below the critical density the returned mu < -l_max^2 satisfies
// rho_plus(beta, mu) = rho0; above it the potential pins at -l_max^2 and the
// state is condensed.
DensityInversion invert_density_limit(double beta, double rho0, double l_max);

}  // namespace qgb
