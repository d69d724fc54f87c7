#include "qgb/thermo.hpp"

#include <cmath>
#include <stdexcept>

#include "qgb/numerics.hpp"

namespace qgb {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kZMax = 0.9999;       // fugacity cap; physics stays below it
constexpr double kTailRel = 1e-8;      // required relative tail control

void check_beta(double beta, const char* who) {
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw std::invalid_argument(std::string(who) + ": beta must be positive and finite");
}

}  // namespace

double polylog_half(double z) {
  if (!(z >= 0.0) || !(z <= kZMax))
    throw std::invalid_argument("polylog_half: z must lie in [0, 0.9999]");
  if (z == 0.0) return 0.0;
  double sum = 0.0;
  double zk = 1.0;
  for (long k = 1; k < 100000000L; ++k) {
    zk *= z;
    double term = zk / std::sqrt(static_cast<double>(k));
    sum += term;
    // Remaining tail is below zk * z / ((1 - z) sqrt(k)).
    if (term * z / (1.0 - z) < 1e-16 * sum) break;
  }
  return sum;
}

double polylog_half_integral(double z) {
  if (!(z >= 0.0) || !(z <= kZMax))
    throw std::invalid_argument("polylog_half_integral: z must lie in [0, 0.9999]");
  if (z == 0.0) return 0.0;
  auto integrand = [z](double u) {
    double w = z * std::exp(-u * u);
    return w / (1.0 - w);
  };
  // Integrand decays like e^{-u^2}; beyond u = 8.5 it is below 1e-31.
  double integral = num::adaptive_simpson(integrand, 0.0, 8.5, 1e-13);
  return 2.0 / std::sqrt(kPi) * integral;
}

double rho_plus(double beta, double mu, double l_max) {
  check_beta(beta, "rho_plus");
  double gap = l_max > 0.0 ? -l_max * l_max : 0.0;
  if (!(mu <= gap + 1e-12 * std::max(1.0, std::abs(gap))))
    throw std::invalid_argument(l_max > 0.0
                                    ? "rho_plus: mu must not exceed -l_max^2"
                                    : "rho_plus: mu must be negative for a gapless graph");
  if (l_max <= 0.0 && !(mu < 0.0))
    throw std::invalid_argument("rho_plus: mu must be negative for a gapless graph");
  double z = std::exp(beta * std::min(mu, gap));
  return polylog_half(z) / std::sqrt(4.0 * kPi * beta);
}

double critical_beta(double rho0, double l_max) {
  if (!(rho0 > 0.0)) throw std::invalid_argument("critical_beta: rho0 must be positive");
  if (!(l_max > 0.0))
    throw std::invalid_argument(
        "critical_beta: requires a spectral gap (l_max > 0); no finite beta_c exists otherwise");
  double gap = l_max * l_max;
  auto excess = [&](double beta) { return rho_plus(beta, -gap, l_max) - rho0; };

  // rho_plus(beta, -gap) decreases strictly from +inf (beta -> 0) to 0.
  double lo = 1.0 / gap, hi = 1.0 / gap;
  double zcap_beta = -std::log(kZMax) / gap;  // smallest admissible beta
  while (excess(lo) < 0.0) {
    lo *= 0.5;
    if (lo < zcap_beta)
      throw std::runtime_error("critical_beta: rho0 too large for the admissible fugacity range");
  }
  while (excess(hi) > 0.0) {
    hi *= 2.0;
    if (hi > 1e12 / gap) throw std::runtime_error("critical_beta: failed to bracket beta_c");
  }
  return num::bisect_root(excess, lo, hi, 1e-14);
}

double condensate_fraction(double beta, double beta_c, double l_max) {
  check_beta(beta, "condensate_fraction");
  if (!(beta_c > 0.0))
    throw std::invalid_argument("condensate_fraction: beta_c must be positive");
  if (!(l_max > 0.0)) throw std::invalid_argument("condensate_fraction: requires l_max > 0");
  if (beta < beta_c * (1.0 - 1e-12))
    throw std::invalid_argument("condensate_fraction: beta < beta_c (no condensate above T_c)");
  double gap = l_max * l_max;
  double ratio = polylog_half(std::exp(-beta * gap)) / polylog_half(std::exp(-beta_c * gap));
  double frac = 1.0 - std::sqrt(beta_c / beta) * ratio;
  return std::min(1.0, std::max(0.0, frac));
}

namespace {

// Certified bound on sum_{E_n > window_hi} mult_n e^{-beta(E_n - mu)} from
// the Weyl estimate N(K) <= L K / pi + 2 E (Neumann bracketing gives one
// extra state per edge endpoint pair):
//   tail <= (L/pi) Int_{k_top}^inf e^{-beta(k^2-mu)} dk + 2E e^{-beta(E_top-mu)}.
double weyl_exp_tail(const Spectrum& s, double beta, double mu) {
  double e_top = s.window_hi;
  double k_top = std::sqrt(std::max(e_top, 0.0));
  double integral = std::exp(beta * mu) * 0.5 * std::sqrt(kPi / beta) *
                    std::erfc(k_top * std::sqrt(beta));
  double discrete = 2.0 * std::max(s.edge_count, 1) * std::exp(-beta * (e_top - mu));
  return s.total_length / kPi * integral + discrete;
}

void check_tail(double value, double tail, const char* who) {
  if (!(tail <= kTailRel * (std::abs(value) + 1e-12)))
    throw std::invalid_argument(std::string(who) +
                                ": spectral window too small for 1e-8 relative tail control");
}

}  // namespace

ThermoSum bose_number_finite(const Spectrum& s, double beta, double mu) {
  check_beta(beta, "bose_number_finite");
  if (s.levels.empty())
    throw std::invalid_argument("bose_number_finite: empty spectrum");
  double e0 = s.min_energy();
  if (!(mu < e0))
    throw std::invalid_argument("bose_number_finite: mu must lie below the lowest eigenvalue");
  std::vector<double> terms;
  terms.reserve(s.levels.size());
  for (const auto& lv : s.levels)
    terms.push_back(lv.multiplicity / std::expm1(beta * (lv.energy - mu)));
  ThermoSum out;
  out.value = num::pairwise_sum(terms);
  double x_top = beta * (s.window_hi - mu);
  out.tail_bound = weyl_exp_tail(s, beta, mu) / (1.0 - std::exp(-x_top));
  check_tail(out.value, out.tail_bound, "bose_number_finite");
  return out;
}

ThermoSum bose_free_energy_finite(const Spectrum& s, double beta, double mu) {
  check_beta(beta, "bose_free_energy_finite");
  if (s.levels.empty())
    throw std::invalid_argument("bose_free_energy_finite: empty spectrum");
  if (!(mu < s.min_energy()))
    throw std::invalid_argument(
        "bose_free_energy_finite: mu must lie below the lowest eigenvalue");
  std::vector<double> terms;
  terms.reserve(s.levels.size());
  for (const auto& lv : s.levels)
    terms.push_back(lv.multiplicity * std::log1p(-std::exp(-beta * (lv.energy - mu))));
  ThermoSum out;
  out.value = num::pairwise_sum(terms) / (beta * s.total_length);
  double x_top = beta * (s.window_hi - mu);
  out.tail_bound =
      weyl_exp_tail(s, beta, mu) / ((1.0 - std::exp(-x_top)) * beta * s.total_length);
  check_tail(out.value, out.tail_bound, "bose_free_energy_finite");
  return out;
}

ThermoSum fermi_free_energy_finite(const Spectrum& s, double beta, double mu) {
  check_beta(beta, "fermi_free_energy_finite");
  if (s.levels.empty())
    throw std::invalid_argument("fermi_free_energy_finite: empty spectrum");
  std::vector<double> terms;
  terms.reserve(s.levels.size());
  for (const auto& lv : s.levels)
    terms.push_back(lv.multiplicity * std::log1p(std::exp(-beta * (lv.energy - mu))));
  ThermoSum out;
  out.value = -num::pairwise_sum(terms) / (beta * s.total_length);
  out.tail_bound = weyl_exp_tail(s, beta, mu) / (beta * s.total_length);
  check_tail(out.value, out.tail_bound, "fermi_free_energy_finite");
  return out;
}

double dirichlet_fermi_free_energy(double beta, double mu) {
  check_beta(beta, "dirichlet_fermi_free_energy");
  // Integrand log(1 + e^{-beta(k^2-mu)}) is below 1e-18 once
  // beta(k^2 - mu) > 42.
  double k_top = std::sqrt(42.0 / beta + std::max(mu, 0.0));
  auto integrand = [&](double k) { return std::log1p(std::exp(-beta * (k * k - mu))); };
  double integral = num::adaptive_simpson(integrand, 0.0, k_top, 1e-12);
  return -integral / (kPi * beta);
}

double invert_density_finite(const Spectrum& s, double beta, double n_target) {
  check_beta(beta, "invert_density_finite");
  if (!(n_target > 0.0))
    throw std::invalid_argument("invert_density_finite: target number must be positive");
  double e0 = s.min_energy();
  double delta = 1e-10 * std::max(1.0, std::abs(e0));
  double hi = e0 - delta;
  auto number = [&](double mu) { return bose_number_finite(s, beta, mu).value; };
  if (number(hi) < n_target)
    throw std::runtime_error("invert_density_finite: target exceeds the occupancy at mu -> E0");
  double span = std::max(1.0, 1.0 / beta);
  double lo = e0 - span;
  while (number(lo) > n_target) {
    span *= 2.0;
    lo = e0 - span;
    if (span > 1e12)
      throw std::runtime_error("invert_density_finite: failed to bracket mu from below");
  }
  return num::bisect_root([&](double mu) { return number(mu) - n_target; }, lo, hi, 1e-13);
}

DensityInversion invert_density_limit(double beta, double rho0, double l_max) {
  check_beta(beta, "invert_density_limit");
  if (!(rho0 > 0.0))
    throw std::invalid_argument("invert_density_limit: rho0 must be positive");
  if (!(l_max > 0.0))
    throw std::invalid_argument("invert_density_limit: requires a spectral gap (l_max > 0)");
  double gap = -l_max * l_max;
  double rho_max = rho_plus(beta, gap, l_max);
  if (rho0 >= rho_max) return {gap, true};
  auto excess = [&](double mu) { return rho_plus(beta, mu, l_max) - rho0; };
  double lo = gap - std::max(1.0, 1.0 / beta);
  while (excess(lo) > 0.0) {
    lo = gap - 2.0 * (gap - lo);
    if (gap - lo > 1e12)
      throw std::runtime_error("invert_density_limit: failed to bracket mu from below");
  }
  return {num::bisect_root(excess, lo, gap, 1e-14), false};
}

}  // namespace qgb
