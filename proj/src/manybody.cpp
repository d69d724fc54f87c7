#include "qgb/manybody.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qgb/numerics.hpp"

namespace qgb {

namespace {

constexpr double kPi = 3.14159265358979323846;

// One-particle level slots expanded by multiplicity, ascending.
std::vector<double> expand_slots(const Spectrum& s) {
  std::vector<double> slots;
  for (const auto& lv : s.levels)
    for (int m = 0; m < lv.multiplicity; ++m) slots.push_back(lv.energy);
  return slots;
}

void check_particles(int n, const char* who) {
  if (n < 1) throw std::invalid_argument(std::string(who) + ": need at least one particle");
  if (n > 64) throw std::invalid_argument(std::string(who) + ": particle number capped at 64");
}

std::vector<EigvalEntry> merge_levels(std::vector<double>& energies, double tol) {
  std::sort(energies.begin(), energies.end());
  std::vector<EigvalEntry> out;
  for (double e : energies) {
    if (!out.empty() && e - out.back().energy <= tol)
      ++out.back().multiplicity;
    else
      out.push_back({e, 1});
  }
  return out;
}

}  // namespace

const char* statistics_name(Statistics s) {
  switch (s) {
    case Statistics::boson: return "boson";
    case Statistics::fermion: return "fermion";
    case Statistics::hardcore_boson: return "hardcore_boson";
  }
  return "unknown";
}

ManyBodySpectrum free_spectrum(const Spectrum& s, int n, Statistics stat, double ceiling) {
  check_particles(n, "free_spectrum");
  if (s.levels.empty()) throw std::invalid_argument("free_spectrum: empty one-particle spectrum");
  double e0 = s.min_energy();
  // Every constituent of an N-tuple with total <= ceiling is at most
  // ceiling - (N-1) e0, which must be inside the one-particle window.
  double complete_below = s.window_hi + (n - 1) * e0;
  if (ceiling > complete_below)
    throw std::invalid_argument(
        "free_spectrum: one-particle window guarantees completeness only below " +
        std::to_string(complete_below) + ", requested ceiling " + std::to_string(ceiling));

  bool fermionic = stat != Statistics::boson;
  std::vector<double> slots = expand_slots(s);
  int ns = static_cast<int>(slots.size());
  if (fermionic && ns < n)
    throw std::invalid_argument("free_spectrum: fewer one-particle slots than fermions");

  std::vector<double> sums;
  // DFS over slot indices, non-decreasing (bosons) or strictly increasing
  // (fermions); prune on the cheapest possible completion.
  struct Frame {
    int slot, left;
    double acc;
  };
  std::vector<Frame> stack;
  stack.push_back({0, n, 0.0});
  while (!stack.empty()) {
    auto [slot, left, acc] = stack.back();
    stack.pop_back();
    if (left == 0) {
      sums.push_back(acc);
      continue;
    }
    if (slot >= ns) continue;
    double cheapest = acc + left * slots[slot];
    if (fermionic) {
      cheapest = acc;
      if (slot + left > ns) continue;
      for (int j = 0; j < left; ++j) cheapest += slots[slot + j];
    }
    if (cheapest > ceiling) continue;
    // skip this slot entirely
    stack.push_back({slot + 1, left, acc});
    // occupy this slot once
    stack.push_back({fermionic ? slot + 1 : slot, left - 1, acc + slots[slot]});
  }

  ManyBodySpectrum out;
  out.n_particles = n;
  out.statistics = stat;
  out.complete_below = complete_below;
  double merge_tol = std::max(1e-9, n * s.tol);
  out.energies = merge_levels(sums, merge_tol);
  while (!out.energies.empty() && out.energies.back().energy > ceiling) out.energies.pop_back();
  return out;
}

ManyBodySpectrum hardcore_spectrum(const Spectrum& s, int n, double ceiling) {
  ManyBodySpectrum out = free_spectrum(s, n, Statistics::fermion, ceiling);
  out.statistics = Statistics::hardcore_boson;
  return out;
}

namespace {

// z(k beta) in ground-state-shifted form: sum_j mult_j e^{-k beta (E_j - E0)}.
double shifted_single_sum(const Spectrum& s, double kbeta, double e0) {
  std::vector<double> terms;
  terms.reserve(s.levels.size());
  for (const auto& lv : s.levels)
    terms.push_back(lv.multiplicity * std::exp(-kbeta * (lv.energy - e0)));
  return num::pairwise_sum(terms);
}

std::vector<double> shifted_partition_ladder(const Spectrum& s, int n, double beta,
                                             Statistics stat) {
  double e0 = s.min_energy();
  bool fermionic = stat != Statistics::boson;
  std::vector<double> z_single(n + 1, 0.0);
  for (int k = 1; k <= n; ++k) z_single[k] = shifted_single_sum(s, k * beta, e0);
  std::vector<double> z(n + 1, 0.0);
  z[0] = 1.0;
  for (int m = 1; m <= n; ++m) {
    double acc = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= m; ++k) {
      acc += sign * z_single[k] * z[m - k];
      if (fermionic) sign = -sign;
    }
    z[m] = acc / m;
    if (!std::isfinite(z[m]) || (fermionic && z[m] <= 0.0))
      throw std::runtime_error(
          "canonical_state: fermionic partition sum underflowed (more particles than "
          "thermally accessible levels)");
  }
  return z;
}

}  // namespace

CanonicalState canonical_state(const Spectrum& s, int n, double beta, Statistics stat) {
  check_particles(n, "canonical_state");
  if (!(beta > 0.0)) throw std::invalid_argument("canonical_state: beta must be positive");
  if (s.levels.empty()) throw std::invalid_argument("canonical_state: empty spectrum");

  auto z = shifted_partition_ladder(s, n, beta, stat);
  double e0 = s.min_energy();
  bool fermionic = stat != Statistics::boson;

  CanonicalState out;
  out.n_particles = n;
  out.beta = beta;
  out.statistics = stat;
  out.z_shifted = z[n];
  out.level_occupations.resize(s.levels.size());
  double total = 0.0;
  for (std::size_t j = 0; j < s.levels.size(); ++j) {
    double ej = s.levels[j].energy - e0;
    double occ = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= n; ++k) {
      occ += sign * std::exp(-k * beta * ej) * z[n - k];
      if (fermionic) sign = -sign;
    }
    occ /= z[n];
    out.lambda_max = std::max(out.lambda_max, occ);
    out.level_occupations[j] = occ * s.levels[j].multiplicity;
    total += out.level_occupations[j];
  }
  if (std::abs(total - n) > 1e-8 * n)
    throw std::runtime_error(
        "canonical_state: occupations fail to sum to N (sum = " + std::to_string(total) +
        "); the spectrum window is too small or the fermionic alternating sum has lost "
        "all precision (beta too large for this level density)");
  return out;
}

namespace {

// Enumerate slot occupations: non-decreasing slot tuples (bosons) or strictly
// increasing (fermions).  Calls visit(total_shifted_energy, occupation_slots).
template <typename Visit>
void enumerate_configs(const std::vector<double>& slots, int n, bool fermionic, double e0,
                       Visit&& visit) {
  int ns = static_cast<int>(slots.size());
  std::vector<int> pick(n, 0);
  // iterative odometer over slot indices
  for (int i = 0; i < n; ++i) pick[i] = fermionic ? i : 0;
  if (fermionic && ns < n) return;
  while (true) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += slots[pick[i]] - e0;
    visit(acc, pick);
    // advance
    int i = n - 1;
    while (i >= 0) {
      int cap = fermionic ? ns - (n - i) : ns - 1;
      if (pick[i] < cap) {
        ++pick[i];
        for (int j = i + 1; j < n; ++j) pick[j] = fermionic ? pick[j - 1] + 1 : pick[i];
        break;
      }
      --i;
    }
    if (i < 0) break;
  }
}

}  // namespace

double enumerate_partition_shifted(const Spectrum& s, int n, double beta, Statistics stat) {
  check_particles(n, "enumerate_partition_shifted");
  double e0 = s.min_energy();
  bool fermionic = stat != Statistics::boson;
  double z = 0.0;
  enumerate_configs(expand_slots(s), n, fermionic, e0,
                    [&](double energy, const std::vector<int>&) { z += std::exp(-beta * energy); });
  return z;
}

std::vector<double> enumerate_occupations(const Spectrum& s, int n, double beta, Statistics stat) {
  check_particles(n, "enumerate_occupations");
  double e0 = s.min_energy();
  bool fermionic = stat != Statistics::boson;
  auto slots = expand_slots(s);
  std::vector<double> occ(slots.size(), 0.0);
  double z = 0.0;
  enumerate_configs(slots, n, fermionic, e0, [&](double energy, const std::vector<int>& pick) {
    double w = std::exp(-beta * energy);
    z += w;
    for (int p : pick) occ[p] += w;
  });
  if (z <= 0.0) throw std::runtime_error("enumerate_occupations: vanishing partition sum");
  for (double& o : occ) o /= z;
  // collapse slots back onto levels
  std::vector<double> by_level(s.levels.size(), 0.0);
  std::size_t slot = 0;
  for (std::size_t j = 0; j < s.levels.size(); ++j)
    for (int m = 0; m < s.levels[j].multiplicity; ++m) by_level[j] += occ[slot++];
  return by_level;
}

ModCheckReport ground_state_mod_check(double l, int grid_n) {
  if (!(l > 0.0)) throw std::invalid_argument("ground_state_mod_check: length must be positive");
  if (grid_n < 16)
    throw std::invalid_argument("ground_state_mod_check: need at least a 16-point grid");

  auto phi = [&](int mode, double x) { return std::sqrt(2.0 / l) * std::sin(mode * kPi * x / l); };
  auto dphi = [&](int mode, double x) {
    return std::sqrt(2.0 / l) * (mode * kPi / l) * std::cos(mode * kPi * x / l);
  };
  auto psi = [&](double x, double y) { return phi(1, x) * phi(2, y) - phi(2, x) * phi(1, y); };

  ModCheckReport rep;
  rep.target_energy = (1.0 + 4.0) * (kPi / l) * (kPi / l);

  double h = l / grid_n;
  for (int i = 0; i <= grid_n; ++i) {
    double x = i * h;
    rep.diagonal_residual = std::max(rep.diagonal_residual, std::abs(psi(x, x)));
    for (int j = 0; j <= grid_n; ++j) {
      double y = j * h;
      rep.symmetry_residual =
          std::max(rep.symmetry_residual, std::abs(std::abs(psi(x, y)) - std::abs(psi(y, x))));
    }
  }

  // Rayleigh quotient of |psi| on the dissected triangle 0 < x < y < l.  The
  // modulus equals -psi there (psi is single-signed off the diagonal), so
  // |grad |psi|| = |grad psi|.  Midpoint rule on interior square cells plus
  // centroid rule on the triangular half-cells along the diagonal keeps the
  // quadrature second order.
  double num_acc = 0.0, den_acc = 0.0;
  auto add_point = [&](double x, double y, double w) {
    double gx = dphi(1, x) * phi(2, y) - dphi(2, x) * phi(1, y);
    double gy = phi(1, x) * dphi(2, y) - phi(2, x) * dphi(1, y);
    double v = psi(x, y);
    num_acc += (gx * gx + gy * gy) * w;
    den_acc += v * v * w;
  };
  for (int i = 0; i < grid_n; ++i) {
    add_point((i + 1.0 / 3.0) * h, (i + 2.0 / 3.0) * h, 0.5 * h * h);
    for (int j = i + 1; j < grid_n; ++j) add_point((i + 0.5) * h, (j + 0.5) * h, h * h);
  }
  rep.energy_quotient = num_acc / den_acc;
  rep.ok = rep.diagonal_residual < 1e-12 && rep.symmetry_residual < 1e-12 &&
           std::abs(rep.energy_quotient - rep.target_energy) <
               1e-3 * std::max(1.0, rep.target_energy);
  return rep;
}

}  // namespace qgb
