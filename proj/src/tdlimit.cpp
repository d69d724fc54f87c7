#include "qgb/tdlimit.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "qgb/numerics.hpp"
#include "qgb/thermo.hpp"

namespace qgb {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kGapTol = 1e-12;  // L_max above this counts as a spectral gap

void check_eta_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("tdlimit: eta grid must not be empty");
  double prev = 0.0;
  for (double eta : grid) {
    if (!(eta > prev) || !std::isfinite(eta))
      throw std::invalid_argument("tdlimit: eta grid must be finite, positive, strictly increasing");
    prev = eta;
  }
}

// Run work(i, parallel) for i = 0..n-1 on up to max_threads() workers.  Each
// call writes only its own record, so results do not depend on scheduling.
template <typename Work>
void for_each_record(int n, const Work& work) {
  int nt = std::min(max_threads(), n);
  if (nt <= 1) {
    for (int i = 0; i < n; ++i) work(i, false);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (int t = 0; t < nt; ++t)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) work(i, true);
    });
  for (auto& th : pool) th.join();
}

// Inner solves go single-threaded when the scan itself is parallel.
SolverOptions row_options(const SolverOptions& opts, bool parallel) {
  SolverOptions o = opts;
  if (parallel) o.threads = 1;
  return o;
}

// Best paper-family Rayleigh quotient admissible on a graph whose shortest
// edge is 2 lambda_cap: the trial lives within lambda of every edge end, so
// l_e >= 2 lambda is required for all edges.  For each alpha the optimal
// width is lambda*(alpha) = 2 alpha^2 / ((2 alpha - 1) L_max), clamped to
// lambda_cap; the unconstrained branch is best at the largest alpha with
// lambda* <= lambda_cap (added exactly), the clamped branch is sampled on a
// log grid.
double best_rayleigh(double l_max_eigenvalue, double lambda_cap) {
  double best = rayleigh_trial(l_max_eigenvalue, 1.0, std::min(2.0 / l_max_eigenvalue, lambda_cap));
  for (int j = 1; j <= 140; ++j) {
    double alpha = std::pow(2.0, j / 10.0);
    double lam = std::min(2.0 * alpha * alpha / ((2.0 * alpha - 1.0) * l_max_eigenvalue), lambda_cap);
    best = std::min(best, rayleigh_trial(l_max_eigenvalue, alpha, lam));
  }
  // Boundary alpha solving lambda*(alpha) = lambda_cap (exists once
  // lambda_cap L_max >= 2); the unconstrained value improves with alpha, so
  // this is the exact optimum of that branch.
  double cap = lambda_cap * l_max_eigenvalue;
  if (cap >= 2.0) {
    double alpha_b = 0.5 * (cap + std::sqrt(cap * (cap - 2.0)));
    if (alpha_b >= 1.0 && std::isfinite(alpha_b))
      best = std::min(best, rayleigh_trial(l_max_eigenvalue, alpha_b, lambda_cap));
  }
  return best;
}

// Per-eta spectral window for grand-canonical sums: the floor sits safely
// below the proven bound -s^2 (within the solver's own -1.25 s^2 clip) and
// the ceiling makes the certified Weyl tail ~ e^{-45} relative.
std::pair<double, double> thermo_window(const MetricGraph& gs, double l_max_eigenvalue,
                                        bool gapped, double beta, double mu) {
  double lo = -1.0;
  if (gapped) {
    double s = lower_bound_s(gs.min_length(), l_max_eigenvalue);
    lo = -1.2 * s * s;
  }
  return {lo, std::max(mu, 0.0) + 45.0 / beta};
}

// TL free-energy density of the ideal Bose gas,
// (1/(pi beta)) Int_0^inf log(1 - e^{-beta(k^2 - mu)}) dk, mu < 0.
double dirichlet_bose_free_energy(double beta, double mu) {
  // Integrand magnitude is below 1e-18 once beta(k^2 - mu) > 42.
  double k_top = std::sqrt(42.0 / beta);
  auto integrand = [&](double k) { return std::log1p(-std::exp(-beta * (k * k - mu))); };
  return num::adaptive_simpson(integrand, 0.0, k_top, 1e-12) / (kPi * beta);
}

// Scan-level summaries from the successful records: final error against the
// target, the empirical power-law rate of the last error pair (reported,
// never asserted), and optionally one Richardson step in 1/eta.
template <typename Value>
void summarize(TLScan& out, const Value& value, double target, bool extrapolate) {
  const TLRecord* prev = nullptr;
  const TLRecord* last = nullptr;
  for (const TLRecord& r : out.records) {
    if (!r.ok || !std::isfinite(value(r))) continue;
    prev = last;
    last = &r;
  }
  if (last == nullptr) {
    out.diagnostics.push_back("no successful record: summaries unavailable");
    return;
  }
  out.final_error = std::abs(value(*last) - target);
  if (prev != nullptr) {
    double err_prev = std::abs(value(*prev) - target);
    if (out.final_error > 0.0 && err_prev > 0.0)
      out.empirical_rate = std::log(err_prev / out.final_error) / std::log(last->eta / prev->eta);
    if (out.final_error <= 1e-11)
      out.diagnostics.push_back("final error is at the solver resolution; the empirical rate is a tolerance artifact");
    if (extrapolate)
      out.extrapolated = value(*last) + (value(*last) - value(*prev)) / (last->eta / prev->eta - 1.0);
  }
}

TLScan scan_header(const char* kind, const MetricGraph& g, const VertexConditions& c,
                   const std::vector<double>& grid) {
  validate_conditions(c);
  if (c.size() != g.ordering().size())
    throw std::invalid_argument("tdlimit: conditions sized for a different graph");
  check_eta_grid(grid);
  TLScan out;
  out.kind = kind;
  out.graph_fingerprint = g.fingerprint();
  out.conditions_fingerprint = c.fingerprint();
  out.records.resize(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) out.records[i].eta = grid[i];
  return out;
}

}  // namespace

std::vector<double> eta_grid_geometric(double lo, double hi, double ratio) {
  if (!(lo > 0.0) || !std::isfinite(lo)) throw std::invalid_argument("eta_grid_geometric: lo must be positive");
  if (!(hi >= lo) || !std::isfinite(hi)) throw std::invalid_argument("eta_grid_geometric: hi must be >= lo");
  if (!(ratio > 1.0)) throw std::invalid_argument("eta_grid_geometric: ratio must exceed 1");
  std::vector<double> grid;
  for (double eta = lo; eta <= hi * (1.0 + 1e-12); eta = lo * std::pow(ratio, static_cast<double>(grid.size())))
    grid.push_back(std::min(eta, hi));
  if (grid.back() < hi * (1.0 - 1e-12)) grid.push_back(hi);
  return grid;
}

TLScan scan_ground_state(const MetricGraph& g, const VertexConditions& c,
                         const std::vector<double>& eta_grid, const SolverOptions& opts) {
  TLScan out = scan_header("ground_state", g, c, eta_grid);
  double l_max = largest_l_eigenvalue(c);
  out.gapped = l_max > kGapTol;
  out.target_e0 = out.gapped ? -l_max * l_max : 0.0;
  if (!out.gapped)
    out.diagnostics.push_back(
        "L has no positive eigenvalue: the operator is non-negative at every eta, no trial family "
        "applies and E0 -> 0");
  for_each_record(static_cast<int>(out.records.size()), [&](int i, bool parallel) {
    TLRecord& r = out.records[i];
    try {
      MetricGraph gs = scale(g, r.eta);
      r.e0 = ground_state_energy(gs, c, row_options(opts, parallel));
      if (out.gapped) {
        double s = lower_bound_s(gs.min_length(), l_max);
        r.lower_bound = -s * s;
        r.upper_bound = best_rayleigh(l_max, 0.5 * gs.min_length());
      } else {
        r.lower_bound = 0.0;
      }
      // The lower bound is attained exactly on Robin intervals, so the
      // comparison needs slack for the solver resolution.
      double slack = 50.0 * opts.tol * (1.0 + std::abs(r.e0));
      r.sandwich_ok = r.e0 >= r.lower_bound - slack &&
                      (!std::isfinite(r.upper_bound) || r.e0 <= r.upper_bound + slack);
      if (!r.sandwich_ok) r.note = "sandwich violated: E0 escapes [-s^2, R[Phi]]";
      r.ok = true;
    } catch (const std::exception& ex) {
      r.note = ex.what();
    }
  });
  summarize(out, [](const TLRecord& r) { return r.e0; }, out.target_e0, false);
  return out;
}

TLScan scan_negative_count(const MetricGraph& g, const VertexConditions& c,
                           const std::vector<double>& eta_grid, const SolverOptions& opts) {
  TLScan out = scan_header("negative_count", g, c, eta_grid);
  double l_max = largest_l_eigenvalue(c);
  out.gapped = l_max > kGapTol;
  out.target_count = positive_eigenvalue_count(c.L);
  double threshold = std::max(1e-8, 100.0 * opts.tol);
  for_each_record(static_cast<int>(out.records.size()), [&](int i, bool parallel) {
    TLRecord& r = out.records[i];
    try {
      MetricGraph gs = scale(g, r.eta);
      r.n_plus_predicted = predicted_negative_count(gs, c);
      double lo = -1.0;
      if (out.gapped) {
        double s = lower_bound_s(gs.min_length(), l_max);
        lo = -1.2 * s * s;
      }
      Spectrum sp = eigenvalues_in(gs, c, lo, 0.0, row_options(opts, parallel));
      r.n_minus = 0;
      for (const auto& lv : sp.levels)
        if (lv.energy < -threshold) r.n_minus += lv.multiplicity;
      if (r.n_minus != r.n_plus_predicted)
        r.note = "count identity violated: solver " + std::to_string(r.n_minus) + ", predicted " +
                 std::to_string(r.n_plus_predicted);
      else if (r.n_minus > out.target_count)
        r.note = "count exceeds n_+(L) = " + std::to_string(out.target_count);
      r.ok = true;
    } catch (const std::exception& ex) {
      r.note = ex.what();
    }
  });
  out.count_identity_holds = true;
  const TLRecord* prev = nullptr;
  const TLRecord* last = nullptr;
  for (const TLRecord& r : out.records) {
    if (!r.ok) continue;
    if (r.n_minus != r.n_plus_predicted) out.count_identity_holds = false;
    prev = last;
    last = &r;
  }
  out.count_stabilized = prev != nullptr && last != nullptr && prev->n_minus == last->n_minus &&
                         last->n_minus <= out.target_count;
  if (last != nullptr) out.final_error = std::abs(last->n_minus - out.target_count);
  return out;
}

TLScan scan_density_convergence(const MetricGraph& g, const VertexConditions& c, double beta,
                                double mu, const std::vector<double>& eta_grid,
                                const SolverOptions& opts) {
  TLScan out = scan_header("density", g, c, eta_grid);
  double l_max = largest_l_eigenvalue(c);
  out.gapped = l_max > kGapTol;
  out.beta = beta;
  out.mu = mu;
  // rho_plus validates beta and the chemical-potential regime upfront.
  out.target_density = rho_plus(beta, mu, out.gapped ? l_max : 0.0);
  bool comparators = !out.gapped;
  if (comparators)
    out.diagnostics.push_back("L <= 0: Dirichlet/Neumann comparator columns bracket the density");
  for_each_record(static_cast<int>(out.records.size()), [&](int i, bool parallel) {
    TLRecord& r = out.records[i];
    try {
      MetricGraph gs = scale(g, r.eta);
      SolverOptions o = row_options(opts, parallel);
      auto [lo, hi] = thermo_window(gs, l_max, out.gapped, beta, mu);
      Spectrum sp = eigenvalues_in(gs, c, lo, hi, o);
      r.density = bose_number_finite(sp, beta, mu).value / sp.total_length;
      if (comparators) {
        Spectrum sd = eigenvalues_in(gs, dirichlet_conditions(gs), lo, hi, o);
        r.density_dirichlet = bose_number_finite(sd, beta, mu).value / sd.total_length;
        Spectrum sn = eigenvalues_in(gs, neumann_conditions(gs), lo, hi, o);
        r.density_neumann = bose_number_finite(sn, beta, mu).value / sn.total_length;
      }
      r.ok = true;
    } catch (const std::exception& ex) {
      r.note = ex.what();
    }
  });
  summarize(out, [](const TLRecord& r) { return r.density; }, out.target_density, true);
  return out;
}

TLScan scan_free_energy(const MetricGraph& g, const VertexConditions& c, double beta, double mu,
                        const std::vector<double>& eta_grid, Statistics statistics,
                        const SolverOptions& opts) {
  TLScan out = scan_header("free_energy", g, c, eta_grid);
  double l_max = largest_l_eigenvalue(c);
  out.gapped = l_max > kGapTol;
  out.beta = beta;
  out.mu = mu;
  out.statistics = statistics_name(statistics);
  bool bose_sum = statistics == Statistics::boson;
  if (bose_sum) {
    double inf_spec = out.gapped ? -l_max * l_max : 0.0;
    if (!(mu < inf_spec))
      throw std::invalid_argument(
          "scan_free_energy: the Bose branch needs mu below the limiting spectrum (mu < " +
          std::to_string(inf_spec) + ")");
    out.target_free_energy = dirichlet_bose_free_energy(beta, mu);
  } else {
    out.target_free_energy = dirichlet_fermi_free_energy(beta, mu);
    if (statistics == Statistics::hardcore_boson)
      out.diagnostics.push_back(
          "hardcore bosons share the fermionic spectrum: each record evaluates the fermionic sum, "
          "an identity at every eta rather than a limit");
  }
  for_each_record(static_cast<int>(out.records.size()), [&](int i, bool parallel) {
    TLRecord& r = out.records[i];
    try {
      MetricGraph gs = scale(g, r.eta);
      auto [lo, hi] = thermo_window(gs, l_max, out.gapped, beta, mu);
      Spectrum sp = eigenvalues_in(gs, c, lo, hi, row_options(opts, parallel));
      ThermoSum f = bose_sum ? bose_free_energy_finite(sp, beta, mu)
                             : fermi_free_energy_finite(sp, beta, mu);
      r.free_energy = f.value;
      r.ok = true;
    } catch (const std::exception& ex) {
      r.note = ex.what();
    }
  });
  summarize(out, [](const TLRecord& r) { return r.free_energy; }, out.target_free_energy, true);
  return out;
}

}  // namespace qgb
