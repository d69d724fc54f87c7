#include "qgb/spectrum.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

#include "qgb/numerics.hpp"

namespace qgb {

int Spectrum::size_with_multiplicity() const {
  int n = 0;
  for (const auto& e : levels) n += e.multiplicity;
  return n;
}

double Spectrum::min_energy() const {
  if (levels.empty()) throw std::runtime_error("Spectrum: empty spectrum has no minimum");
  return levels.front().energy;
}

namespace {
std::atomic<int> g_threads{0};

int env_threads() {
  const char* env = std::getenv("QGB_THREADS");
  if (env) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}
}  // namespace

void set_max_threads(int n) { g_threads.store(std::max(1, n)); }

int max_threads() {
  int t = g_threads.load();
  if (t >= 1) return t;
  t = env_threads();
  g_threads.store(t);
  return t;
}

namespace {

constexpr double kZeroBand = 1e-12;   // |E| below this is treated as the zero eigenvalue
constexpr double kAccept = 1e-8;      // refined smin below this counts as a root
// Kernel dimension threshold (relative).  Tied to kAccept so value resolution
// and rank resolution hand off without a gap: a neighbouring root whose
// separating bump stays below the 2 kAccept moat wall contributes a second
// singular value of at most ~2 bump < 4 kAccept, so it is always caught by
// the rank test; conversely two individually accepted roots close enough to
// appear in each other's rank test are always merged by the cluster radius
// 2 dblur = 2 kRankRel scale / slope before multiplicities are summed.
constexpr double kRankRel = 4.0 * kAccept;

struct AxisRoot {
  double x = 0.0;    // scan coordinate (k or kappa)
  double smin = 0.0;
  int mult = 1;
};

// Evaluate f on a uniform grid, optionally with several threads.
std::vector<double> grid_values(const std::function<double(double)>& f, double xlo, double h,
                                int n, int threads) {
  std::vector<double> val(n);
  if (threads <= 1 || n < 64) {
    for (int i = 0; i < n; ++i) val[i] = f(xlo + i * h);
    return val;
  }
  int nt = std::min(threads, 16);
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (int t = 0; t < nt; ++t)
    pool.emplace_back([&, t]() {
      for (int i = t; i < n; i += nt) val[i] = f(xlo + i * h);
    });
  for (auto& th : pool) th.join();
  return val;
}

// Scan [xlo, xhi] for dips of smin(map(x)), refine each, resolve twins and
// multiplicities.  xtol_base scales with max(1, x).
std::vector<AxisRoot> scan_axis(const SecularSystem& sys,
                                const std::function<double(double)>& map, double xlo, double xhi,
                                double step, double xtol_base, int threads) {
  std::vector<AxisRoot> out;
  if (!(xhi > xlo)) return out;
  auto f = [&](double x) { return sys.smin(map(x)); };
  auto xt_at = [&](double x) { return xtol_base * std::max(1.0, std::abs(x)); };

  int n = std::max(9, static_cast<int>(std::ceil((xhi - xlo) / step)) + 2);
  double h = (xhi - xlo) / (n - 1);
  std::vector<double> val = grid_values(f, xlo, h, n, threads);

  struct Bracket {
    double lo, hi;
    double vslope;  // bound on the V-wall slope of a root hiding inside
  };
  std::vector<Bracket> brackets;
  std::vector<char> covered(n, 0);
  std::vector<int> minima;
  auto mark = [&](int i) {
    for (int j = std::max(0, i - 1); j <= std::min(n - 1, i + 1); ++j) covered[j] = 1;
  };
  if (val[0] < val[1]) {
    minima.push_back(0);
    mark(0);
  }
  for (int i = 1; i + 1 < n; ++i)
    if (val[i] < val[i - 1] && val[i] <= val[i + 1]) {
      minima.push_back(i);
      mark(i);
    }
  if (val[n - 1] < val[n - 2]) {
    minima.push_back(n - 1);
    mark(n - 1);
  }

  // Second tier: a narrow dip between grid points leaves no local minimum
  // when the background itself slopes downward across the cell.  Any cell
  // whose endpoint values are small enough that a V could reach zero inside
  // it is refined as well.  The V-slope bound is taken from the steepest
  // variation seen in a window of nearby cells (V walls of resolved roots in
  // the same region), floored by a fraction of the scan-wide maximum; a
  // purely global bound makes wide, flat low-background regions explode.
  int nc = n - 1;
  std::vector<double> slope(nc);
  double s_glob = 0.0;
  for (int i = 0; i < nc; ++i) {
    slope[i] = std::abs(val[i + 1] - val[i]) / h;
    s_glob = std::max(s_glob, slope[i]);
  }
  auto s_loc = [&](int cell) {
    int lo = std::max(0, cell - 10), hi = std::min(nc - 1, cell + 10);
    double s = 0.02 * s_glob;
    for (int j = lo; j <= hi; ++j) s = std::max(s, slope[j]);
    return s;
  };
  for (int i : minima) {
    int cell = std::min(std::max(i - 1, 0), nc - 1);
    brackets.push_back({xlo + std::max(0, i - 1) * h, xlo + std::min(n - 1, i + 1) * h,
                        std::max(s_loc(cell), s_loc(std::min(cell + 1, nc - 1)))});
  }
  for (int i = 0; i < nc; ++i)
    if (!(covered[i] && covered[i + 1]) &&
        std::max(val[i], val[i + 1]) < 1.5 * h * s_loc(i))
      brackets.push_back({xlo + i * h, xlo + (i + 1) * h, s_loc(i)});

  struct Loc {
    double x, smin;
  };
  std::vector<Loc> locs;
  // Branch crossings of the smallest singular value make the dip landscape
  // only piecewise-unimodal: one golden-section pass can settle in a shallow
  // side lobe while the true zero hides in a neighbouring one.  When the
  // refined minimum is rejected, subdivide and search again as long as a V
  // with the steepest slope seen in this scan could still reach zero inside
  // some subcell.
  std::function<void(double, double, double, int)> hunt = [&](double lo, double hi, double vs,
                                                              int depth) {
    double xt = xt_at(std::max(std::abs(lo), std::abs(hi)));
    double x = num::golden_min(f, lo, hi, xt);
    double s = f(x);
    if (s < kAccept) {
      locs.push_back({x, s});
      // The bracket can hold further zeros: a cluster of dips presents as one
      // coarse minimum and golden settles in only one of them.  Keep hunting
      // both punctured sides.  The cut is placed by walking outward until the
      // value has climbed above twice the acceptance threshold (tightened by
      // bisection), so golden cannot slide back onto this root's flank, while
      // any neighbour separated by a bump higher than that stays in play.
      // Neighbours closer than the walked moat are below the value resolution
      // and are left to the kernel-dimension analysis.
      if (depth > 0) {
        auto wall = [&](double sgn, double limit) {
          double r = std::max(1e2 * xt, 1e-12 * std::max(1.0, std::abs(x)));
          double r_in = 0.0;
          for (int it = 0; it < 80; ++it) {
            double p = x + sgn * r;
            if ((sgn > 0.0 && p >= limit) || (sgn < 0.0 && p <= limit)) return limit;
            if (f(p) >= 2.0 * kAccept) break;
            r_in = r;
            r *= 2.0;
          }
          for (int it = 0; it < 8 && r_in > 0.0; ++it) {
            double m = 0.5 * (r_in + r);
            (f(x + sgn * m) >= 2.0 * kAccept ? r : r_in) = m;
          }
          return x + sgn * r;
        };
        double wl = wall(-1.0, lo), wr = wall(1.0, hi);
        if (wl - lo > 4.0 * xt) hunt(lo, wl, vs, depth - 1);
        if (hi - wr > 4.0 * xt) hunt(wr, hi, vs, depth - 1);
      }
      return;
    }
    if (depth <= 0 || vs <= 0.0) return;
    constexpr int parts = 5;
    double w = (hi - lo) / parts;
    if (w < 1e3 * xt) return;
    double fv[parts + 1];
    fv[0] = f(lo);
    fv[parts] = f(hi);
    for (int i = 1; i < parts; ++i) fv[i] = f(lo + i * w);
    for (int i = 0; i < parts; ++i)
      if (std::min(fv[i], fv[i + 1]) < 1.2 * vs * w)
        hunt(lo + i * w, lo + (i + 1) * w, vs, depth - 1);
  };
  for (const Bracket& b : brackets) hunt(b.lo, b.hi, b.vslope, 6);

  // Iterate: dedupe, analyze, hunt twins of suspiciously close pairs; a hunt
  // can add new roots, so repeat (bounded).
  struct Rep {
    double x, smin, slope, dblur;
    int kdim, group;
  };
  std::vector<Rep> reps;
  for (int pass = 0; pass < 3; ++pass) {
    std::sort(locs.begin(), locs.end(), [](const Loc& a, const Loc& b) { return a.x < b.x; });
    // group locations within 10 * xtol; keep the best per group but remember
    // the number of resolved sub-locations (n_distinct per cluster later)
    std::vector<Loc> uniq;
    for (const Loc& l : locs) {
      if (!uniq.empty() && l.x - uniq.back().x <= 10.0 * xt_at(l.x)) {
        if (l.smin < uniq.back().smin) uniq.back() = l;
      } else {
        uniq.push_back(l);
      }
    }

    reps.clear();
    bool added = false;
    for (const Loc& l : uniq) {
      SecularSample sample = sys.evaluate(map(l.x));
      int m = static_cast<int>(sample.singular_values.size());
      // Same absolute floor as SecularSystem::kernel_dimension: near a
      // collision of roots sigma_max collapses along with smin.
      double scale = std::max(sample.singular_values(0), 1.0);
      double xt = xt_at(l.x);
      double delta = std::max(1e3 * xt, 1e-9 * std::max(1.0, std::abs(l.x)));
      double slope_right = std::max((f(l.x + delta) - l.smin) / delta, 1e-12);
      double slope_left = std::max((f(l.x - delta) - l.smin) / delta, 1e-12);
      double slope = std::max(slope_left, slope_right);
      double dblur = kRankRel * scale / slope;
      int kdim = 0;
      for (int i = 0; i < m; ++i)
        if (sample.singular_values(i) < kRankRel * scale) ++kdim;
      kdim = std::max(kdim, 1);
      reps.push_back({l.x, l.smin, slope, dblur, kdim, -1});

      if (pass < 2 && kdim == 1) {
        // A dip found on the coarse grid can hide a second root in the same
        // cell (a near-degenerate pair presents as one local minimum), so
        // search both punctured sides of every simple root.  A candidate twin
        // must sit far below the V-extrapolation of the known root, which
        // keeps the flank of the root itself from being re-accepted.
        double excl = std::max(20.0 * xt, 0.5 * dblur);
        double radius = 1.5 * step;
        for (double sgn : {1.0, -1.0}) {
          double side_slope = sgn > 0 ? slope_right : slope_left;
          double a = l.x + sgn * excl, b = l.x + sgn * radius;
          if (sgn < 0) std::swap(a, b);
          a = std::max(a, xlo);
          b = std::min(b, xhi);
          if (b - a > 4.0 * xt) {
            double y = num::golden_min(f, a, b, xt);
            double sy = f(y);
            bool fresh = true;
            for (const Loc& other : locs)
              if (std::abs(y - other.x) <= 10.0 * xt) fresh = false;
            if (fresh && sy < kAccept && sy < 0.3 * side_slope * std::abs(y - l.x)) {
              locs.push_back({y, sy});
              added = true;
            }
          }
        }
      }
    }
    if (!added) break;
  }

  // Cluster representatives whose kernel blur radii overlap; within a
  // cluster the kernel dimension at the best location gives the joint
  // multiplicity, and the number of resolved sub-locations is a lower bound.
  size_t i = 0;
  while (i < reps.size()) {
    size_t j = i + 1;
    while (j < reps.size() &&
           reps[j].x - reps[j - 1].x <=
               std::max(10.0 * xt_at(reps[j].x), 2.0 * std::max(reps[j - 1].dblur, reps[j].dblur)))
      ++j;
    size_t best = i;
    for (size_t k = i + 1; k < j; ++k)
      if (reps[k].smin < reps[best].smin) best = k;
    int n_distinct = static_cast<int>(j - i);
    int mult = std::max(sys.kernel_dimension(map(reps[best].x), kRankRel), n_distinct);
    out.push_back({reps[best].x, reps[best].smin, mult});
    i = j;
  }
  return out;
}

}  // namespace

Spectrum eigenvalues_in(const MetricGraph& g, const VertexConditions& c, double lo, double hi,
                        const SolverOptions& opts) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
    throw std::invalid_argument("eigenvalues_in: window must be finite with lo < hi");
  if (!(opts.tol > 0.0)) throw std::invalid_argument("eigenvalues_in: tol must be > 0");

  SecularSystem sys(g, c);
  int threads = opts.threads >= 1 ? opts.threads : max_threads();

  Spectrum out;
  out.window_lo = lo;
  out.window_hi = hi;
  out.tol = opts.tol;
  out.total_length = g.total_length();
  out.edge_count = g.edge_count();
  out.graph_fingerprint = g.fingerprint();
  out.conditions_fingerprint = c.fingerprint();

  double step = M_PI / (4.0 * out.total_length * std::max(1.0, opts.scan_refine));
  const double xtol_base = 1e-13;

  std::vector<EigvalEntry> entries;

  int zero_mult = 0;
  if (lo <= 0.0 && 0.0 <= hi) {
    zero_mult = sys.kernel_dimension(0.0, kRankRel);
    if (zero_mult > 0) entries.push_back({0.0, zero_mult});
  }

  auto keep = [&](double energy) {
    if (zero_mult > 0 && std::abs(energy) <= 10.0 * kZeroBand) return false;  // zero re-found
    return energy >= lo - opts.tol && energy <= hi + opts.tol;
  };

  if (hi > kZeroBand) {
    double klo = std::sqrt(std::max(lo, kZeroBand));
    double khi = std::sqrt(hi);
    auto roots =
        scan_axis(sys, [](double k) { return k * k; }, klo, khi, step, xtol_base, threads);
    for (const AxisRoot& r : roots) {
      double e = r.x * r.x;
      if (keep(e)) entries.push_back({e, r.mult});
    }
  }

  if (lo < -kZeroBand) {
    double lmax_eig = largest_l_eigenvalue(c);
    if (lmax_eig <= 1e-12) {
      out.diagnostics.push_back(
          "negative window skipped: L has no positive eigenvalue, operator is non-negative");
    } else {
      double s = lower_bound_s(g.min_length(), lmax_eig);
      double floor_e = -1.25 * s * s;
      double from = std::max(lo, floor_e);
      if (lo < floor_e)
        out.diagnostics.push_back("window floor clipped to -1.25 s^2 = " + std::to_string(floor_e) +
                                  "; spectrum is bounded below by -s^2");
      double kap_lo = hi < -kZeroBand ? std::sqrt(-hi) : std::sqrt(kZeroBand);
      double kap_hi = std::sqrt(-from);
      auto roots = scan_axis(
          sys, [](double kap) { return -kap * kap; }, kap_lo, kap_hi, step, xtol_base, threads);
      for (const AxisRoot& r : roots) {
        double e = -r.x * r.x;
        if (keep(e)) entries.push_back({e, r.mult});
      }
    }
  }

  std::sort(entries.begin(), entries.end(),
            [](const EigvalEntry& a, const EigvalEntry& b) { return a.energy < b.energy; });

  double merge_tol = std::max(opts.tol, 1e-12);
  for (const EigvalEntry& e : entries) {
    if (!out.levels.empty() && e.energy - out.levels.back().energy <= merge_tol)
      out.levels.back().multiplicity += e.multiplicity;
    else
      out.levels.push_back(e);
  }
  return out;
}

double ground_state_energy(const MetricGraph& g, const VertexConditions& c,
                           const SolverOptions& opts) {
  double l_min = g.min_length();
  // lambda_1(P, L) <= lambda_1(Dirichlet) = (pi / l_min)^2 by form inclusion,
  // so a window reaching just past that bracket is guaranteed nonempty.
  double hi = std::pow(M_PI / l_min, 2) * 1.000001 + 10.0 * opts.tol;
  double lmax_eig = largest_l_eigenvalue(c);
  double lo = -1e-9;
  if (lmax_eig > 1e-12) {
    double s = lower_bound_s(l_min, lmax_eig);
    lo = -1.3 * s * s;
  }
  Spectrum sp = eigenvalues_in(g, c, lo, hi, opts);
  if (sp.levels.empty()) {
    Spectrum wider = eigenvalues_in(g, c, lo, 4.0 * hi, opts);
    if (wider.levels.empty())
      throw std::runtime_error("ground_state_energy: no eigenvalue found in guaranteed window");
    return wider.min_energy();
  }
  return sp.min_energy();
}

int predicted_negative_count(const MetricGraph& g, const VertexConditions& c) {
  validate_conditions(c);
  return positive_eigenvalue_count(restricted_count_matrix(g, c));
}

double lower_bound_s(double l_min, double l_max_eigenvalue) {
  if (!(l_min > 0.0)) throw std::invalid_argument("lower_bound_s: l_min must be > 0");
  if (!(l_max_eigenvalue > 0.0))
    throw std::invalid_argument("lower_bound_s: requires a positive largest L eigenvalue");
  auto fs = [&](double s) { return s * std::tanh(0.5 * s * l_min); };
  double hi = std::max(l_max_eigenvalue, 1e-8);
  for (int i = 0; i < 300 && fs(hi) < l_max_eigenvalue; ++i) hi *= 2.0;
  return num::invert_increasing(fs, l_max_eigenvalue, 0.0, hi, 1e-13 * std::max(1.0, hi));
}

double rayleigh_trial(double l_max_eigenvalue, double alpha, double lambda) {
  if (!(alpha > 0.5)) throw std::invalid_argument("rayleigh_trial: requires alpha > 1/2");
  if (!(lambda > 0.0)) throw std::invalid_argument("rayleigh_trial: requires lambda > 0");
  return (alpha * alpha / ((2.0 * alpha - 1.0) * lambda) - l_max_eigenvalue) *
         (2.0 * alpha + 1.0) / lambda;
}

RayleighTrial rayleigh_trial_optimal(double l_max_eigenvalue, double alpha) {
  if (!(alpha > 0.5)) throw std::invalid_argument("rayleigh_trial_optimal: requires alpha > 1/2");
  if (!(l_max_eigenvalue > 0.0))
    throw std::invalid_argument("rayleigh_trial_optimal: requires a positive largest L eigenvalue");
  RayleighTrial t;
  t.lambda = 2.0 * alpha * alpha / ((2.0 * alpha - 1.0) * l_max_eigenvalue);
  t.value = -((4.0 * alpha * alpha - 1.0) / (4.0 * alpha * alpha)) * l_max_eigenvalue *
            l_max_eigenvalue;
  return t;
}

int counting_function(const Spectrum& s, double k) {
  if (!(k >= 0.0)) throw std::invalid_argument("counting_function: k must be >= 0");
  double e = k * k;
  if (e > s.window_hi + s.tol)
    throw std::invalid_argument("counting_function: K^2 exceeds the computed window");
  int n = 0;
  for (const auto& lev : s.levels)
    if (lev.energy <= e + 0.5 * s.tol) n += lev.multiplicity;
  return n;
}

}  // namespace qgb
