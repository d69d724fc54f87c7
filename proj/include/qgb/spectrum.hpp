#pragma once

// Eigenvalue location for the (P, L) Laplacian on a metric graph.  The
// smallest singular value of the secular matrix vanishes exactly at
// eigenvalues and behaves like c |E - E_n| nearby, so roots are found by a
// dense scan for dips followed by golden-section refinement; multiplicities
// come from the kernel dimension at the refined location.

#include <string>
#include <vector>

#include "qgb/metric_graph.hpp"
#include "qgb/secular.hpp"
#include "qgb/vertex_conditions.hpp"

namespace qgb {

struct EigvalEntry {
  double energy = 0.0;
  int multiplicity = 1;
};

struct Spectrum {
  std::vector<EigvalEntry> levels;  // ascending in energy
  double window_lo = 0.0;
  double window_hi = 0.0;
  double tol = 0.0;
  double total_length = 0.0;
  int edge_count = 0;  // used by Weyl tail certificates of spectral sums
  std::string graph_fingerprint;
  std::string conditions_fingerprint;
  std::vector<std::string> diagnostics;

  int size_with_multiplicity() const;
  double min_energy() const;  // throws if empty
};

struct SolverOptions {
  double tol = 1e-10;       // reported-energy accuracy and merge radius
  double scan_refine = 1.0; // scan step is pi / (4 L scan_refine)
  int threads = 0;          // 0: use the global default (see set_max_threads)
};

// All eigenvalues in [lo, hi] with multiplicities.  The negative semi-axis is
// scanned only down to -1.25 s^2 where -s^2 is the proven spectral lower
// bound (s solves s tanh(s l_min / 2) = L_max); if L_max <= 0 the operator is
// non-negative and the negative part is skipped.  Both facts are noted in
// diagnostics when they clip the requested window.
Spectrum eigenvalues_in(const MetricGraph& g, const VertexConditions& c, double lo, double hi,
                        const SolverOptions& opts = {});

// Lowest eigenvalue.  Always finite: the positive search window is capped by
// the Dirichlet bracket (first Dirichlet eigenvalue (pi / l_min)^2 dominates
// the ground state for every (P, L)).
double ground_state_energy(const MetricGraph& g, const VertexConditions& c,
                           const SolverOptions& opts = {});

// Predicted number of negative eigenvalues: n_+ (L + Q M0 Q restricted to
// ker P), the count of strictly positive eigenvalues of the restricted matrix.
int predicted_negative_count(const MetricGraph& g, const VertexConditions& c);

// Solution s > 0 of s tanh(s l_min / 2) = L_max (requires L_max > 0); the
// one-particle spectrum lies in [-s^2, infinity).
double lower_bound_s(double l_min, double l_max_eigenvalue);

struct RayleighTrial {
  double value = 0.0;   // Rayleigh quotient of the trial family
  double lambda = 0.0;  // optimal inverse-width; trial support has length 2 lambda
};

// Rayleigh quotient  ((alpha^2 / ((2 alpha - 1) lambda)) - L_max) (2 alpha + 1) / lambda
// of the paper-family trial function; requires alpha > 1/2, lambda > 0.
double rayleigh_trial(double l_max_eigenvalue, double alpha, double lambda);

// Minimum over lambda:  -((4 alpha^2 - 1) / (4 alpha^2)) L_max^2  at
// lambda = 2 alpha^2 / ((2 alpha - 1) L_max).  Requires L_max > 0.  The bound
// is an upper bound for the ground state whenever some edge has length
// >= 2 lambda.
RayleighTrial rayleigh_trial_optimal(double l_max_eigenvalue, double alpha);

// Counting function N(K) = #{E_n <= K^2} (with multiplicity) of a computed
// spectrum; requires K^2 <= window_hi.
int counting_function(const Spectrum& s, double k);

// Global default for thread use in scans (clamped to >= 1).  Honors the
// QGB_THREADS environment variable on first use.
void set_max_threads(int n);
int max_threads();

}  // namespace qgb
