#pragma once

// Small numerical utilities shared across the library: compensated sums,
// bracketed root finding, golden-section minimization, adaptive quadrature.

#include <functional>
#include <vector>

namespace qgb::num {

// Pairwise (cascade) summation; deterministic and O(eps log n) error.
double pairwise_sum(const std::vector<double>& xs);

// Root of f on [lo, hi] given f(lo) and f(hi) of opposite sign.
// Bisection steps interleaved with secant steps; terminates when the bracket
// is below xtol (absolute).  Throws std::invalid_argument without a sign change.
double bisect_root(const std::function<double(double)>& f, double lo, double hi, double xtol);

// Solve f(x) = target for increasing f on [lo, hi].
double invert_increasing(const std::function<double(double)>& f, double target, double lo,
                         double hi, double xtol);

// Golden-section search for the minimizer of a unimodal f on [lo, hi];
// returns the midpoint of the final bracket of width <= xtol.
double golden_min(const std::function<double(double)>& f, double lo, double hi, double xtol);

// Adaptive Simpson quadrature with absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol);

// values[i] = approximation at step h / 2^i for a method of order p.
// Returns the Richardson-extrapolated limit from the last two entries.
double richardson(const std::vector<double>& values, int p = 2);

}  // namespace qgb::num
