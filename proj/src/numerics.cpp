#include "qgb/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace qgb::num {

double pairwise_sum(const std::vector<double>& xs) {
  std::function<double(size_t, size_t)> rec = [&](size_t lo, size_t hi) -> double {
    if (hi - lo <= 8) {
      double s = 0.0;
      for (size_t i = lo; i < hi; ++i) s += xs[i];
      return s;
    }
    size_t mid = lo + (hi - lo) / 2;
    return rec(lo, mid) + rec(mid, hi);
  };
  return xs.empty() ? 0.0 : rec(0, xs.size());
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi, double xtol) {
  if (!(lo < hi)) throw std::invalid_argument("bisect_root: empty interval");
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) throw std::invalid_argument("bisect_root: no sign change on interval");
  for (int it = 0; it < 400 && (hi - lo) > xtol; ++it) {
    // Secant candidate, clamped to the middle half of the bracket so the
    // bracket provably shrinks; otherwise plain bisection.
    double mid = 0.5 * (lo + hi);
    double x = mid;
    double denom = fhi - flo;
    if (denom != 0.0) {
      double sec = lo - flo * (hi - lo) / denom;
      if (sec > lo + 0.25 * (hi - lo) && sec < hi - 0.25 * (hi - lo)) x = sec;
    }
    double fx = f(x);
    if (fx == 0.0) return x;
    if ((fx > 0) == (flo > 0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
  }
  return 0.5 * (lo + hi);
}

double invert_increasing(const std::function<double(double)>& f, double target, double lo,
                         double hi, double xtol) {
  return bisect_root([&](double x) { return f(x) - target; }, lo, hi, xtol);
}

double golden_min(const std::function<double(double)>& f, double lo, double hi, double xtol) {
  if (!(lo < hi)) throw std::invalid_argument("golden_min: empty interval");
  const double invphi = 0.6180339887498949;   // 1/phi
  const double invphi2 = 0.3819660112501051;  // 1/phi^2
  double a = lo, b = hi;
  double c = a + invphi2 * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > xtol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = a + invphi2 * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

namespace {
double simpson(double fa, double fm, double fb, double h6) { return h6 * (fa + 4.0 * fm + fb); }

double adsimp(const std::function<double(double)>& f, double a, double b, double fa, double fm,
              double fb, double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = simpson(fa, flm, fm, (m - a) / 6.0);
  double right = simpson(fm, frm, fb, (b - m) / 6.0);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adsimp(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adsimp(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  double m = 0.5 * (a + b);
  double fa = f(a), fm = f(m), fb = f(b);
  double whole = simpson(fa, fm, fb, (b - a) / 6.0);
  return adsimp(f, a, b, fa, fm, fb, whole, tol, 40);
}

double richardson(const std::vector<double>& values, int p) {
  if (values.size() < 2) throw std::invalid_argument("richardson: need at least two values");
  double fine = values.back();
  double coarse = values[values.size() - 2];
  double fac = std::pow(2.0, p);
  return fine + (fine - coarse) / (fac - 1.0);
}

}  // namespace qgb::num
