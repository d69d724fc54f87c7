#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "qgb/numerics.hpp"

using namespace qgb;

TEST_CASE("pairwise sum is exact on adversarial cancellation-free data") {
  std::vector<double> xs(1 << 12, 0.1);
  double s = num::pairwise_sum(xs);
  CHECK(s == doctest::Approx(409.6).epsilon(1e-15));
  CHECK(num::pairwise_sum(std::vector<double>{}) == 0.0);
}

TEST_CASE("bisect_root solves a transcendental equation to near machine precision") {
  auto f = [](double x) { return std::cos(x) - x; };
  double r = num::bisect_root(f, 0.0, 1.0, 1e-15);
  CHECK(std::abs(std::cos(r) - r) < 1e-14);
}

TEST_CASE("invert_increasing finds preimages of a monotone map") {
  auto f = [](double x) { return x * std::tanh(x); };
  double x = num::invert_increasing(f, 2.0, 0.0, 10.0, 1e-14);
  CHECK(f(x) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("golden_min locates a smooth minimum") {
  auto f = [](double x) { return (x - 1.7) * (x - 1.7) + 0.25; };
  double x = num::golden_min(f, 0.0, 4.0, 1e-12);
  CHECK(x == doctest::Approx(1.7).epsilon(1e-8));
}

TEST_CASE("adaptive_simpson integrates smooth and mildly singular integrands") {
  using std::numbers::pi;
  double a = num::adaptive_simpson([](double x) { return std::sin(x); }, 0.0, pi, 1e-12);
  CHECK(a == doctest::Approx(2.0).epsilon(1e-11));
  // sqrt singularity in the derivative at 0
  double b = num::adaptive_simpson([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-10);
  CHECK(b == doctest::Approx(2.0 / 3.0).epsilon(1e-7));
}

TEST_CASE("richardson extrapolation removes the leading error term") {
  // f(h) = L + c h^2, sampled at h, h/2
  std::vector<double> vals = {1.0 + 0.04, 1.0 + 0.01};
  double r = num::richardson(vals, 2.0);
  CHECK(r == doctest::Approx(1.0).epsilon(1e-12));
}
