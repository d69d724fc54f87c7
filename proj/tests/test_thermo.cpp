#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qgb/numerics.hpp"
#include "qgb/spectrum.hpp"
#include "qgb/thermo.hpp"
#include "qgb/vertex_conditions.hpp"
#include "test_support.hpp"

using namespace qgb;
using std::numbers::pi;

namespace {

// A hand-made spectrum for sum identities: window wide enough that Weyl
// tails are negligible for beta >= 1, mu <= 0.
Spectrum toy_spectrum(std::vector<EigvalEntry> levels, double total_length = 1.0) {
  Spectrum s;
  s.levels = std::move(levels);
  s.window_lo = -1.0;
  s.window_hi = 60.0;
  s.tol = 1e-12;
  s.total_length = total_length;
  s.edge_count = 1;
  return s;
}

}  // namespace

TEST_CASE("polylog_half basics") {
  CHECK(polylog_half(0.0) == 0.0);
  CHECK_THROWS_AS(polylog_half(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(polylog_half(0.99995), std::invalid_argument);
  // z + z^2/sqrt(2) + ... hand-check low order at small z
  double z = 1e-4;
  CHECK(polylog_half(z) == doctest::Approx(z + z * z / std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("polylog_half series agrees with the integral representation") {
  for (double z : {0.1, 0.3, 0.5, 0.7, 0.9, 0.97, 0.99}) {
    CAPTURE(z);
    CHECK(polylog_half(z) ==
          doctest::Approx(polylog_half_integral(z)).epsilon(1e-10));
  }
}

TEST_CASE("polylog_half is increasing and convex") {
  double prev = 0.0, prev_diff = 0.0;
  bool first = true;
  for (double z = 0.05; z < 0.99; z += 0.05) {
    double v = polylog_half(z);
    CHECK(v > prev);
    if (!first) CHECK(v - prev > prev_diff);
    prev_diff = v - prev;
    prev = v;
    first = false;
  }
}

TEST_CASE("rho_plus closed form matches direct momentum integral") {
  double beta = 1.3, mu = -0.8;
  double direct = num::adaptive_simpson(
      [&](double k) { return 1.0 / std::expm1(beta * (k * k - mu)); }, 0.0, 10.0, 1e-12);
  CHECK(rho_plus(beta, mu, 0.0) == doctest::Approx(direct / pi).epsilon(1e-9));
}

TEST_CASE("rho_plus scaling identity rho(beta, mu) = rho(1, beta mu)/sqrt(beta)") {
  double beta = 2.7, mu = -0.4;
  CHECK(rho_plus(beta, mu, 0.0) ==
        doctest::Approx(rho_plus(1.0, beta * mu, 0.0) / std::sqrt(beta)).epsilon(1e-12));
}

TEST_CASE("rho_plus rejects mu above the gap") {
  CHECK_THROWS_AS(rho_plus(1.0, -0.5, 1.0), std::invalid_argument);  // gap at -1
  CHECK_THROWS_AS(rho_plus(1.0, 0.0, 0.0), std::invalid_argument);   // gapless needs mu < 0
}

TEST_CASE("critical_beta self-consistency and monotonicity") {
  double bc = critical_beta(1.0, 1.0);
  CHECK(rho_plus(bc, -1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-10));
  // beta_c decreasing in rho0
  double prev = bc;
  for (double rho : {1.5, 2.0, 3.0}) {
    double b = critical_beta(rho, 1.0);
    CHECK(b < prev);
    prev = b;
  }
  // beta_c decreasing in l_max at fixed rho0
  CHECK(critical_beta(1.0, 2.0) < bc);
  CHECK_THROWS_AS(critical_beta(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(critical_beta(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("condensate fraction endpoints and monotonicity") {
  double bc = critical_beta(1.0, 1.0);
  CHECK(condensate_fraction(bc, bc, 1.0) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(condensate_fraction(100.0 * bc, bc, 1.0) > 0.99);
  double prev = -1.0;
  for (double beta = bc; beta < 20.0 * bc; beta *= 1.3) {
    double fr = condensate_fraction(beta, bc, 1.0);
    CHECK(fr >= prev);
    prev = fr;
  }
  CHECK_THROWS_AS(condensate_fraction(0.5 * bc, bc, 1.0), std::invalid_argument);
}

TEST_CASE("bose_number_finite single-level formula") {
  auto s = toy_spectrum({{1.0, 1}});
  CHECK(bose_number_finite(s, 1.0, 0.0).value ==
        doctest::Approx(1.0 / (std::exp(1.0) - 1.0)).epsilon(1e-14));
  CHECK_THROWS_AS(bose_number_finite(s, 1.0, 1.0), std::invalid_argument);
  // beta -> large: occupation vanishes
  CHECK(bose_number_finite(s, 30.0, 0.0).value < 1e-12);
}

TEST_CASE("free-energy single-level formulas and sign conventions") {
  auto s = toy_spectrum({{1.0, 1}});
  CHECK(bose_free_energy_finite(s, 1.0, 0.0).value ==
        doctest::Approx(std::log(1.0 - std::exp(-1.0))).epsilon(1e-14));
  CHECK(fermi_free_energy_finite(s, 1.0, 0.0).value ==
        doctest::Approx(-std::log(1.0 + std::exp(-1.0))).epsilon(1e-14));
}

TEST_CASE("thermodynamic consistency: -df/dmu equals density (finite volume)") {
  auto g = test::single_edge(pi);
  auto sp = eigenvalues_in(g, dirichlet_conditions(g), 0.0, 60.0);
  double beta = 1.0, mu = -0.7, dmu = 1e-5;
  double f_plus = bose_free_energy_finite(sp, beta, mu + dmu).value;
  double f_minus = bose_free_energy_finite(sp, beta, mu - dmu).value;
  double rho = bose_number_finite(sp, beta, mu).value / sp.total_length;
  CHECK(-(f_plus - f_minus) / (2.0 * dmu) == doctest::Approx(rho).epsilon(1e-6));
}

TEST_CASE("tail certification rejects too-small windows") {
  auto s = toy_spectrum({{1.0, 1}});
  s.window_hi = 2.0;  // x_top = beta (2 - mu) is far too small at beta = 0.2
  CHECK_THROWS_AS(bose_number_finite(s, 0.2, 0.0), std::invalid_argument);
}

TEST_CASE("dirichlet_fermi_free_energy agrees with the alternating series for mu < 0") {
  for (double mu : {-2.0, -1.0, -0.3}) {
    for (double beta : {0.7, 1.0, 2.5}) {
      CAPTURE(mu);
      CAPTURE(beta);
      double series = 0.0;
      for (int j = 1; j < 400; ++j) {
        double term = std::pow(-1.0, j + 1) * std::exp(j * beta * mu) / std::pow(j, 1.5);
        series += term;
        if (std::abs(term) < 1e-17) break;
      }
      double expected = -series / (beta * std::sqrt(4.0 * pi * beta));
      CHECK(dirichlet_fermi_free_energy(beta, mu) ==
            doctest::Approx(expected).epsilon(1e-10));
    }
  }
}

TEST_CASE("dirichlet_fermi_free_energy smooth across mu = 0 and mu > 0 sensible") {
  // f decreasing in mu (density is positive)
  double prev = dirichlet_fermi_free_energy(1.0, -2.0);
  for (double mu = -1.5; mu <= 2.0; mu += 0.5) {
    double f = dirichlet_fermi_free_energy(1.0, mu);
    CHECK(f < prev);
    prev = f;
  }
}

TEST_CASE("invert_density_finite round trip and the known single-level case") {
  auto s = toy_spectrum({{1.0, 1}});
  // 1/(e^{1-mu} - 1) = 1  =>  mu = 1 - log 2
  double mu = invert_density_finite(s, 1.0, 1.0);
  CHECK(mu == doctest::Approx(1.0 - std::log(2.0)).epsilon(1e-12));

  auto g = test::single_edge(pi);
  auto sp = eigenvalues_in(g, dirichlet_conditions(g), 0.0, 80.0);
  double target = 2.3;
  double mu2 = invert_density_finite(sp, 0.9, target);
  CHECK(bose_number_finite(sp, 0.9, mu2).value == doctest::Approx(target).epsilon(1e-10));
}

TEST_CASE("invert_density_limit dichotomy at the condensation threshold") {
  double beta = 2.0, l_max = 1.0;
  double rho_max = rho_plus(beta, -1.0, l_max);
  auto below = invert_density_limit(beta, 0.5 * rho_max, l_max);
  CHECK_FALSE(below.condensed);
  CHECK(below.mu < -1.0);
  CHECK(rho_plus(beta, below.mu, l_max) == doctest::Approx(0.5 * rho_max).epsilon(1e-10));
  auto above = invert_density_limit(beta, 2.0 * rho_max, l_max);
  CHECK(above.condensed);
  CHECK(above.mu == doctest::Approx(-1.0));
}

TEST_CASE("finite-volume boson density converges to rho_plus under scaling") {
  // Neumann interval (gapless): N / L at eta = 300 within 1% of the closed form.
  double beta = 1.0, mu = -1.0;
  auto g = test::single_edge(300.0);
  auto sp = eigenvalues_in(g, neumann_conditions(g), -1.0, mu + 45.0 / beta);
  double density = bose_number_finite(sp, beta, mu).value / sp.total_length;
  CHECK(density == doctest::Approx(rho_plus(beta, mu, 0.0)).epsilon(0.01));
}
