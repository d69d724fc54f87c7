#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "qgb/manybody.hpp"
#include "qgb/metric_graph.hpp"
#include "qgb/spectrum.hpp"
#include "qgb/vertex_conditions.hpp"
#include "test_support.hpp"

using namespace qgb;

namespace {

Spectrum dirichlet_interval_spectrum(double window_hi) {
  MetricGraph g = test::single_edge(3.14159265358979323846);
  return eigenvalues_in(g, dirichlet_conditions(g), -1.0, window_hi);
}

// Toy spectrum with a degenerate level, for recursion-vs-enumeration checks.
Spectrum toy_spectrum(std::vector<EigvalEntry> levels) {
  Spectrum s;
  s.levels = std::move(levels);
  s.window_lo = -1.0;
  s.window_hi = 1e9;
  s.tol = 1e-12;
  return s;
}

}  // namespace

TEST_CASE("two bosons on a Dirichlet interval: sums of squares") {
  Spectrum s = dirichlet_interval_spectrum(30.0);
  // pair sums n^2 + m^2, n <= m: 2, 5, 8, 10, 13, 17, 18, 20, ...
  ManyBodySpectrum mb = free_spectrum(s, 2, Statistics::boson, 21.0);
  std::vector<double> expect = {2, 5, 8, 10, 13, 17, 18, 20};
  REQUIRE(mb.energies.size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) {
    CHECK(mb.energies[i].energy == doctest::Approx(expect[i]).epsilon(1e-9));
    CHECK(mb.energies[i].multiplicity == 1);
  }
}

TEST_CASE("two fermions on a Dirichlet interval: distinct sums") {
  Spectrum s = dirichlet_interval_spectrum(30.0);
  // n < m: 1+4, 1+9, 4+9, 1+16, 4+16, ...
  ManyBodySpectrum mb = free_spectrum(s, 2, Statistics::fermion, 21.0);
  std::vector<double> expect = {5, 10, 13, 17, 20};
  REQUIRE(mb.energies.size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i)
    CHECK(mb.energies[i].energy == doctest::Approx(expect[i]).epsilon(1e-9));
}

TEST_CASE("hardcore bosons carry the fermionic spectrum") {
  Spectrum s = dirichlet_interval_spectrum(40.0);
  ManyBodySpectrum f = free_spectrum(s, 3, Statistics::fermion, 30.0);
  ManyBodySpectrum h = hardcore_spectrum(s, 3, 30.0);
  CHECK(h.statistics == Statistics::hardcore_boson);
  REQUIRE(f.energies.size() == h.energies.size());
  for (std::size_t i = 0; i < f.energies.size(); ++i) {
    CHECK(h.energies[i].energy == doctest::Approx(f.energies[i].energy).epsilon(1e-14));
    CHECK(h.energies[i].multiplicity == f.energies[i].multiplicity);
  }
  // lowest fermionic triple on the interval: 1 + 4 + 9
  CHECK(h.energies.front().energy == doctest::Approx(14.0).epsilon(1e-9));
}

TEST_CASE("single particle spectrum is returned unchanged") {
  Spectrum s = dirichlet_interval_spectrum(30.0);
  for (Statistics st : {Statistics::boson, Statistics::fermion}) {
    ManyBodySpectrum mb = free_spectrum(s, 1, st, 26.0);
    REQUIRE(mb.energies.size() == 5);
    for (std::size_t i = 0; i < mb.energies.size(); ++i)
      CHECK(mb.energies[i].energy == doctest::Approx(s.levels[i].energy).epsilon(1e-14));
  }
}

TEST_CASE("completeness guard names the guaranteed range") {
  Spectrum s = dirichlet_interval_spectrum(30.0);
  // window_hi = 30, e0 = 1: two-particle sums are complete only below 31.
  CHECK_NOTHROW(free_spectrum(s, 2, Statistics::boson, 30.9));
  CHECK_THROWS_AS(free_spectrum(s, 2, Statistics::boson, 31.1), std::invalid_argument);
  CHECK_THROWS_AS(free_spectrum(s, 1, Statistics::boson, 30.5), std::invalid_argument);
}

TEST_CASE("degenerate levels: multiplicities recombine") {
  // levels 1 (x2) and 2 (x1): boson pairs 2 (x3: 11,11',1'1'... as multiset
  // of slots -> {11},{11'},{1'1'}), 3 (x2), 4 (x1).
  Spectrum s = toy_spectrum({{1.0, 2}, {2.0, 1}});
  ManyBodySpectrum b = free_spectrum(s, 2, Statistics::boson, 4.5);
  REQUIRE(b.energies.size() == 3);
  CHECK(b.energies[0].energy == doctest::Approx(2.0));
  CHECK(b.energies[0].multiplicity == 3);
  CHECK(b.energies[1].multiplicity == 2);
  CHECK(b.energies[2].multiplicity == 1);
  // fermions: slot pairs {1,1'} -> 2, {1,2}/{1',2} -> 3 (x2)
  ManyBodySpectrum f = free_spectrum(s, 2, Statistics::fermion, 4.5);
  REQUIRE(f.energies.size() == 2);
  CHECK(f.energies[0].energy == doctest::Approx(2.0));
  CHECK(f.energies[0].multiplicity == 1);
  CHECK(f.energies[1].energy == doctest::Approx(3.0));
  CHECK(f.energies[1].multiplicity == 2);
}

TEST_CASE("recursion matches explicit enumeration on a toy spectrum") {
  Spectrum s = toy_spectrum({{-0.7, 1}, {0.4, 2}, {1.3, 1}, {2.2, 1}, {3.0, 2}});
  for (Statistics st : {Statistics::boson, Statistics::fermion}) {
    for (int n = 1; n <= 4; ++n) {
      for (double beta : {0.3, 1.0}) {
        CanonicalState cs = canonical_state(s, n, beta, st);
        double z_ref = enumerate_partition_shifted(s, n, beta, st);
        CHECK(cs.z_shifted == doctest::Approx(z_ref).epsilon(1e-12));
        std::vector<double> occ_ref = enumerate_occupations(s, n, beta, st);
        REQUIRE(cs.level_occupations.size() == occ_ref.size());
        for (std::size_t j = 0; j < occ_ref.size(); ++j)
          CHECK(cs.level_occupations[j] == doctest::Approx(occ_ref[j]).epsilon(1e-12));
      }
    }
  }
  // Colder fermions: the alternating recursion loses ~5 digits to sign
  // cancellation here (shifted Z_4 ~ 1e-5 from O(1) terms), so the
  // comparison tolerance is widened accordingly.
  CanonicalState cold = canonical_state(s, 4, 2.5, Statistics::fermion);
  double z_ref = enumerate_partition_shifted(s, 4, 2.5, Statistics::fermion);
  CHECK(cold.z_shifted == doctest::Approx(z_ref).epsilon(1e-9));
}

TEST_CASE("occupations sum to N on a real spectrum") {
  Spectrum s = dirichlet_interval_spectrum(2500.0);
  for (int n : {1, 3, 7}) {
    CanonicalState cs = canonical_state(s, n, 0.05, Statistics::boson);
    double total = 0.0;
    for (double o : cs.level_occupations) total += o;
    CHECK(total == doctest::Approx(static_cast<double>(n)).epsilon(1e-10));
  }
}

TEST_CASE("bosonic ground-mode occupation saturates as beta grows") {
  Spectrum s = dirichlet_interval_spectrum(200.0);
  int n = 12;
  CanonicalState cold = canonical_state(s, n, 8.0, Statistics::boson);
  CanonicalState warm = canonical_state(s, n, 0.4, Statistics::boson);
  CHECK(cold.lambda_max / n > 0.999);
  CHECK(cold.lambda_max > warm.lambda_max);
  CHECK(cold.level_occupations[0] == doctest::Approx(cold.lambda_max).epsilon(1e-12));
}

TEST_CASE("fermionic recursion flags thermal underflow") {
  Spectrum s = toy_spectrum({{0.0, 1}, {50.0, 1}, {100.0, 1}});
  CHECK_THROWS_AS(canonical_state(s, 3, 40.0, Statistics::fermion), std::runtime_error);
}

TEST_CASE("hardcore canonical data equals fermionic canonical data") {
  Spectrum s = dirichlet_interval_spectrum(400.0);
  CanonicalState f = canonical_state(s, 5, 0.15, Statistics::fermion);
  CanonicalState h = canonical_state(s, 5, 0.15, Statistics::hardcore_boson);
  CHECK(h.z_shifted == doctest::Approx(f.z_shifted).epsilon(1e-14));
  REQUIRE(h.level_occupations.size() == f.level_occupations.size());
  for (std::size_t j = 0; j < f.level_occupations.size(); ++j)
    CHECK(h.level_occupations[j] == doctest::Approx(f.level_occupations[j]).epsilon(1e-14));
}

TEST_CASE("ground-state modulus check on the Dirichlet interval") {
  ModCheckReport rep = ground_state_mod_check(3.14159265358979323846, 400);
  CHECK(rep.ok);
  CHECK(rep.diagonal_residual < 1e-12);
  CHECK(rep.symmetry_residual < 1e-12);
  CHECK(rep.target_energy == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(std::abs(rep.energy_quotient - rep.target_energy) < 1e-3 * rep.target_energy);
  CHECK_THROWS_AS(ground_state_mod_check(-1.0, 100), std::invalid_argument);
  CHECK_THROWS_AS(ground_state_mod_check(1.0, 4), std::invalid_argument);
}

TEST_CASE("argument validation") {
  Spectrum s = toy_spectrum({{1.0, 1}});
  CHECK_THROWS_AS(free_spectrum(s, 0, Statistics::boson, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(canonical_state(s, 2, -1.0, Statistics::boson), std::invalid_argument);
  CHECK_THROWS_AS(free_spectrum(s, 2, Statistics::fermion, 1.5), std::invalid_argument);
  Spectrum empty;
  empty.window_hi = 100.0;
  CHECK_THROWS_AS(free_spectrum(empty, 1, Statistics::boson, 1.0), std::invalid_argument);
}
