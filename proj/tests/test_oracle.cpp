#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "qgb/fd_oracle.hpp"
#include "qgb/metric_graph.hpp"
#include "qgb/numerics.hpp"
#include "qgb/spectrum.hpp"
#include "qgb/vertex_conditions.hpp"
#include "test_support.hpp"

using namespace qgb;

namespace {

constexpr double pi = 3.14159265358979323846;

// Runs the one-particle oracle at cells_per_unit and twice that, checks the
// error against `exact` shrinks like h^2, and returns the extrapolated
// values.
std::vector<double> richardson_pair(const MetricGraph& g, const VertexConditions& c,
                                    const std::vector<double>& exact, int cpu,
                                    double ratio_slack = 0.35) {
  int n = static_cast<int>(exact.size());
  OracleResult coarse = fd_one_particle(g, c, n, cpu);
  OracleResult fine = fd_one_particle(g, c, n, 2 * cpu);
  std::vector<double> extrap(n);
  for (int i = 0; i < n; ++i) {
    double ec = std::abs(coarse.energies[i] - exact[i]);
    double ef = std::abs(fine.energies[i] - exact[i]);
    if (ec > 1e-7) {  // ratio is meaningful only above roundoff
      double ratio = ec / ef;
      CHECK(ratio > 4.0 * (1.0 - ratio_slack));
      CHECK(ratio < 4.0 * (1.0 + ratio_slack));
    }
    extrap[i] = num::richardson({coarse.energies[i], fine.energies[i]});
  }
  return extrap;
}

}  // namespace

TEST_CASE("one-particle oracle: Dirichlet interval converges at second order") {
  auto g = test::single_edge(pi);
  std::vector<double> exact = {1.0, 4.0, 9.0, 16.0};
  auto extrap = richardson_pair(g, dirichlet_conditions(g), exact, 100);
  for (int i = 0; i < 4; ++i)
    CHECK(std::abs(extrap[i] - exact[i]) < 2e-5 * std::max(1.0, exact[i]));
}

TEST_CASE("one-particle oracle: Neumann interval has an exact zero mode") {
  auto g = test::single_edge(pi);
  OracleResult r = fd_one_particle(g, neumann_conditions(g), 3, 150);
  CHECK(std::abs(r.energies[0]) < 1e-10);
  std::vector<double> exact = {0.0, 1.0, 4.0};
  auto extrap = richardson_pair(g, neumann_conditions(g), exact, 100);
  CHECK(std::abs(extrap[1] - 1.0) < 2e-5);
  CHECK(std::abs(extrap[2] - 4.0) < 2e-5);
}

TEST_CASE("one-particle oracle: Robin interval matches the secular solver") {
  auto g = test::single_edge(3.0);
  auto c = robin_conditions(g, 1.0);
  Spectrum sp = eigenvalues_in(g, c, -5.0, 25.0);
  REQUIRE(sp.size_with_multiplicity() >= 5);
  std::vector<double> exact;
  for (const auto& lv : sp.levels)
    for (int m = 0; m < lv.multiplicity && exact.size() < 5; ++m) exact.push_back(lv.energy);
  auto extrap = richardson_pair(g, c, exact, 120);
  for (std::size_t i = 0; i < exact.size(); ++i)
    CHECK(std::abs(extrap[i] - exact[i]) < 3e-5 * std::max(1.0, std::abs(exact[i])));
}

TEST_CASE("one-particle oracle: Kirchhoff 3-star matches the secular solver") {
  auto g = test::star_graph({1.0, 0.7, 1.3});
  auto c = kirchhoff_conditions(g);
  Spectrum sp = eigenvalues_in(g, c, -1.0, 40.0);
  std::vector<double> exact;
  for (const auto& lv : sp.levels)
    for (int m = 0; m < lv.multiplicity && exact.size() < 5; ++m) exact.push_back(lv.energy);
  REQUIRE(exact.size() == 5);
  auto extrap = richardson_pair(g, c, exact, 100);
  for (std::size_t i = 0; i < exact.size(); ++i)
    CHECK(std::abs(extrap[i] - exact[i]) < 1e-4 * std::max(1.0, std::abs(exact[i])));
}

TEST_CASE("one-particle oracle: degenerate star levels carry full multiplicity") {
  auto g = test::star_graph({1.0, 1.0, 1.0});
  auto c = test::star_center_kirchhoff(g);
  // pi^2 is a double eigenvalue; the oracle must report both copies
  std::vector<double> exact = {pi * pi / 4, pi * pi, pi * pi, 9 * pi * pi / 4};
  auto extrap = richardson_pair(g, c, exact, 100);
  for (std::size_t i = 0; i < exact.size(); ++i)
    CHECK(std::abs(extrap[i] - exact[i]) < 1e-4 * exact[i]);
}

TEST_CASE("one-particle oracle: random complex conditions on a 2-edge path") {
  std::mt19937_64 rng(20250814);
  auto g = test::path_graph({1.1, 0.8});
  VertexConditions c = test::random_conditions(rng, 4, true);
  double lmax = largest_l_eigenvalue(c);
  double lo = -1.0;
  if (lmax > 0.0) {
    double s = lower_bound_s(g.min_length(), lmax);
    lo = -1.25 * s * s - 0.5;
  }
  Spectrum sp = eigenvalues_in(g, c, lo, 100.0);
  std::vector<double> exact;
  for (const auto& lv : sp.levels)
    for (int m = 0; m < lv.multiplicity && exact.size() < 4; ++m) exact.push_back(lv.energy);
  REQUIRE(exact.size() == 4);
  auto extrap = richardson_pair(g, c, exact, 150);
  for (std::size_t i = 0; i < exact.size(); ++i)
    CHECK(std::abs(extrap[i] - exact[i]) < 1e-4 * std::max(1.0, std::abs(exact[i])));
}

TEST_CASE("two hardcore particles on a Dirichlet interval: fermionic sums") {
  // distinct pairs of {1, 4, 9, 16, 25}: 5, 10, 13, 17, 20
  std::vector<double> exact = {5.0, 10.0, 13.0, 17.0, 20.0};
  OracleResult coarse = fd_two_particle_interval(pi, IntervalEnd::dirichlet, 5, 60);
  OracleResult fine = fd_two_particle_interval(pi, IntervalEnd::dirichlet, 5, 120);
  for (int i = 0; i < 5; ++i) {
    double ratio = (coarse.energies[i] - exact[i]) / (fine.energies[i] - exact[i]);
    CHECK(ratio > 2.8);
    CHECK(ratio < 5.2);
    double extrap = num::richardson({coarse.energies[i], fine.energies[i]});
    CHECK(std::abs(extrap - exact[i]) < 2e-3 * exact[i]);
  }
}

TEST_CASE("two hardcore particles on a Neumann interval: fermionic sums") {
  // distinct pairs of {0, 1, 4, 9, 16}: 1, 4, 5, 9, 10
  std::vector<double> exact = {1.0, 4.0, 5.0, 9.0, 10.0};
  OracleResult coarse = fd_two_particle_interval(pi, IntervalEnd::neumann, 5, 60);
  OracleResult fine = fd_two_particle_interval(pi, IntervalEnd::neumann, 5, 120);
  for (int i = 0; i < 5; ++i) {
    double extrap = num::richardson({coarse.energies[i], fine.energies[i]});
    CHECK(std::abs(extrap - exact[i]) < 4e-3 * exact[i]);
  }
}

TEST_CASE("two hardcore particles on the equilateral 3-star: fermionic sums") {
  // one-particle slots (pi/2)^2, pi^2 (x2), (3pi/2)^2, ...; distinct pairs:
  // 1.25 pi^2 (x2), 2 pi^2, 2.5 pi^2, 3.25 pi^2 (x2)
  std::vector<double> exact = {1.25 * pi * pi, 1.25 * pi * pi, 2.0 * pi * pi, 2.5 * pi * pi,
                               3.25 * pi * pi};
  OracleResult coarse = fd_two_particle_star(5, 32);
  OracleResult fine = fd_two_particle_star(5, 64);
  for (int i = 0; i < 5; ++i) {
    double ratio = (coarse.energies[i] - exact[i]) / (fine.energies[i] - exact[i]);
    CHECK(ratio > 2.8);
    CHECK(ratio < 5.2);
    double extrap = num::richardson({coarse.energies[i], fine.energies[i]});
    CHECK(std::abs(extrap - exact[i]) < 3e-3 * exact[i]);
  }
  // the degenerate pair at 1.25 pi^2 must be resolved as two copies
  CHECK(std::abs(fine.energies[1] - fine.energies[0]) < 0.05);
  CHECK(fine.energies[2] - fine.energies[1] > 5.0);
}

TEST_CASE("the sign conjugation in the Fermi-Bose image is load-bearing") {
  // With plain symmetric gluing (vertex conditions NOT conjugated by the
  // sign matrix) the hardcore gas on the star is a different self-adjoint
  // operator: its ground state sits well below the lowest fermionic sum.
  OracleResult plain = fd_two_particle_star(3, 32, StarGluing::plain_symmetric);
  CHECK(plain.energies[0] < 1.25 * pi * pi - 1.0);
  CHECK(std::abs(plain.energies[1] - plain.energies[2]) < 0.05);
}

TEST_CASE("oracle argument validation") {
  auto g = test::single_edge(1.0);
  CHECK_THROWS_AS(fd_one_particle(g, dirichlet_conditions(g), 0, 100), std::invalid_argument);
  CHECK_THROWS_AS(fd_one_particle(g, dirichlet_conditions(g), 2, 1), std::invalid_argument);
  auto g2 = test::path_graph({1.0, 1.0});
  CHECK_THROWS_AS(fd_one_particle(g2, dirichlet_conditions(g), 2, 50), std::invalid_argument);
  CHECK_THROWS_AS(fd_two_particle_interval(-1.0, IntervalEnd::dirichlet, 2, 50),
                  std::invalid_argument);
  CHECK_THROWS_AS(fd_two_particle_interval(1.0, IntervalEnd::dirichlet, 2, 4),
                  std::invalid_argument);
  CHECK_THROWS_AS(fd_two_particle_star(2, 4), std::invalid_argument);
}
