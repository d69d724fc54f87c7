#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "qgb/numerics.hpp"
#include "qgb/secular.hpp"
#include "qgb/spectrum.hpp"
#include "test_support.hpp"

using namespace qgb;
using std::numbers::pi;

namespace {

int negative_count(const Spectrum& sp) {
  int n = 0;
  for (const auto& lv : sp.levels)
    if (lv.energy < -1e-11) n += lv.multiplicity;
  return n;
}

}  // namespace

TEST_CASE("Dirichlet interval of length pi has eigenvalues n^2") {
  auto g = test::single_edge(pi);
  auto sp = eigenvalues_in(g, dirichlet_conditions(g), 0.5, 20.0);
  REQUIRE(sp.levels.size() == 4);
  for (int n = 1; n <= 4; ++n) {
    CHECK(sp.levels[n - 1].energy == doctest::Approx(n * n).epsilon(1e-10));
    CHECK(sp.levels[n - 1].multiplicity == 1);
  }
}

TEST_CASE("Neumann interval includes a simple zero eigenvalue") {
  auto g = test::single_edge(pi);
  auto sp = eigenvalues_in(g, neumann_conditions(g), -1.0, 10.0);
  REQUIRE(sp.levels.size() == 4);
  CHECK(sp.levels[0].energy == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(sp.levels[0].multiplicity == 1);
  CHECK(sp.levels[1].energy == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(sp.levels[3].energy == doctest::Approx(9.0).epsilon(1e-10));
}

TEST_CASE("loop eigenvalues are doubly degenerate") {
  auto g = test::loop_graph(2.0 * pi);
  auto sp = eigenvalues_in(g, kirchhoff_conditions(g), -1.0, 10.0);
  REQUIRE(sp.levels.size() == 4);
  CHECK(sp.levels[0].energy == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(sp.levels[0].multiplicity == 1);
  for (int n = 1; n <= 3; ++n) {
    CHECK(sp.levels[n].energy == doctest::Approx(n * n).epsilon(1e-10));
    CHECK(sp.levels[n].multiplicity == 2);
  }
}

TEST_CASE("equilateral 3-star with Dirichlet tips alternates simple and double levels") {
  auto g = test::star_graph({1.0, 1.0, 1.0});
  // Dirichlet at the three tips, Kirchhoff at the centre.
  auto vc = dirichlet_conditions(g);
  auto kir = kirchhoff_conditions(g);
  BoundaryOrdering ord(g.edge_count());
  // Tips are the finish slots; centre keeps Kirchhoff rows/cols.
  auto centre = g.vertex_slots("c");
  Eigen::MatrixXcd p = vc.P, l = vc.L;
  for (int a : centre)
    for (int b = 0; b < p.rows(); ++b) {
      p(a, b) = kir.P(a, b);
      p(b, a) = kir.P(b, a);
      l(a, b) = kir.L(a, b);
      l(b, a) = kir.L(b, a);
    }
  VertexConditions mixed{p, l};
  validate_conditions(mixed);

  auto sp = eigenvalues_in(g, mixed, 0.5, 45.0);
  REQUIRE(sp.levels.size() == 4);
  CHECK(sp.levels[0].energy == doctest::Approx(pi * pi / 4).epsilon(1e-10));
  CHECK(sp.levels[0].multiplicity == 1);
  CHECK(sp.levels[1].energy == doctest::Approx(pi * pi).epsilon(1e-10));
  CHECK(sp.levels[1].multiplicity == 2);
  CHECK(sp.levels[2].energy == doctest::Approx(9 * pi * pi / 4).epsilon(1e-10));
  CHECK(sp.levels[2].multiplicity == 1);
  CHECK(sp.levels[3].energy == doctest::Approx(4 * pi * pi).epsilon(1e-10));
  CHECK(sp.levels[3].multiplicity == 2);
}

TEST_CASE("attractive Robin interval: negative pair collides exponentially but count survives") {
  // Both endpoint conditions f' = -c f with c = 2: two negative eigenvalues
  // within e^{-2cl} of -c^2.  At l = 10 the splitting is ~1e-17, far below
  // locational resolution; they must still be reported with total count 2.
  double c = 2.0;
  auto g = test::single_edge(10.0);
  auto vc = robin_conditions(g, c);
  auto sp = eigenvalues_in(g, vc, -10.0, 1.0);
  CHECK(negative_count(sp) == 2);
  for (const auto& lv : sp.levels)
    if (lv.energy < 0) CHECK(lv.energy == doctest::Approx(-c * c).epsilon(1e-8));
  CHECK(negative_count(sp) == predicted_negative_count(g, vc));
}

TEST_CASE("attractive Robin interval at moderate length: resolved negative pair") {
  double c = 1.0;
  auto g = test::single_edge(3.0);
  auto vc = robin_conditions(g, c);
  auto sp = eigenvalues_in(g, vc, -5.0, 0.0);
  REQUIRE(negative_count(sp) == 2);
  // Roots of kappa*tanh(kappa l/2) = c and kappa*coth(kappa l/2) = c.
  auto root = [&](bool tanh_branch) {
    return num::bisect_root(
        [&](double k) {
          double t = std::tanh(k * 1.5);
          return (tanh_branch ? k * t : k / t) - c;
        },
        0.3, 3.0, 1e-14);
  };
  double k1 = root(true), k2 = root(false);
  CHECK(sp.levels[0].energy == doctest::Approx(-k1 * k1).epsilon(1e-9));
  CHECK(sp.levels[1].energy == doctest::Approx(-k2 * k2).epsilon(1e-9));
}

TEST_CASE("negative-count identity holds for randomly drawn admissible conditions") {
  std::mt19937_64 rng(20250814);
  std::uniform_real_distribution<double> len_dist(0.3, 2.5);
  std::uniform_int_distribution<int> edge_dist(1, 4);
  int trials = 48;
  for (int t = 0; t < trials; ++t) {
    int ne = edge_dist(rng);
    std::vector<double> lengths;
    for (int i = 0; i < ne; ++i) lengths.push_back(len_dist(rng));
    auto g = test::path_graph(lengths);
    auto vc = test::random_conditions(rng, 2 * ne, t % 2 == 1);
    int predicted = predicted_negative_count(g, vc);
    auto sp = eigenvalues_in(g, vc, -1e6, 1.0);
    INFO("trial ", t, " edges ", ne);
    CHECK(negative_count(sp) == predicted);
  }
}

TEST_CASE("ground state of a long attractive edge approaches -L_max^2") {
  auto g = test::single_edge(30.0);
  auto vc = robin_conditions(g, 1.0);
  double e0 = ground_state_energy(g, vc);
  CHECK(e0 == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("Rayleigh trial bound lies above the true ground state") {
  auto g = test::single_edge(12.0);
  auto vc = robin_conditions(g, 1.5);
  double e0 = ground_state_energy(g, vc);
  auto trial = rayleigh_trial_optimal(largest_l_eigenvalue(vc), 2.0);
  CHECK(trial.value >= e0 - 1e-12);
  CHECK(trial.value < 0.0);
  // alpha = 2 gives -(15/16) L^2; exact at alpha -> infinity.
  CHECK(trial.value == doctest::Approx(-15.0 / 16.0 * 2.25).epsilon(1e-6));
}

TEST_CASE("counting function matches the listed spectrum") {
  auto g = test::single_edge(pi);
  auto sp = eigenvalues_in(g, dirichlet_conditions(g), 0.0, 40.0);
  CHECK(counting_function(sp, 5.5) == 5);
  CHECK(counting_function(sp, 1.0) == 1);
  CHECK(counting_function(sp, 0.5) == 0);
  CHECK_THROWS_AS(counting_function(sp, 100.0), std::invalid_argument);
}

TEST_CASE("window validation") {
  auto g = test::single_edge(1.0);
  CHECK_THROWS_AS(eigenvalues_in(g, dirichlet_conditions(g), 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("secular matrix kernel dimension matches multiplicity at a double root") {
  auto g = test::loop_graph(2.0 * pi);
  SecularSystem sys(g, kirchhoff_conditions(g));
  CHECK(sys.kernel_dimension(1.0) == 2);
  CHECK(sys.kernel_dimension(1.3) == 0);
}
