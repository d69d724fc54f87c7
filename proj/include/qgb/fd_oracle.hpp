#pragma once

// Independent discretization oracles used to cross-check the secular-equation
// solver and the hardcore-boson identities.  Everything here deliberately
// avoids the secular machinery: one-particle problems are P1 finite elements
// on each edge with the vertex conditions imposed by constraint elimination,
// two-particle hardcore problems are assembled directly on the two-particle
// configuration space with a Dirichlet condition on the collision set.
// Eigenvalues converge at second order in the mesh width, so paired runs at
// h and h/2 admit Richardson extrapolation.

#include <vector>

#include "qgb/metric_graph.hpp"
#include "qgb/vertex_conditions.hpp"

namespace qgb {

struct OracleResult {
  std::vector<double> energies;  // lowest eigenvalues, ascending
  int dof_count = 0;             // size of the reduced discrete problem
  double mesh_h = 0.0;           // largest element width in the mesh
};

// Lowest eigenvalues of the one-particle Laplacian on (g, c).  Each edge is
// split into roughly cells_per_unit * length elements; boundary values are
// restricted to ker P and the L-term enters the quadratic form.  Eigenvalues
// come from shift-inverted Lanczos with full reorthogonalization and deflated
// restarts, so degenerate levels are resolved with their multiplicity.
OracleResult fd_one_particle(const MetricGraph& g, const VertexConditions& c, int n_eigenvalues,
                             int cells_per_unit);

enum class IntervalEnd { dirichlet, neumann };

// Two hardcore particles on an interval of length l: the Laplacian on the
// ordered triangle 0 < x1 < x2 < l with a Dirichlet condition on the
// collision diagonal and `outer` at the physical interval ends.  grid_n is
// the number of cells per axis.
OracleResult fd_two_particle_interval(double l, IntervalEnd outer, int n_eigenvalues, int grid_n);

// Vertex data for the two-particle star problem.  The Fermi-Bose map sends
// free fermions with (P, L) to hardcore bosons with the sign-conjugated
// conditions (S P S, S L S); on the fundamental domain this conjugation shows
// up as a relative minus sign wherever the second particle of the ordered
// representative crosses the centre.  fermi_bose_image realizes that twisted
// gluing (isospectral to free fermions by construction); plain_symmetric is
// the naive hardcore gas with unconjugated conditions, which on a star is a
// genuinely different self-adjoint operator.
enum class StarGluing { fermi_bose_image, plain_symmetric };

// Two hardcore particles on the equilateral 3-star (unit arms, Dirichlet
// tips, standard conditions at the centre).  The mesh covers one fundamental
// domain of the configuration space: a triangle {0 < x1 < x2 < 1} per edge
// plus a unit square per unordered edge pair, glued along the lines where a
// particle sits at the centre; the collision set carries the Dirichlet
// condition.  grid_n is the number of cells per unit arm.
OracleResult fd_two_particle_star(int n_eigenvalues, int grid_n,
                                  StarGluing gluing = StarGluing::fermi_bose_image);

}  // namespace qgb
