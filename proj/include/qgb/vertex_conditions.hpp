#pragma once

// Self-adjoint vertex conditions for the Laplacian on a metric graph,
// parametrized by an orthogonal projector P on C^{2E} and a Hermitian map
// L = QLQ acting on ker P (Q = 1 - P).  A function f is in the operator
// domain iff  P F_bv = 0  and  Q F'_bv + L F_bv = 0, with inward derivatives.

#include <Eigen/Dense>
#include <string>

#include "qgb/metric_graph.hpp"

namespace qgb {

struct VertexConditions {
  Eigen::MatrixXcd P;  // orthogonal projector, 2E x 2E
  Eigen::MatrixXcd L;  // Hermitian, L = QLQ

  int size() const { return static_cast<int>(P.rows()); }
  Eigen::MatrixXcd Q() const {
    return Eigen::MatrixXcd::Identity(P.rows(), P.cols()) - P;
  }
  std::string fingerprint() const;
};

// Checks P = P* = P^2 and L = L* = QLQ within tol; throws
// std::invalid_argument naming the first failed property.
void validate_conditions(const VertexConditions& c, double tol = 1e-10);

// Largest eigenvalue of L (restricted to ker P it is the same as of the full
// matrix L = QLQ unless ker P = 0, in which case 0 is returned).
double largest_l_eigenvalue(const VertexConditions& c);

// Orthonormal basis of ker P as columns (may have zero columns).
Eigen::MatrixXcd ker_p_basis(const VertexConditions& c, double tol = 1e-8);

// Named condition families on a given graph.
VertexConditions dirichlet_conditions(const MetricGraph& g);
VertexConditions neumann_conditions(const MetricGraph& g);      // decoupled Neumann ends
VertexConditions kirchhoff_conditions(const MetricGraph& g);    // standard/natural
// delta coupling of strength alpha at every vertex: continuity + sum of
// inward derivatives + alpha f(v) = 0, i.e. the form picks up -alpha |f(v)|^2
// so alpha > 0 is an attractive well (L = (alpha/deg_v) on the constant
// vector; L_max = alpha / min_v deg_v).  alpha = 0 reduces to Kirchhoff.
VertexConditions delta_conditions(const MetricGraph& g, double alpha);
// Robin conditions decoupled per boundary slot: f'(slot) + c f(slot) = 0
// (inward derivative convention), i.e. P = 0, L = c Id.
VertexConditions robin_conditions(const MetricGraph& g, double c);

// The matrix M0 with edge blocks (1/l_e) [[-1, 1], [1, -1]] in the slot pair
// (e, E + e); all other entries zero.  Governs the small-E expansion
// Q F'_bv ~ Q M0 Q F_bv and enters the negative-eigenvalue count.
Eigen::MatrixXcd m0_matrix(const MetricGraph& g);

// Hermitian matrix L + Q M0 Q compressed to ker P (r x r, r = dim ker P).
Eigen::MatrixXcd restricted_count_matrix(const MetricGraph& g, const VertexConditions& c);

// Number of eigenvalues of a Hermitian matrix above +threshold.
int positive_eigenvalue_count(const Eigen::MatrixXcd& h, double threshold = 1e-9);

}  // namespace qgb
