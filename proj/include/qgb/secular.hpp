#pragma once

// Secular formulation of the eigenvalue problem: with per-edge fundamental
// solutions C(x;E), S(x;E) (C(0)=1, C'(0)=0, S(0)=0, S'(0)=1, both entire in
// E), boundary traces of f_e = a_e C + b_e S are linear in the coefficient
// vector c = (a, b):  F_bv = X(E) c,  F'_bv = Y(E) c.  E is an eigenvalue of
// the (P, L) Laplacian iff  M(E) = (P + L) X(E) + Q Y(E)  has a nontrivial
// kernel, and the eigenspace dimension equals dim ker M(E).

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <utility>

#include "qgb/metric_graph.hpp"
#include "qgb/vertex_conditions.hpp"

namespace qgb {

// Unscaled trace matrices X(E), Y(E) (real, 2E x 2E).  Column e carries the
// coefficient a_e, column E+e the coefficient b_e; rows follow the boundary
// ordering.  Stable through E = 0; for E < 0 entries grow like e^{kappa l},
// so callers probing deep negative energies should prefer SecularSystem,
// which works with rescaled columns.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> fundamental_matrices(const MetricGraph& g,
                                                                 double energy);

struct SecularSample {
  Eigen::VectorXd singular_values;  // descending, of the equilibrated matrix
  double smin = 0.0;                // smallest singular value
  std::complex<double> det;         // determinant of the equilibrated matrix
};

class SecularSystem {
 public:
  SecularSystem(const MetricGraph& g, const VertexConditions& c);

  // Equilibrated secular matrix at the given energy.  For E < 0 each edge
  // with large kappa l_e is expressed in the exponential solution basis
  // {e^{-kappa x}, e^{-kappa (l-x)}} instead of {C, S} (an invertible
  // per-edge change of basis, so kernel and rank are unchanged) to avoid
  // cosh overflow, and every column is divided by max(column norm, 1).
  Eigen::MatrixXcd matrix(double energy) const;

  SecularSample evaluate(double energy) const;
  double smin(double energy) const;

  // dim ker M(E): number of singular values below rank_rel * sigma_max.
  int kernel_dimension(double energy, double rank_rel = 1e-8) const;

  int size() const { return static_cast<int>(a_.rows()); }

 private:
  Eigen::MatrixXcd a_;  // P + L
  Eigen::MatrixXcd b_;  // Q
  std::vector<double> lengths_;
  std::shared_ptr<const MetricGraph> graph_;
};

// One-shot convenience wrapper.
SecularSample secular_value(const MetricGraph& g, const VertexConditions& c, double energy);

}  // namespace qgb
