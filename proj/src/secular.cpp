#include "qgb/secular.hpp"

#include <cmath>

namespace qgb {

namespace {

// Fills the columns of one edge in the {C, S} basis.
// Column e carries a_e (coefficient of C), column ne+e carries b_e.
void fill_edge_cs(double energy, double l, int s0, int s1, int col_a, int col_b,
                  Eigen::MatrixXd& x, Eigen::MatrixXd& y) {
  double c, s;
  if (energy > 0.0) {
    double k = std::sqrt(energy);
    double kl = k * l;
    c = std::cos(kl);
    s = kl < 1e-4 ? l * (1.0 - kl * kl / 6.0 * (1.0 - kl * kl / 20.0)) : std::sin(kl) / k;
  } else if (energy == 0.0) {
    c = 1.0;
    s = l;
  } else {
    double kappa = std::sqrt(-energy);
    double u = kappa * l;
    c = std::cosh(u);
    s = u < 1e-4 ? l * (1.0 + u * u / 6.0) : std::sinh(u) / kappa;
  }
  x(s0, col_a) = 1.0;           // f(0) = a
  x(s1, col_a) = c;             // f(l)
  x(s1, col_b) = s;
  y(s0, col_b) = 1.0;           // f'(0) = b          (inward derivative)
  y(s1, col_a) = energy * s;    // -f'(l) = a E S(l) - b C(l)
  y(s1, col_b) = -c;
}

// Symmetrized exponential basis for the whole negative axis E = -kappa^2:
//   psi_1 = (e^{-kappa x} + e^{-kappa (l-x)}) / (1 + e^{-kappa l})
//   psi_2 = (e^{-kappa x} - e^{-kappa (l-x)}) / (1 - e^{-kappa l})
// Unlike {C, S} it never collapses in the deep tail (kappa l large: the pair
// tends to the one-sided decays), and unlike the raw decay pair it never
// degenerates at small kappa l (the limit is {1, 1 - 2x/l}).  Every trace
// entry is bounded by max(1, kappa, 2/l) and the entries are analytic in
// kappa, so the scanned singular value has no artificial kinks or jumps
// anywhere on the axis.  Boundary data: psi_1 is symmetric with inward
// derivative -kappa tanh(kappa l / 2) at both ends; psi_2 is antisymmetric
// with endpoint values +1 / -1 and slope -kappa coth(kappa l / 2), where
// kappa coth(kappa l / 2) -> 2/l as kappa -> 0 (computed via expm1).
void fill_edge_negative(double kappa, double l, int s0, int s1, int col_1, int col_2,
                        Eigen::MatrixXd& x, Eigen::MatrixXd& y) {
  double u = kappa * l;
  double d = std::exp(-u);
  double om = -std::expm1(-u);               // 1 - e^{-u}, exact for small u
  double t = kappa * om / (1.0 + d);         // kappa tanh(u/2)
  double q = kappa * (1.0 + d) / om;         // kappa coth(u/2) -> 2/l
  x(s0, col_1) = 1.0;
  x(s1, col_1) = 1.0;
  y(s0, col_1) = -t;            // psi_1'(0)
  y(s1, col_1) = -t;            // -psi_1'(l)
  x(s0, col_2) = 1.0;
  x(s1, col_2) = -1.0;
  y(s0, col_2) = -q;            // psi_2'(0)
  y(s1, col_2) = q;             // -psi_2'(l)
}

void fill_trace_matrices(const MetricGraph& g, double energy, bool safe_basis, Eigen::MatrixXd& x,
                         Eigen::MatrixXd& y) {
  int ne = g.edge_count();
  int n = 2 * ne;
  x.setZero(n, n);
  y.setZero(n, n);
  const BoundaryOrdering& ord = g.ordering();
  double kappa = energy < 0.0 ? std::sqrt(-energy) : 0.0;
  for (int e = 0; e < ne; ++e) {
    double l = g.edge(e).length;
    int s0 = ord.slot(e, EdgeEnd::start);
    int s1 = ord.slot(e, EdgeEnd::finish);
    if (safe_basis && energy < 0.0)
      fill_edge_negative(kappa, l, s0, s1, e, ne + e, x, y);
    else
      fill_edge_cs(energy, l, s0, s1, e, ne + e, x, y);
  }
}

}  // namespace

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> fundamental_matrices(const MetricGraph& g,
                                                                 double energy) {
  Eigen::MatrixXd x, y;
  fill_trace_matrices(g, energy, /*safe_basis=*/false, x, y);
  return {std::move(x), std::move(y)};
}

SecularSystem::SecularSystem(const MetricGraph& g, const VertexConditions& c) {
  validate_conditions(c);
  if (c.size() != g.ordering().size())
    throw std::invalid_argument("SecularSystem: conditions size does not match graph");
  a_ = c.P + c.L;
  b_ = c.Q();
  lengths_.reserve(g.edge_count());
  for (const Edge& e : g.edges()) lengths_.push_back(e.length);
  // Rebuild a private single-purpose graph view: lengths are all we need, but
  // trace matrices want the ordering, so keep a copy of the graph instead.
  graph_ = std::make_shared<MetricGraph>(g);
}

Eigen::MatrixXcd SecularSystem::matrix(double energy) const {
  Eigen::MatrixXd x, y;
  fill_trace_matrices(*graph_, energy, /*safe_basis=*/true, x, y);
  Eigen::MatrixXcd m = a_ * x + b_ * y;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    double nj = m.col(j).norm();
    if (nj > 1.0) m.col(j) /= nj;
  }
  return m;
}

SecularSample SecularSystem::evaluate(double energy) const {
  Eigen::MatrixXcd m = matrix(energy);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  SecularSample s;
  s.singular_values = svd.singularValues();
  s.smin = s.singular_values(s.singular_values.size() - 1);
  s.det = Eigen::PartialPivLU<Eigen::MatrixXcd>(m).determinant();
  return s;
}

double SecularSystem::smin(double energy) const {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(matrix(energy));
  return svd.singularValues()(svd.singularValues().size() - 1);
}

int SecularSystem::kernel_dimension(double energy, double rank_rel) const {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(matrix(energy));
  const auto& sv = svd.singularValues();
  // The equilibrated matrix has O(1) scale away from degeneracies; near a
  // full-kernel point sigma_max itself collapses, so the threshold needs an
  // absolute floor or the kernel would be missed exactly where it matters.
  double scale = std::max(sv(0), 1.0);
  int dim = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) < rank_rel * scale) ++dim;
  return dim;
}

SecularSample secular_value(const MetricGraph& g, const VertexConditions& c, double energy) {
  return SecularSystem(g, c).evaluate(energy);
}

}  // namespace qgb
