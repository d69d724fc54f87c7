#include "qgb/vertex_conditions.hpp"

#include <cmath>
#include <cstdio>

namespace qgb {

namespace {
std::string matrix_bytes(const Eigen::MatrixXcd& m) {
  std::string bytes;
  char buf[96];
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g;", m(i, j).real(), m(i, j).imag());
      bytes += buf;
    }
  return bytes;
}
}  // namespace

std::string VertexConditions::fingerprint() const {
  return hex64(fnv1a64(matrix_bytes(P) + "#" + matrix_bytes(L)));
}

void validate_conditions(const VertexConditions& c, double tol) {
  const auto& P = c.P;
  const auto& L = c.L;
  if (P.rows() != P.cols()) throw std::invalid_argument("conditions: P must be square");
  if (L.rows() != L.cols() || L.rows() != P.rows())
    throw std::invalid_argument("conditions: L must be square of the same size as P");
  auto scale = [](const Eigen::MatrixXcd& m) { return std::max(1.0, m.norm()); };
  if ((P - P.adjoint()).norm() > tol * scale(P))
    throw std::invalid_argument("conditions: P is not Hermitian");
  if ((P * P - P).norm() > tol * scale(P))
    throw std::invalid_argument("conditions: P is not idempotent");
  if ((L - L.adjoint()).norm() > tol * scale(L))
    throw std::invalid_argument("conditions: L is not Hermitian");
  Eigen::MatrixXcd Q = c.Q();
  if ((Q * L * Q - L).norm() > tol * scale(L))
    throw std::invalid_argument("conditions: L does not satisfy L = QLQ");
}

double largest_l_eigenvalue(const VertexConditions& c) {
  Eigen::MatrixXcd V = ker_p_basis(c);
  if (V.cols() == 0) return 0.0;
  Eigen::MatrixXcd R = V.adjoint() * c.L * V;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(R, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

Eigen::MatrixXcd ker_p_basis(const VertexConditions& c, double tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(c.P);
  const auto& vals = es.eigenvalues();
  int r = 0;
  for (Eigen::Index i = 0; i < vals.size(); ++i)
    if (vals(i) < 0.5) ++r;  // projector spectrum is {0,1}; validated elsewhere
  (void)tol;
  Eigen::MatrixXcd V(c.P.rows(), r);
  int k = 0;
  for (Eigen::Index i = 0; i < vals.size(); ++i)
    if (vals(i) < 0.5) V.col(k++) = es.eigenvectors().col(i);
  return V;
}

VertexConditions dirichlet_conditions(const MetricGraph& g) {
  int n = g.ordering().size();
  VertexConditions c;
  c.P = Eigen::MatrixXcd::Identity(n, n);
  c.L = Eigen::MatrixXcd::Zero(n, n);
  return c;
}

VertexConditions neumann_conditions(const MetricGraph& g) {
  int n = g.ordering().size();
  VertexConditions c;
  c.P = Eigen::MatrixXcd::Zero(n, n);
  c.L = Eigen::MatrixXcd::Zero(n, n);
  return c;
}

VertexConditions kirchhoff_conditions(const MetricGraph& g) {
  return delta_conditions(g, 0.0);
}

VertexConditions delta_conditions(const MetricGraph& g, double alpha) {
  int n = g.ordering().size();
  // ker P at each vertex is spanned by the constant vector on its slots;
  // P projects onto the orthogonal complement (differences across a vertex).
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(n, n);
  for (const std::string& v : g.vertices()) {
    std::vector<int> slots = g.vertex_slots(v);
    double deg = static_cast<double>(slots.size());
    for (int a : slots)
      for (int b : slots) {
        P(a, b) -= 1.0 / deg;
        L(a, b) += alpha / (deg * deg);  // L = (alpha/deg) |u><u| with u = 1_v/sqrt(deg)
      }
  }
  return {P, L};
}

VertexConditions robin_conditions(const MetricGraph& g, double c) {
  int n = g.ordering().size();
  VertexConditions vc;
  vc.P = Eigen::MatrixXcd::Zero(n, n);
  vc.L = c * Eigen::MatrixXcd::Identity(n, n);
  return vc;
}

Eigen::MatrixXcd m0_matrix(const MetricGraph& g) {
  int E = g.edge_count();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2 * E, 2 * E);
  for (int e = 0; e < E; ++e) {
    double w = 1.0 / g.edge(e).length;
    int s0 = g.ordering().slot(e, EdgeEnd::start);
    int s1 = g.ordering().slot(e, EdgeEnd::finish);
    m(s0, s0) = -w;
    m(s1, s1) = -w;
    m(s0, s1) = w;
    m(s1, s0) = w;
  }
  return m;
}

Eigen::MatrixXcd restricted_count_matrix(const MetricGraph& g, const VertexConditions& c) {
  Eigen::MatrixXcd V = ker_p_basis(c);
  Eigen::MatrixXcd M0 = m0_matrix(g);
  // Q M0 Q compressed by V equals V^* M0 V because ran V = ker P.
  return V.adjoint() * (c.L + M0) * V;
}

int positive_eigenvalue_count(const Eigen::MatrixXcd& h, double threshold) {
  if (h.rows() == 0) return 0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  int n = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > threshold * scale) ++n;
  return n;
}

}  // namespace qgb
