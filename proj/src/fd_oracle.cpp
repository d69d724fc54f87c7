#include "qgb/fd_oracle.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "qgb/spectrum.hpp"

namespace qgb {

namespace {

using Cd = std::complex<double>;

// ---------------------------------------------------------------------------
// Shift-inverted Lanczos on a Hermitian sparse matrix: full
// reorthogonalization, deflated random restarts to resolve multiplicities.
// The shift sits strictly below the spectrum, so the inverse is positive
// definite and the lowest energies are the extreme Ritz values.
// ---------------------------------------------------------------------------

template <typename Scalar>
struct LanczosWork {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Eigen::SparseLU<Eigen::SparseMatrix<Scalar>> lu;
  double sigma = 0.0;
  int n = 0;
  int n_eig = 0;
  std::vector<Vec> locked;          // converged low-lying Ritz vectors
  std::vector<double> locked_vals;  // matching eigenvalues of H, unsorted
};

template <typename Scalar>
void random_vector(typename LanczosWork<Scalar>::Vec& v, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if constexpr (std::is_same_v<Scalar, double>)
      v[i] = gauss(rng);
    else
      v[i] = Cd(gauss(rng), gauss(rng));
  }
}

// Retention ceiling: keep every converged pair until n_eig values are locked,
// afterwards only pairs not far above the running n_eig-th lowest -- late
// copies of degenerate levels still enter, the bulk of the spectrum does not.
template <typename Scalar>
double keep_ceiling(const LanczosWork<Scalar>& w) {
  if (static_cast<int>(w.locked_vals.size()) < w.n_eig)
    return std::numeric_limits<double>::max();
  std::vector<double> v = w.locked_vals;
  std::nth_element(v.begin(), v.begin() + (w.n_eig - 1), v.end());
  double nth = v[w.n_eig - 1];
  return nth + std::max(1.0, 0.05 * (nth - w.sigma));
}

// One Lanczos sweep deflated against the locked set; locks newly converged
// pairs below the retention ceiling and returns how many were added.
template <typename Scalar>
int lanczos_run(LanczosWork<Scalar>& w, std::mt19937_64& rng) {
  using Vec = typename LanczosWork<Scalar>::Vec;
  int m = std::min<int>(w.n - static_cast<int>(w.locked.size()),
                        std::max(140, 8 * w.n_eig + 40));
  if (m <= 0) return 0;

  auto orth_locked = [&](Vec& v) {
    for (const Vec& u : w.locked) v -= u * u.dot(v);
  };

  std::vector<Vec> basis;
  std::vector<double> alpha, beta;
  Vec v(w.n);
  random_vector<Scalar>(v, rng);
  orth_locked(v);
  double nv = v.norm();
  if (nv < 1e-300) return 0;
  basis.push_back(v / nv);

  double beta_m = 0.0;  // norm of the final residual vector
  for (int j = 0; j < m; ++j) {
    Vec u = w.lu.solve(basis[j]);
    if (j > 0) u -= Scalar(beta[j - 1]) * basis[j - 1];
    double a = std::real(Scalar(basis[j].dot(u)));
    u -= Scalar(a) * basis[j];
    alpha.push_back(a);
    for (int pass = 0; pass < 2; ++pass) {
      orth_locked(u);
      for (const Vec& q : basis) u -= q * q.dot(u);
    }
    double b = u.norm();
    if (j + 1 == m || b < 1e-13) {
      beta_m = b;
      break;
    }
    beta.push_back(b);
    basis.push_back(u / b);
  }

  int k = static_cast<int>(alpha.size());
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    t(i, i) = alpha[i];
    if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
  double theta_max = es.eigenvalues().cwiseAbs().maxCoeff();
  double ceiling = keep_ceiling(w);

  int added = 0;
  for (int i = 0; i < k; ++i) {
    double theta = es.eigenvalues()[i];
    if (theta <= 0.0) continue;  // numerical junk on the far side of the shift
    if (std::abs(beta_m * es.eigenvectors()(k - 1, i)) > 1e-9 * theta_max) continue;
    double energy = w.sigma + 1.0 / theta;
    if (energy > ceiling) continue;
    Vec z = Vec::Zero(w.n);
    for (int j = 0; j < k; ++j) z += Scalar(es.eigenvectors()(j, i)) * basis[j];
    double nz = z.norm();
    if (nz < 0.5) continue;  // collapsed onto the locked space
    w.locked.push_back(z / nz);
    w.locked_vals.push_back(energy);
    ceiling = keep_ceiling(w);
    ++added;
  }
  return added;
}

// Lowest n_eig eigenvalues of the Hermitian matrix h; sigma must lie strictly
// below the whole spectrum.
template <typename Scalar>
std::vector<double> lowest_eigenvalues(const Eigen::SparseMatrix<Scalar>& h, double sigma,
                                       int n_eig) {
  LanczosWork<Scalar> w;
  w.n = static_cast<int>(h.rows());
  w.sigma = sigma;
  w.n_eig = n_eig;
  if (n_eig > w.n)
    throw std::invalid_argument("fd_oracle: more eigenvalues requested than mesh unknowns");
  Eigen::SparseMatrix<Scalar> shifted = h;
  Eigen::SparseMatrix<Scalar> eye(w.n, w.n);
  eye.setIdentity();
  shifted -= Scalar(sigma) * eye;
  w.lu.compute(shifted);
  if (w.lu.info() != Eigen::Success)
    throw std::runtime_error("fd_oracle: sparse factorization failed");

  std::mt19937_64 rng(0x51ab5eed);
  int runs = 0;
  while (runs < 4 || (static_cast<int>(w.locked_vals.size()) < n_eig && runs < 8)) {
    lanczos_run(w, rng);
    ++runs;
    if (static_cast<int>(w.locked.size()) >= w.n) break;
  }
  if (static_cast<int>(w.locked_vals.size()) < n_eig)
    throw std::runtime_error("fd_oracle: Lanczos converged only " +
                             std::to_string(w.locked_vals.size()) + " of " +
                             std::to_string(n_eig) + " requested eigenvalues");
  std::sort(w.locked_vals.begin(), w.locked_vals.end());
  w.locked_vals.resize(n_eig);
  return w.locked_vals;
}

// ---------------------------------------------------------------------------
// One-particle P1 finite elements on a metric graph.
// ---------------------------------------------------------------------------

struct EdgeMesh {
  int cells = 0;
  double h = 0.0;
  int node0 = 0;  // global index of the x = 0 node; nodes are consecutive
};

}  // namespace

OracleResult fd_one_particle(const MetricGraph& g, const VertexConditions& c, int n_eigenvalues,
                             int cells_per_unit) {
  validate_conditions(c);
  if (c.size() != g.ordering().size())
    throw std::invalid_argument("fd_one_particle: conditions sized for a different graph");
  if (n_eigenvalues < 1) throw std::invalid_argument("fd_one_particle: need n_eigenvalues >= 1");
  if (cells_per_unit < 2) throw std::invalid_argument("fd_one_particle: mesh too coarse");

  int ne = g.edge_count();
  std::vector<EdgeMesh> mesh(ne);
  int n_full = 0;
  double h_max = 0.0;
  for (int e = 0; e < ne; ++e) {
    double l = g.edge(e).length;
    int cells = std::max(2, static_cast<int>(std::lround(l * cells_per_unit)));
    mesh[e] = {cells, l / cells, n_full};
    n_full += cells + 1;
    h_max = std::max(h_max, mesh[e].h);
  }

  int slots = static_cast<int>(g.ordering().size());
  auto slot_node = [&](int s) {
    auto [e, end] = g.ordering().unslot(s);
    return end == EdgeEnd::start ? mesh[e].node0 : mesh[e].node0 + mesh[e].cells;
  };
  std::vector<int> slot_of_node(n_full, -1);
  for (int s = 0; s < slots; ++s) slot_of_node[slot_node(s)] = s;

  // Stiffness with the boundary L-term of the quadratic form, lumped mass.
  std::vector<Eigen::Triplet<Cd>> kt;
  Eigen::VectorXd m_diag = Eigen::VectorXd::Zero(n_full);
  for (int e = 0; e < ne; ++e) {
    double h = mesh[e].h;
    for (int i = 0; i < mesh[e].cells; ++i) {
      int a = mesh[e].node0 + i, b = a + 1;
      kt.emplace_back(a, a, Cd(1.0 / h));
      kt.emplace_back(b, b, Cd(1.0 / h));
      kt.emplace_back(a, b, Cd(-1.0 / h));
      kt.emplace_back(b, a, Cd(-1.0 / h));
      m_diag[a] += 0.5 * h;
      m_diag[b] += 0.5 * h;
    }
  }
  for (int a = 0; a < slots; ++a)
    for (int b = 0; b < slots; ++b)
      if (c.L(a, b) != Cd(0.0)) kt.emplace_back(slot_node(a), slot_node(b), -c.L(a, b));
  Eigen::SparseMatrix<Cd> k_full(n_full, n_full);
  k_full.setFromTriplets(kt.begin(), kt.end());

  // Constraint elimination: interior nodes stay as they are, boundary values
  // are parametrized by ker P coordinates.
  Eigen::MatrixXcd basis = ker_p_basis(c);
  int r = static_cast<int>(basis.cols());
  int n_int = n_full - slots;
  int n_red = n_int + r;
  if (n_red < 1) throw std::invalid_argument("fd_one_particle: no degrees of freedom left");

  std::vector<Eigen::Triplet<Cd>> tt;
  int next_int = 0;
  for (int i = 0; i < n_full; ++i) {
    if (slot_of_node[i] < 0)
      tt.emplace_back(i, next_int++, Cd(1.0));
    else
      for (int q = 0; q < r; ++q) {
        Cd b = basis(slot_of_node[i], q);
        if (b != Cd(0.0)) tt.emplace_back(i, n_int + q, b);
      }
  }
  Eigen::SparseMatrix<Cd> t(n_full, n_red);
  t.setFromTriplets(tt.begin(), tt.end());

  Eigen::SparseMatrix<Cd> k_red = t.adjoint() * k_full * t;

  // Reduced lumped mass: diagonal on interior nodes plus an r x r block on
  // the kernel coordinates; build its inverse square root directly.
  Eigen::MatrixXcd m_block = Eigen::MatrixXcd::Zero(r, r);
  for (int s = 0; s < slots; ++s)
    m_block += m_diag[slot_node(s)] * basis.row(s).adjoint() * basis.row(s);
  Eigen::MatrixXcd block_isqrt;
  if (r > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_block);
    block_isqrt = es.eigenvectors() * es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                  es.eigenvectors().adjoint();
  }
  std::vector<Eigen::Triplet<Cd>> st;
  next_int = 0;
  for (int i = 0; i < n_full; ++i)
    if (slot_of_node[i] < 0) {
      st.emplace_back(next_int, next_int, Cd(1.0 / std::sqrt(m_diag[i])));
      ++next_int;
    }
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      if (block_isqrt(a, b) != Cd(0.0)) st.emplace_back(n_int + a, n_int + b, block_isqrt(a, b));
  Eigen::SparseMatrix<Cd> m_isqrt(n_red, n_red);
  m_isqrt.setFromTriplets(st.begin(), st.end());

  Eigen::SparseMatrix<Cd> h_std = m_isqrt * k_red * m_isqrt;
  h_std = Cd(0.5) * (Eigen::SparseMatrix<Cd>(h_std.adjoint()) + h_std);

  // Lumped P1 mass dominates the consistent mass, so the continuous lower
  // bound -s^2 also bounds the discrete eigenvalues from below.
  double lmax = largest_l_eigenvalue(c);
  double sigma = -2.0;
  if (lmax > 0.0) {
    double s = lower_bound_s(g.min_length(), lmax);
    sigma = -1.25 * s * s - 2.0;
  }

  OracleResult out;
  out.energies = lowest_eigenvalues<Cd>(h_std, sigma, n_eigenvalues);
  out.dof_count = n_red;
  out.mesh_h = h_max;
  return out;
}

// ---------------------------------------------------------------------------
// Two hardcore particles: P1 elements on right isoceles triangles.
// ---------------------------------------------------------------------------

namespace {

// Assembles stiffness / lumped mass over signed node handles: handle 0 marks
// a node eliminated by a Dirichlet condition, otherwise +-(dof + 1) refers to
// DOF `dof` entered with sign +-1.  The signs realize twisted gluings where a
// region's trace equals minus the shared line value.
struct TriAssembler {
  std::vector<Eigen::Triplet<double>> kt;
  std::vector<double> mass;
  double h;

  TriAssembler(int n_dof, double h_) : mass(n_dof, 0.0), h(h_) {}

  // vertices ordered: right-angle corner first, then the two leg ends
  void triangle(int h0, int h1, int h2) {
    const int hs[3] = {h0, h1, h2};
    static const double kloc[3][3] = {{1.0, -0.5, -0.5}, {-0.5, 0.5, 0.0}, {-0.5, 0.0, 0.5}};
    int dof[3];
    double sgn[3];
    for (int a = 0; a < 3; ++a) {
      dof[a] = std::abs(hs[a]) - 1;
      sgn[a] = hs[a] < 0 ? -1.0 : 1.0;
    }
    for (int a = 0; a < 3; ++a) {
      if (dof[a] < 0) continue;
      mass[dof[a]] += h * h / 6.0;
      for (int b = 0; b < 3; ++b)
        if (dof[b] >= 0 && kloc[a][b] != 0.0)
          kt.emplace_back(dof[a], dof[b], sgn[a] * sgn[b] * kloc[a][b]);
    }
  }

  // splits the square cell with corners v00 (lower-left), v10, v01, v11
  // along its main diagonal into two right triangles
  void square(int v00, int v10, int v01, int v11) {
    triangle(v10, v11, v00);
    triangle(v01, v00, v11);
  }

  std::vector<double> solve(int n_eig, double sigma) {
    int n = static_cast<int>(mass.size());
    Eigen::SparseMatrix<double> k(n, n);
    k.setFromTriplets(kt.begin(), kt.end());
    Eigen::VectorXd isqrt(n);
    for (int i = 0; i < n; ++i) {
      if (mass[i] <= 0.0) throw std::runtime_error("fd_oracle: dangling mesh node");
      isqrt[i] = 1.0 / std::sqrt(mass[i]);
    }
    Eigen::SparseMatrix<double> h_std = isqrt.asDiagonal() * k * isqrt.asDiagonal();
    h_std = 0.5 * (Eigen::SparseMatrix<double>(h_std.transpose()) + h_std);
    return lowest_eigenvalues<double>(h_std, sigma, n_eig);
  }
};

}  // namespace

OracleResult fd_two_particle_interval(double l, IntervalEnd outer, int n_eigenvalues, int grid_n) {
  if (!(l > 0.0)) throw std::invalid_argument("fd_two_particle_interval: length must be positive");
  if (grid_n < 8) throw std::invalid_argument("fd_two_particle_interval: grid too coarse");
  double h = l / grid_n;

  // Nodes (i, j) with 0 <= i <= j <= grid_n; the collision diagonal i == j is
  // always Dirichlet, the outer faces i == 0 / j == grid_n follow `outer`.
  bool outer_d = outer == IntervalEnd::dirichlet;
  std::vector<std::vector<int>> id(grid_n + 1, std::vector<int>(grid_n + 1, 0));
  int n_dof = 0;
  for (int i = 0; i <= grid_n; ++i)
    for (int j = i + 1; j <= grid_n; ++j)
      if (!(outer_d && (i == 0 || j == grid_n))) id[i][j] = ++n_dof;

  TriAssembler asmb(n_dof, h);
  for (int i = 0; i < grid_n; ++i) {
    // diagonal cell: upper half only, right angle at (i, i+1)
    asmb.triangle(id[i][i + 1], id[i][i], id[i + 1][i + 1]);
    for (int j = i + 1; j < grid_n; ++j)
      asmb.square(id[i][j], id[i + 1][j], id[i][j + 1], id[i + 1][j + 1]);
  }

  OracleResult out;
  out.energies = asmb.solve(n_eigenvalues, -1.0);
  out.dof_count = n_dof;
  out.mesh_h = h;
  return out;
}

OracleResult fd_two_particle_star(int n_eigenvalues, int grid_n, StarGluing gluing) {
  if (grid_n < 8) throw std::invalid_argument("fd_two_particle_star: grid too coarse");
  int n = grid_n;
  double h = 1.0 / n;

  // Shared DOF lines L_f: one particle at the centre, the other at x = j h
  // on edge f (j = 1 .. n-1; j = 0 is the double-centre collision point and
  // j = n a Dirichlet tip, both eliminated).  Handles are dof + 1.
  int n_dof = 0;
  int line[3];
  for (int f = 0; f < 3; ++f) {
    line[f] = n_dof;
    n_dof += n - 1;
  }
  auto line_id = [&](int f, int j) { return (j >= 1 && j <= n - 1) ? line[f] + j : 0; };

  // Same-edge triangles T_f: nodes (x1, x2) = (i h, j h), i < j; face i == 0
  // lies on L_f (first particle crosses the centre: plus sign), j == n is a
  // tip, i == j the collision diagonal.
  std::vector<std::vector<std::vector<int>>> tri_id(
      3, std::vector<std::vector<int>>(n + 1, std::vector<int>(n + 1, 0)));
  for (int f = 0; f < 3; ++f) {
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n - 1; ++j) tri_id[f][i][j] = ++n_dof;
    for (int j = 1; j <= n - 1; ++j) tri_id[f][0][j] = line_id(f, j);
  }

  // Edge-pair squares R_ef, e < f, ordered representative (particle on e,
  // particle on f): faces i == n and j == n are tips, the face i == 0 (first
  // particle at the centre) lies on L_f with a plus sign, the face j == 0
  // (second particle at the centre) lies on L_e -- under the Fermi-Bose
  // image the trace there equals MINUS the line value, reflecting the sign
  // matrix conjugating the vertex conditions.  (0, 0) is the double-centre
  // collision point.
  int face_sign = gluing == StarGluing::fermi_bose_image ? -1 : 1;
  const int pair_e[3] = {0, 0, 1};
  const int pair_f[3] = {1, 2, 2};
  std::vector<std::vector<std::vector<int>>> sq_id(
      3, std::vector<std::vector<int>>(n + 1, std::vector<int>(n + 1, 0)));
  for (int p = 0; p < 3; ++p) {
    for (int i = 1; i <= n - 1; ++i)
      for (int j = 1; j <= n - 1; ++j) sq_id[p][i][j] = ++n_dof;
    for (int j = 1; j <= n - 1; ++j) sq_id[p][0][j] = line_id(pair_f[p], j);
    for (int i = 1; i <= n - 1; ++i) sq_id[p][i][0] = face_sign * line_id(pair_e[p], i);
  }

  TriAssembler asmb(n_dof, h);
  for (int f = 0; f < 3; ++f) {
    auto& t = tri_id[f];
    for (int i = 0; i < n; ++i) {
      asmb.triangle(t[i][i + 1], t[i][i], t[i + 1][i + 1]);
      for (int j = i + 1; j < n; ++j)
        asmb.square(t[i][j], t[i + 1][j], t[i][j + 1], t[i + 1][j + 1]);
    }
  }
  for (int p = 0; p < 3; ++p) {
    auto& s = sq_id[p];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) asmb.square(s[i][j], s[i + 1][j], s[i][j + 1], s[i + 1][j + 1]);
  }

  OracleResult out;
  out.energies = asmb.solve(n_eigenvalues, -1.0);
  out.dof_count = n_dof;
  out.mesh_h = h;
  return out;
}

}  // namespace qgb
