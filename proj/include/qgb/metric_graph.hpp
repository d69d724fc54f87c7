#pragma once

// Compact metric graphs: a finite set of edges, each an interval [0, l_e],
// glued at named vertices.  Spectral data depends on the edge lengths and on
// the vertex conditions (P, L); the vertex incidence enters only through
// builders of standard conditions (Kirchhoff etc.).

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qgb {

struct Edge {
  int id = 0;            // external label (unique, otherwise free)
  double length = 0.0;   // > 0, finite
  std::string from;      // vertex at x = 0
  std::string to;        // vertex at x = length
};

// Which end of an edge a boundary slot refers to.
enum class EdgeEnd : int { start = 0, finish = 1 };

// Fixed ordering of the 2E boundary slots of a graph with E edges:
// slot e       <-> (edge e, x = 0)        for e = 0..E-1
// slot E + e   <-> (edge e, x = l_e)      for e = 0..E-1
// Boundary value vectors F_bv, derivative vectors F'_bv and the matrices
// P, L, M(E) all use this ordering.  Derivatives are taken pointing into
// the edge: f'(0) at the start, -f'(l) at the finish.
class BoundaryOrdering {
 public:
  explicit BoundaryOrdering(int edge_count) : edges_(edge_count) {
    if (edge_count <= 0) throw std::invalid_argument("BoundaryOrdering: graph needs at least one edge");
  }
  int edges() const { return edges_; }
  int size() const { return 2 * edges_; }
  int slot(int edge, EdgeEnd end) const {
    check_edge(edge);
    return end == EdgeEnd::start ? edge : edges_ + edge;
  }
  std::pair<int, EdgeEnd> unslot(int s) const {
    if (s < 0 || s >= size()) throw std::invalid_argument("BoundaryOrdering: slot out of range");
    return s < edges_ ? std::pair{s, EdgeEnd::start} : std::pair{s - edges_, EdgeEnd::finish};
  }

 private:
  void check_edge(int e) const {
    if (e < 0 || e >= edges_) throw std::invalid_argument("BoundaryOrdering: edge index out of range");
  }
  int edges_;
};

class MetricGraph {
 public:
  explicit MetricGraph(std::vector<Edge> edges);

  int edge_count() const { return static_cast<int>(edges_.size()); }
  const Edge& edge(int e) const { return edges_.at(e); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::string>& vertices() const { return vertices_; }
  const BoundaryOrdering& ordering() const { return ordering_; }

  double total_length() const;   // sum of edge lengths (pairwise summation)
  double min_length() const;
  double max_length() const;

  // Boundary slots incident to a named vertex (a loop contributes both ends).
  std::vector<int> vertex_slots(const std::string& vertex) const;
  int vertex_degree(const std::string& vertex) const;

  // Short stable content hash (edge labels, lengths, incidence).
  std::string fingerprint() const;

 private:
  std::vector<Edge> edges_;
  std::vector<std::string> vertices_;  // sorted unique vertex names
  BoundaryOrdering ordering_;
};

// Homothety: every edge length multiplied by eta > 0.  Vertex structure,
// labels and orderings are preserved.
MetricGraph scale(const MetricGraph& g, double eta);

// FNV-1a of a byte string; used for graph/condition fingerprints.
std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t v);

}  // namespace qgb
