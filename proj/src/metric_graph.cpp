#include "qgb/metric_graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "qgb/numerics.hpp"

namespace qgb {

MetricGraph::MetricGraph(std::vector<Edge> edges)
    : edges_(std::move(edges)), ordering_(edges_.empty() ? 1 : static_cast<int>(edges_.size())) {
  if (edges_.empty()) throw std::invalid_argument("MetricGraph: needs at least one edge");
  std::set<int> ids;
  std::set<std::string> verts;
  for (const Edge& e : edges_) {
    if (!(e.length > 0.0) || !std::isfinite(e.length))
      throw std::invalid_argument("MetricGraph: edge length must be finite and > 0 (edge id " +
                                  std::to_string(e.id) + ")");
    if (!ids.insert(e.id).second)
      throw std::invalid_argument("MetricGraph: duplicate edge id " + std::to_string(e.id));
    if (e.from.empty() || e.to.empty())
      throw std::invalid_argument("MetricGraph: edge endpoints must be named (edge id " +
                                  std::to_string(e.id) + ")");
    verts.insert(e.from);
    verts.insert(e.to);
  }
  vertices_.assign(verts.begin(), verts.end());
}

double MetricGraph::total_length() const {
  std::vector<double> ls(edges_.size());
  for (size_t i = 0; i < edges_.size(); ++i) ls[i] = edges_[i].length;
  return num::pairwise_sum(ls);
}

double MetricGraph::min_length() const {
  double m = edges_.front().length;
  for (const Edge& e : edges_) m = std::min(m, e.length);
  return m;
}

double MetricGraph::max_length() const {
  double m = edges_.front().length;
  for (const Edge& e : edges_) m = std::max(m, e.length);
  return m;
}

std::vector<int> MetricGraph::vertex_slots(const std::string& vertex) const {
  std::vector<int> slots;
  for (int e = 0; e < edge_count(); ++e) {
    if (edges_[e].from == vertex) slots.push_back(ordering_.slot(e, EdgeEnd::start));
    if (edges_[e].to == vertex) slots.push_back(ordering_.slot(e, EdgeEnd::finish));
  }
  if (slots.empty()) throw std::invalid_argument("MetricGraph: unknown vertex '" + vertex + "'");
  return slots;
}

int MetricGraph::vertex_degree(const std::string& vertex) const {
  return static_cast<int>(vertex_slots(vertex).size());
}

std::string MetricGraph::fingerprint() const {
  std::string bytes;
  char buf[64];
  for (const Edge& e : edges_) {
    std::snprintf(buf, sizeof buf, "%d|%.17g|", e.id, e.length);
    bytes += buf;
    bytes += e.from;
    bytes += '>';
    bytes += e.to;
    bytes += ';';
  }
  return hex64(fnv1a64(bytes));
}

MetricGraph scale(const MetricGraph& g, double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta))
    throw std::invalid_argument("scale: eta must be finite and > 0");
  std::vector<Edge> es = g.edges();
  for (Edge& e : es) e.length *= eta;
  return MetricGraph(std::move(es));
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return std::string(buf);
}

}  // namespace qgb
