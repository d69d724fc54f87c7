#include "qgb/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace qgb {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument("graph file: " + msg); }

// Strict object access: every key must be consumed, leftovers are errors.
void check_no_extra_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) ok = true;
    if (!ok) fail("unknown key \"" + key + "\" in " + where);
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) fail("missing key \"" + std::string(key) + "\" in " + where);
  return *it;
}

double number_at(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where + " must be a number");
  return v.get<double>();
}

std::complex<double> complex_at(const json& v, const std::string& where) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  fail(where + " must be a number or an [re, im] pair");
}

Eigen::MatrixXcd matrix_at(const json& v, int n, const std::string& name) {
  if (!v.is_array() || static_cast<int>(v.size()) != n)
    fail("\"" + name + "\" must be a " + std::to_string(n) + " x " + std::to_string(n) +
         " matrix (rows match the 2E boundary slots)");
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i) {
    const json& row = v[i];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      fail("\"" + name + "\" row " + std::to_string(i) + " must have " + std::to_string(n) +
           " entries");
    for (int j = 0; j < n; ++j)
      m(i, j) = complex_at(row[j], "\"" + name + "\"[" + std::to_string(i) + "][" +
                                       std::to_string(j) + "]");
  }
  return m;
}

VertexConditions conditions_from_json(const json& c, const MetricGraph& g, std::string& kind_out) {
  if (!c.is_object()) fail("\"conditions\" must be an object");
  if (c.contains("P") || c.contains("L")) {
    check_no_extra_keys(c, {"P", "L"}, "\"conditions\"");
    int n = g.ordering().size();
    VertexConditions vc;
    vc.P = matrix_at(require(c, "P", "\"conditions\""), n, "P");
    vc.L = matrix_at(require(c, "L", "\"conditions\""), n, "L");
    validate_conditions(vc);
    kind_out = "matrix";
    return vc;
  }
  check_no_extra_keys(c, {"kind", "params"}, "\"conditions\"");
  const json& kind_v = require(c, "kind", "\"conditions\"");
  if (!kind_v.is_string()) fail("\"kind\" must be a string");
  std::string kind = kind_v.get<std::string>();
  json params = c.contains("params") ? c.at("params") : json::object();
  if (!params.is_object()) fail("\"params\" must be an object");

  kind_out = kind;
  if (kind == "dirichlet" || kind == "neumann" || kind == "kirchhoff") {
    check_no_extra_keys(params, {}, "\"params\" of kind \"" + kind + "\"");
    if (kind == "dirichlet") return dirichlet_conditions(g);
    if (kind == "neumann") return neumann_conditions(g);
    return kirchhoff_conditions(g);
  }
  if (kind == "robin") {
    check_no_extra_keys(params, {"c"}, "\"params\" of kind \"robin\"");
    return robin_conditions(g, number_at(require(params, "c", "\"params\""), "\"c\""));
  }
  if (kind == "delta") {
    check_no_extra_keys(params, {"alpha"}, "\"params\" of kind \"delta\"");
    return delta_conditions(g, number_at(require(params, "alpha", "\"params\""), "\"alpha\""));
  }
  fail("unknown conditions kind \"" + kind + "\"");
}

// CSV fields with commas or quotes are quoted, quotes doubled.
std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

json json_number(double v) {
  // nlohmann serializes non-finite doubles as null; make that explicit so
  // the mirror stays valid JSON with NaN summaries.
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

std::string format_float(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

GraphBundle parse_graph_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("top level must be an object");
  check_no_extra_keys(doc, {"edges", "conditions"}, "the top level");

  const json& edges_v = require(doc, "edges", "the top level");
  if (!edges_v.is_array() || edges_v.empty()) fail("\"edges\" must be a non-empty array");
  std::vector<Edge> edges;
  edges.reserve(edges_v.size());
  for (std::size_t i = 0; i < edges_v.size(); ++i) {
    const json& e = edges_v[i];
    std::string where = "edge " + std::to_string(i);
    if (!e.is_object()) fail(where + " must be an object");
    check_no_extra_keys(e, {"id", "length", "from", "to"}, where);
    const json& id = require(e, "id", where);
    if (!id.is_number_integer()) fail("\"id\" of " + where + " must be an integer");
    double length = number_at(require(e, "length", where), "\"length\" of " + where);
    const json& from = require(e, "from", where);
    const json& to = require(e, "to", where);
    if (!from.is_string() || !to.is_string())
      fail("\"from\"/\"to\" of " + where + " must be strings");
    edges.push_back(
        {id.get<int>(), length, from.get<std::string>(), to.get<std::string>()});
  }

  // MetricGraph validates lengths/ids; rewrap its complaints as input errors.
  std::vector<Edge> copy = edges;
  MetricGraph graph(std::move(copy));

  std::string kind;
  VertexConditions vc = conditions_from_json(require(doc, "conditions", "the top level"), graph, kind);
  return GraphBundle{std::move(graph), std::move(vc), std::move(kind)};
}

GraphBundle load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("graph file: cannot open \"" + path + "\"");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_graph_json(text.str());
}

void write_spectrum_csv(std::ostream& os, const Spectrum& s) {
  os << "# qgb spectrum\n";
  os << "# graph " << s.graph_fingerprint << " conditions " << s.conditions_fingerprint << "\n";
  os << "# window " << format_float(s.window_lo) << " " << format_float(s.window_hi) << " tol "
     << format_float(s.tol) << "\n";
  os << "# total_length " << format_float(s.total_length) << " edges " << s.edge_count << "\n";
  for (const auto& d : s.diagnostics) os << "# note " << d << "\n";
  os << "index,energy,multiplicity\n";
  int idx = 0;
  for (const auto& lv : s.levels)
    os << idx++ << "," << format_float(lv.energy) << "," << lv.multiplicity << "\n";
}

void write_spectrum_json(std::ostream& os, const Spectrum& s) {
  json doc;
  doc["window"] = {json_number(s.window_lo), json_number(s.window_hi)};
  doc["tol"] = s.tol;
  doc["total_length"] = s.total_length;
  doc["edge_count"] = s.edge_count;
  doc["graph_fingerprint"] = s.graph_fingerprint;
  doc["conditions_fingerprint"] = s.conditions_fingerprint;
  doc["diagnostics"] = s.diagnostics;
  json levels = json::array();
  for (const auto& lv : s.levels)
    levels.push_back({{"energy", lv.energy}, {"multiplicity", lv.multiplicity}});
  doc["levels"] = std::move(levels);
  os << doc.dump(2) << "\n";
}

void write_scan_csv(std::ostream& os, const TLScan& s) {
  os << "# qgb scan " << s.kind << "\n";
  os << "# graph " << s.graph_fingerprint << " conditions " << s.conditions_fingerprint << "\n";
  os << "# gapped " << (s.gapped ? 1 : 0);
  if (std::isfinite(s.beta)) os << " beta " << format_float(s.beta);
  if (std::isfinite(s.mu)) os << " mu " << format_float(s.mu);
  if (!s.statistics.empty()) os << " statistics " << s.statistics;
  os << "\n";
  if (std::isfinite(s.target_e0)) os << "# target_e0 " << format_float(s.target_e0) << "\n";
  if (s.target_count >= 0) os << "# target_count " << s.target_count << "\n";
  if (std::isfinite(s.target_density))
    os << "# target_density " << format_float(s.target_density) << "\n";
  if (std::isfinite(s.target_free_energy))
    os << "# target_free_energy " << format_float(s.target_free_energy) << "\n";
  os << "# final_error " << format_float(s.final_error) << " empirical_rate "
     << format_float(s.empirical_rate) << " extrapolated " << format_float(s.extrapolated)
     << "\n";
  if (s.kind == "negative_count")
    os << "# count_identity_holds " << (s.count_identity_holds ? 1 : 0) << " count_stabilized "
       << (s.count_stabilized ? 1 : 0) << "\n";
  for (const auto& d : s.diagnostics) os << "# note " << d << "\n";

  auto row_tail = [&](const TLRecord& r) { os << "," << csv_escape(r.note) << "\n"; };
  if (s.kind == "ground_state") {
    os << "eta,ok,e0,lower_bound,upper_bound,sandwich_ok,note\n";
    for (const auto& r : s.records) {
      os << format_float(r.eta) << "," << (r.ok ? 1 : 0) << "," << format_float(r.e0) << ","
         << format_float(r.lower_bound) << "," << format_float(r.upper_bound) << ","
         << (r.sandwich_ok ? 1 : 0);
      row_tail(r);
    }
  } else if (s.kind == "negative_count") {
    os << "eta,ok,n_minus,n_plus_predicted,note\n";
    for (const auto& r : s.records) {
      os << format_float(r.eta) << "," << (r.ok ? 1 : 0) << "," << r.n_minus << ","
         << r.n_plus_predicted;
      row_tail(r);
    }
  } else if (s.kind == "density") {
    os << "eta,ok,density,density_dirichlet,density_neumann,note\n";
    for (const auto& r : s.records) {
      os << format_float(r.eta) << "," << (r.ok ? 1 : 0) << "," << format_float(r.density) << ","
         << format_float(r.density_dirichlet) << "," << format_float(r.density_neumann);
      row_tail(r);
    }
  } else if (s.kind == "free_energy") {
    os << "eta,ok,free_energy,note\n";
    for (const auto& r : s.records) {
      os << format_float(r.eta) << "," << (r.ok ? 1 : 0) << "," << format_float(r.free_energy);
      row_tail(r);
    }
  } else {
    throw std::invalid_argument("write_scan_csv: unknown scan kind \"" + s.kind + "\"");
  }
}

}  // namespace qgb
