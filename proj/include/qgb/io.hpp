#pragma once

// Graph-description input and table output.  The description file is JSON:
//   {
//     "edges": [{"id": 0, "length": 1.0, "from": "a", "to": "b"}, ...],
//     "conditions": {"kind": "robin", "params": {"c": 1.0}}
//                 | {"P": [[...]], "L": [[...]]}
//   }
// Named kinds: dirichlet | neumann | kirchhoff | robin {c} | delta {alpha}.
// Explicit matrices are 2E x 2E with entries either plain numbers or
// [re, im] pairs, in the boundary-slot ordering of BoundaryOrdering, and are
// validated as admissible (P an orthogonal projector, L Hermitian with
// L = QLQ).  Unknown keys anywhere are rejected by name.
//
// Writers emit deterministic tables: floats at 17 significant digits, one
// metadata block of '#'-prefixed lines, then a header row and data rows.

#include <iosfwd>
#include <string>

#include "qgb/metric_graph.hpp"
#include "qgb/spectrum.hpp"
#include "qgb/tdlimit.hpp"
#include "qgb/vertex_conditions.hpp"

namespace qgb {

struct GraphBundle {
  MetricGraph graph;
  VertexConditions conditions;
  std::string conditions_kind;  // named kind, or "matrix"
};

// Parse a description from JSON text / load one from a file.  Throws
// std::invalid_argument naming the offending key or value on any schema
// violation; file errors mention the path.
GraphBundle parse_graph_json(const std::string& text);
GraphBundle load_graph_file(const std::string& path);

// Fixed-format float: %.17g, the shortest representation that round-trips.
std::string format_float(double v);

// Spectrum tables: CSV columns (index, energy, multiplicity) plus '#'
// metadata (window, tolerance, fingerprints, diagnostics); the JSON mirror
// carries the same fields structurally.
void write_spectrum_csv(std::ostream& os, const Spectrum& s);
void write_spectrum_json(std::ostream& os, const Spectrum& s);

// Thermodynamic-limit scan table: per-kind data columns, one row per eta,
// with targets and summaries in the metadata block.
void write_scan_csv(std::ostream& os, const TLScan& s);

}  // namespace qgb
