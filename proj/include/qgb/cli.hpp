#pragma once

// Batch front end.  Subcommands: spectrum | thermo | scan {ground-state |
// counts | density | free-energy} | manybody | verify.  Input is the graph
// JSON schema of io.hpp; outputs are deterministic CSV (JSON mirror for
// spectra) on stdout or -o.  Exit codes: 0 success, 1 input error (including
// a failed verify battery), 2 solver failure; every failure prints a single
// "error: <class>: ..." line on stderr.  --threads caps global parallelism
// and mirrors the QGB_THREADS environment variable.

namespace qgb {

int run_cli(int argc, const char* const* argv);

}  // namespace qgb
