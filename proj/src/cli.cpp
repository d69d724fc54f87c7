#include "qgb/cli.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qgb/io.hpp"
#include "qgb/manybody.hpp"
#include "qgb/spectrum.hpp"
#include "qgb/tdlimit.hpp"
#include "qgb/thermo.hpp"
#include "qgb/verify.hpp"
#include "qgb/vertex_conditions.hpp"

namespace qgb {

namespace {

void with_output(const std::string& path, const std::function<void(std::ostream&)>& fn) {
  if (path.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open output file \"" + path + "\"");
  fn(out);
}

// "lo:hi" or a single value; geometric grid with the default ratio 2.
std::vector<double> parse_eta_grid(const std::string& spec) {
  auto bad = [&]() -> std::vector<double> {
    throw std::invalid_argument("eta grid must be \"lo:hi\" or a single value, got \"" + spec +
                                "\"");
  };
  auto to_double = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      bad();
    }
    if (used != s.size()) bad();
    return v;
  };
  auto colon = spec.find(':');
  if (colon == std::string::npos) {
    double v = to_double(spec);
    return eta_grid_geometric(v, v);
  }
  double lo = to_double(spec.substr(0, colon));
  double hi = to_double(spec.substr(colon + 1));
  return eta_grid_geometric(lo, hi);
}

const std::map<std::string, Statistics> kStatNames = {
    {"boson", Statistics::boson},
    {"fermion", Statistics::fermion},
    {"hardcore", Statistics::hardcore_boson}};

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"qgb: spectra and BEC thermodynamics of Laplacians on metric graphs"};
  app.require_subcommand(1);
  int exit_code = 0;

  int threads = 0;
  app.add_option("--threads", threads, "cap on solver threads (QGB_THREADS mirrors this)")
      ->check(CLI::PositiveNumber);
  auto apply_threads = [&] {
    if (threads > 0) set_max_threads(threads);
  };

  // --- spectrum -------------------------------------------------------
  struct {
    std::string input, output;
    std::vector<double> window{0.0, 100.0};
    double tol = 1e-10;
    double refine = 1.0;
    bool json = false;
  } sp;
  CLI::App* spectrum = app.add_subcommand("spectrum", "eigenvalues in a window");
  spectrum->add_option("-i,--input", sp.input, "graph JSON file")->required();
  spectrum->add_option("--window", sp.window, "energy window lo hi")->expected(2);
  spectrum->add_option("--tol", sp.tol, "solver tolerance")->check(CLI::PositiveNumber);
  spectrum->add_option("--refine", sp.refine, "scan refinement factor")
      ->check(CLI::PositiveNumber);
  spectrum->add_option("-o,--output", sp.output, "output file (default stdout)");
  spectrum->add_flag("--json", sp.json, "emit JSON instead of CSV");
  spectrum->callback([&] {
    apply_threads();
    if (!(sp.window[0] < sp.window[1]))
      throw std::invalid_argument("degenerate window: need lo < hi, got [" +
                                  format_float(sp.window[0]) + ", " + format_float(sp.window[1]) +
                                  "]");
    GraphBundle b = load_graph_file(sp.input);
    SolverOptions opts;
    opts.tol = sp.tol;
    opts.scan_refine = sp.refine;
    Spectrum s = eigenvalues_in(b.graph, b.conditions, sp.window[0], sp.window[1], opts);
    with_output(sp.output, [&](std::ostream& os) {
      if (sp.json)
        write_spectrum_json(os, s);
      else
        write_spectrum_csv(os, s);
    });
  });

  // --- thermo ---------------------------------------------------------
  struct {
    double beta = 0.0, mu = 0.0, rho = 0.0, lmax = 0.0;
    bool fraction = false;
    std::string output;
  } th;
  CLI::App* thermo = app.add_subcommand("thermo", "closed-form TL thermodynamics");
  thermo->add_option("--beta", th.beta, "inverse temperature")
      ->required()
      ->check(CLI::PositiveNumber);
  CLI::Option* th_mu = thermo->add_option("--mu", th.mu, "chemical potential");
  CLI::Option* th_rho =
      thermo->add_option("--rho", th.rho, "target density rho0")->check(CLI::PositiveNumber);
  th_mu->excludes(th_rho);
  th_rho->excludes(th_mu);
  thermo->add_option("--lmax", th.lmax, "largest eigenvalue of L");
  thermo->add_flag("--fraction", th.fraction, "require the condensate fraction");
  thermo->add_option("-o,--output", th.output, "output file (default stdout)");
  thermo->callback([&] {
    if (!*th_mu && !*th_rho) throw std::invalid_argument("one of --mu / --rho is required");
    if (*th_mu) {
      double rp = rho_plus(th.beta, th.mu, th.lmax);
      with_output(th.output, [&](std::ostream& os) {
        os << "# qgb thermo\n";
        os << "beta,mu,lmax,rho_plus\n";
        os << format_float(th.beta) << "," << format_float(th.mu) << "," << format_float(th.lmax)
           << "," << format_float(rp) << "\n";
      });
      return;
    }
    double bc = critical_beta(th.rho, th.lmax);
    double frac = 0.0;
    if (th.beta >= bc)
      frac = condensate_fraction(th.beta, bc, th.lmax);
    else if (th.fraction)
      throw std::invalid_argument("beta < beta_c: no condensate at this temperature (beta_c = " +
                                  format_float(bc) + ")");
    DensityInversion inv = invert_density_limit(th.beta, th.rho, th.lmax);
    with_output(th.output, [&](std::ostream& os) {
      os << "# qgb thermo\n";
      os << "beta,rho0,lmax,beta_c,mu,condensed,fraction\n";
      os << format_float(th.beta) << "," << format_float(th.rho) << "," << format_float(th.lmax)
         << "," << format_float(bc) << "," << format_float(inv.mu) << ","
         << (inv.condensed ? 1 : 0) << "," << format_float(frac) << "\n";
    });
  });

  // --- scan -----------------------------------------------------------
  struct {
    std::string input, output, eta = "1:1024";
    Statistics stats = Statistics::fermion;
    double beta = 1.0, mu = -1.0, tol = 1e-10;
  } sc;
  CLI::App* scan = app.add_subcommand("scan", "thermodynamic-limit sweeps");
  scan->require_subcommand(1);
  auto add_scan_common = [&](CLI::App* cmd, bool thermal) {
    cmd->add_option("-i,--input", sc.input, "graph JSON file")->required();
    cmd->add_option("--eta", sc.eta, "geometric eta grid \"lo:hi\" (default 1:1024)");
    cmd->add_option("--tol", sc.tol, "solver tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("-o,--output", sc.output, "output file (default stdout)");
    if (thermal) {
      cmd->add_option("--beta", sc.beta, "inverse temperature")
          ->required()
          ->check(CLI::PositiveNumber);
      cmd->add_option("--mu", sc.mu, "chemical potential")->required();
    }
  };
  auto run_scan = [&](const std::function<TLScan(const GraphBundle&, const std::vector<double>&,
                                                 const SolverOptions&)>& make) {
    apply_threads();
    GraphBundle b = load_graph_file(sc.input);
    std::vector<double> grid = parse_eta_grid(sc.eta);
    SolverOptions opts;
    opts.tol = sc.tol;
    TLScan s = make(b, grid, opts);
    with_output(sc.output, [&](std::ostream& os) { write_scan_csv(os, s); });
  };
  CLI::App* sc_ground = scan->add_subcommand("ground-state", "E0(eta) vs -L_max^2 with sandwich");
  add_scan_common(sc_ground, false);
  sc_ground->callback([&] {
    run_scan([](const GraphBundle& b, const std::vector<double>& grid, const SolverOptions& o) {
      return scan_ground_state(b.graph, b.conditions, grid, o);
    });
  });
  CLI::App* sc_counts = scan->add_subcommand("counts", "negative-eigenvalue count identity");
  add_scan_common(sc_counts, false);
  sc_counts->callback([&] {
    run_scan([](const GraphBundle& b, const std::vector<double>& grid, const SolverOptions& o) {
      return scan_negative_count(b.graph, b.conditions, grid, o);
    });
  });
  CLI::App* sc_density = scan->add_subcommand("density", "boson density vs rho_plus");
  add_scan_common(sc_density, true);
  sc_density->callback([&] {
    run_scan([&](const GraphBundle& b, const std::vector<double>& grid, const SolverOptions& o) {
      return scan_density_convergence(b.graph, b.conditions, sc.beta, sc.mu, grid, o);
    });
  });
  CLI::App* sc_free = scan->add_subcommand("free-energy", "free-energy density vs closed form");
  add_scan_common(sc_free, true);
  sc_free->add_option("--stats", sc.stats, "boson | fermion | hardcore")
      ->transform(CLI::CheckedTransformer(kStatNames, CLI::ignore_case))
      ->required();
  sc_free->callback([&] {
    run_scan([&](const GraphBundle& b, const std::vector<double>& grid, const SolverOptions& o) {
      return scan_free_energy(b.graph, b.conditions, sc.beta, sc.mu, grid, sc.stats, o);
    });
  });

  // --- manybody -------------------------------------------------------
  struct {
    std::string input, output;
    Statistics stats = Statistics::fermion;
    int n = 1;
    double ceiling = 30.0;
    std::vector<double> window{-10.0, 100.0};
    double tol = 1e-10;
  } mb;
  CLI::App* manybody = app.add_subcommand("manybody", "N-particle spectrum under a statistics");
  manybody->add_option("-i,--input", mb.input, "graph JSON file")->required();
  manybody->add_option("-N,--particles", mb.n, "particle number")->required();
  manybody->add_option("--stats", mb.stats, "boson | fermion | hardcore")
      ->transform(CLI::CheckedTransformer(kStatNames, CLI::ignore_case));
  manybody->add_option("--ceiling", mb.ceiling, "report all N-body levels up to this energy");
  manybody->add_option("--window", mb.window, "one-particle window lo hi")->expected(2);
  manybody->add_option("--tol", mb.tol, "solver tolerance")->check(CLI::PositiveNumber);
  manybody->add_option("-o,--output", mb.output, "output file (default stdout)");
  manybody->callback([&] {
    apply_threads();
    if (mb.n < 1)
      throw std::invalid_argument("N must be >= 1, got " + std::to_string(mb.n));
    if (!(mb.window[0] < mb.window[1]))
      throw std::invalid_argument("degenerate window: need lo < hi");
    GraphBundle b = load_graph_file(mb.input);
    SolverOptions opts;
    opts.tol = mb.tol;
    Spectrum one = eigenvalues_in(b.graph, b.conditions, mb.window[0], mb.window[1], opts);
    ManyBodySpectrum m = mb.stats == Statistics::hardcore_boson
                             ? hardcore_spectrum(one, mb.n, mb.ceiling)
                             : free_spectrum(one, mb.n, mb.stats, mb.ceiling);
    with_output(mb.output, [&](std::ostream& os) {
      os << "# qgb manybody N " << m.n_particles << " statistics "
         << statistics_name(m.statistics) << "\n";
      os << "# graph " << one.graph_fingerprint << " conditions " << one.conditions_fingerprint
         << "\n";
      os << "# complete_below " << format_float(m.complete_below) << "\n";
      os << "index,energy,multiplicity\n";
      int idx = 0;
      for (const auto& lv : m.energies)
        os << idx++ << "," << format_float(lv.energy) << "," << lv.multiplicity << "\n";
    });
  });

  // --- verify ---------------------------------------------------------
  struct {
    bool all = false;
    std::string output;
  } vf;
  CLI::App* verify = app.add_subcommand("verify", "oracle cross-check battery");
  verify->add_flag("--all", vf.all, "run the full battery (the default)");
  verify->add_option("-o,--output", vf.output, "output file (default stdout)");
  verify->callback([&] {
    apply_threads();
    VerifyReport rep = run_verification();
    with_output(vf.output, [&](std::ostream& os) { write_verify_csv(os, rep); });
    if (!rep.all_pass()) {
      int failed = 0;
      for (const auto& c : rep.checks)
        if (!c.pass) ++failed;
      std::cerr << "error: verify: " << failed << " of " << rep.checks.size()
                << " checks failed\n";
      exit_code = 1;
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: input: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: input: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: solver: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}

}  // namespace qgb
