#include "dqprep/certificate.hpp"
#include "dqprep/ddmin.hpp"
#include "dqprep/dqdimacs.hpp"
#include "dqprep/fuzzer.hpp"
#include "dqprep/reduce.hpp"
#include "dqprep/symmetry.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace dqprep;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Formula load(const std::string& path, bool lenient = false) {
  Formula f = parse_dqdimacs(slurp(path), ParseOptions{lenient});
  f.source_name = path;
  return f;
}

void emit(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

AutarkySystemConfig systems_config(const std::string& systems) {
  AutarkySystemConfig cfg;
  cfg.enable_e1 = false;
  cfg.a_k.reset();
  cfg.e_k = 1;
  for (const auto& s : split(systems, ',')) {
    if (s == "e1") {
      cfg.enable_e1 = true;
    } else if (s == "a0" || s == "a1" || s == "a2") {
      cfg.a_k = std::max(cfg.a_k.value_or(0), s[1] - '0');
    } else if (s == "e2") {
      cfg.e_k = 2;
    } else {
      throw UsageError("unknown autarky system '" + s + "'");
    }
  }
  return cfg;
}

std::string sat_cmd_default() {
  const char* env = std::getenv("DQPREP_SAT_CMD");
  return env ? env : "";
}

// Plain DIMACS CNF, for the `sat` subcommand.
CnfInstance parse_cnf(const std::string& text) {
  CnfInstance inst;
  std::istringstream is(text);
  std::vector<int> clause;
  for (std::string line; std::getline(is, line);) {
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first) || first == "c") continue;
    if (first == "p") {
      std::string fmt;
      long n = 0;
      ls >> fmt >> n;
      inst.n_vars = static_cast<std::uint32_t>(std::max(0L, n));
      continue;
    }
    ls.clear();
    ls.str(line);
    for (long v; ls >> v;) {
      if (v == 0) {
        inst.add(std::move(clause));
        clause.clear();
      } else {
        inst.n_vars = std::max<std::uint32_t>(inst.n_vars, static_cast<std::uint32_t>(std::labs(v)));
        clause.push_back(static_cast<int>(v));
      }
    }
  }
  if (!clause.empty()) inst.add(std::move(clause));
  return inst;
}

struct Params {
  std::uint32_t na = 3, ne = 2, k = 2;
  double p = 0.5;
  std::size_t m = 5;
  std::uint64_t seed = 1;
  bool occ = false;

  void add(CLI::App* app) {
    app->add_option("--na", na, "universal variables");
    app->add_option("--ne", ne, "existential variables");
    app->add_option("-p,--dep-prob", p, "dependency probability");
    app->add_option("-m,--clauses", m, "clauses");
    app->add_option("-k,--width", k, "clause width");
    app->add_option("--seed", seed, "base seed");
    app->add_flag("--require-occurrence", occ, "every existential occurs in some clause");
  }
  RandomModelParams get() const { return {na, ne, p, m, k, seed, occ}; }
};

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"DQBF preprocessing toolkit"};
  app.require_subcommand(1);
  int verbose = 0;
  app.add_flag("-v,--verbose", verbose, "more diagnostics on stderr");

  // validate
  std::string input = "-";
  bool lenient = false;
  auto* validate_cmd = app.add_subcommand("validate", "parse and check a DQDIMACS file (0 valid, 1 invalid)");
  validate_cmd->add_option("input", input, "file or -");
  validate_cmd->add_flag("--lenient", lenient, "bind free variables universally");

  // reduce
  std::string output = "-";
  std::string systems = "e1,a0,a1";
  std::string cert_path;
  bool stats = false;
  bool sym_compile = false;
  std::string sat_cmd = sat_cmd_default();
  std::optional<std::uint64_t> shuffle;
  auto* reduce_cmd = app.add_subcommand("reduce", "autarky reduction to the lean kernel");
  reduce_cmd->add_option("input", input, "file or -");
  reduce_cmd->add_option("-o,--out", output, "kernel output");
  reduce_cmd->add_option("-s,--systems", systems, "comma list of e1,a0,a1,a2,e2");
  reduce_cmd->add_option("--emit-cert", cert_path, "write a reduction certificate");
  reduce_cmd->add_flag("--stats", stats, "print per-system tallies to stderr");
  reduce_cmd->add_flag("--symmetry-compilation", sym_compile, "share clause witnesses across symmetric clauses");
  reduce_cmd->add_option("--sat-cmd", sat_cmd, "external SAT solver command (default $DQPREP_SAT_CMD)");
  reduce_cmd->add_option("--shuffle", shuffle, "randomize detector and variable order");

  // check-cert
  std::string orig_path, kernel_path, cert_in;
  auto* check_cmd = app.add_subcommand("check-cert", "replay a reduction certificate (0 valid, 1 invalid)");
  check_cmd->add_option("original", orig_path)->required();
  check_cmd->add_option("kernel", kernel_path)->required();
  check_cmd->add_option("certificate", cert_in)->required();

  // symmetry
  bool detect = false, do_break = false;
  std::string mode = "conservative";
  std::size_t node_budget = 100000;
  auto* sym_cmd = app.add_subcommand("symmetry", "detect or break syntactic symmetries");
  sym_cmd->add_option("input", input, "file or -");
  auto* detect_flag = sym_cmd->add_flag("--detect", detect, "print generators");
  auto* break_flag = sym_cmd->add_flag("--break", do_break, "append lex-leader clauses");
  detect_flag->excludes(break_flag);
  sym_cmd->add_option("--mode", mode, "conservative|relaxed")->check(CLI::IsMember({"conservative", "relaxed"}));
  sym_cmd->add_option("--nodes", node_budget, "search node budget");
  sym_cmd->add_option("-o,--out", output, "output");

  // solve
  OracleBudget budget;
  auto* solve_cmd = app.add_subcommand("solve", "brute-force solve (10 SAT, 20 UNSAT, 30 budget exceeded)");
  solve_cmd->add_option("input", input, "file or -");
  solve_cmd->add_option("--max-candidates", budget.max_skolem_candidates, "Skolem candidate bound");
  solve_cmd->add_option("--max-assignments", budget.max_universal_assignments, "universal assignment bound");
  solve_cmd->add_option("--max-seconds", budget.max_seconds, "time bound");

  // sat
  auto* sat_cmd_app = app.add_subcommand("sat", "solve a DIMACS CNF with the built-in solver (10/20)");
  sat_cmd_app->add_option("input", input, "file or -");

  // fuzz
  Params fp;
  std::size_t count = 1;
  std::string out_dir, target;
  bool oracle_check = false;
  double timeout = 10;
  auto* fuzz_cmd = app.add_subcommand("fuzz", "generate random instances or run a fuzz campaign");
  fp.add(fuzz_cmd);
  fuzz_cmd->add_option("-n,--count", count, "instances");
  fuzz_cmd->add_option("--out-dir", out_dir, "directory for instances or saved failures");
  fuzz_cmd->add_option("--target", target, "solver command; {file} is the instance path");
  fuzz_cmd->add_flag("--oracle-check", oracle_check, "compare answers with the brute-force oracle");
  fuzz_cmd->add_option("--timeout", timeout, "per-run timeout in seconds");

  // sweep
  Params sp;
  std::string ratios = "0,1,2,3,4,5,6,7,8";
  std::size_t samples = 50;
  auto* sweep_cmd = app.add_subcommand("sweep", "empirical SAT fraction against clause/variable ratio");
  sp.add(sweep_cmd);
  sweep_cmd->add_option("--ratios", ratios, "comma list");
  sweep_cmd->add_option("--samples", samples, "instances per ratio");

  // ddmin
  InterestingnessSpec spec;
  std::string exit_codes, dd_mode = "pipeline";
  std::optional<int> signal;
  std::string grep;
  auto* dd_cmd = app.add_subcommand("ddmin", "shrink an instance while the target stays interesting");
  dd_cmd->add_option("input", input, "file or -");
  dd_cmd->add_option("--cmd", spec.cmd, "target command; {file} is the candidate path")->required();
  dd_cmd->add_option("--interesting-exit", exit_codes, "comma list of exit codes");
  dd_cmd->add_option("--interesting-signal", signal, "terminating signal (0 = any)")->expected(0, 1);
  dd_cmd->add_option("--grep", grep, "substring of stdout");
  dd_cmd->add_flag("--oracle-mismatch", spec.oracle_mismatch, "answer disagrees with the oracle");
  dd_cmd->add_flag("--timeouts", spec.timeouts, "a timeout is interesting");
  dd_cmd->add_option("--run-timeout", spec.per_run_timeout, "seconds per target run");
  dd_cmd->add_option("--budget", spec.total_budget, "total seconds");
  dd_cmd->add_option("--mode", dd_mode, "pipeline|clauses|structure")
      ->check(CLI::IsMember({"pipeline", "clauses", "structure"}));
  dd_cmd->add_option("-o,--out", output, "reduced instance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (validate_cmd->parsed()) {
      Formula f;
      try {
        f = load(input, lenient);
      } catch (const ParseError& e) {
        std::cerr << input << ": " << e.what() << '\n';
        return 1;
      }
      const auto report = validate(f);
      std::cout << report.to_string();
      return report.ok() ? 0 : 1;
    }

    if (reduce_cmd->parsed()) {
      AutarkySystemConfig cfg = systems_config(systems);
      cfg.use_symmetry_compilation = sym_compile;
      cfg.sat.external_cmd = sat_cmd;
      cfg.shuffle_seed = shuffle;
      Formula f;
      try {
        f = load(input);
      } catch (const ParseError& e) {
        std::cerr << input << ": " << e.what() << '\n';
        return 1;
      }
      const auto r = reduce_to_lean_kernel(f, cfg);
      emit(output, print_dqdimacs(r.kernel));
      if (!cert_path.empty()) emit(cert_path, write_certificate(r.certificate));
      for (const auto& w : r.stats.warnings) std::cerr << "c warning: " << w << '\n';
      if (stats) {
        std::size_t total = 0;
        std::cerr << "c stats " << f.source_name << " clauses " << f.matrix.size() << " kernel "
                  << r.kernel.matrix.size() << " removed " << r.stats.removed_clauses;
        for (AutarkySystem s : enabled_systems(cfg)) {
          const auto it = r.stats.autarkies.find(s);
          const std::size_t n = it == r.stats.autarkies.end() ? 0 : it->second;
          total += n;
          std::cerr << ' ' << to_string(s) << ' ' << n;
        }
        std::cerr << " autarkies " << total << (r.stats.incomplete ? " incomplete" : "") << '\n';
      }
      return 0;
    }

    if (check_cmd->parsed()) {
      Formula original, kernel;
      try {
        original = load(orig_path);
        kernel = load(kernel_path);
      } catch (const ParseError& e) {
        std::cerr << e.what() << '\n';
        return 1;
      }
      const auto res = check_certificate_text(original, kernel, slurp(cert_in));
      if (res.ok) {
        std::cout << "c certificate OK\n";
        return 0;
      }
      std::cerr << "c certificate rejected at step " << res.failed_at << ": " << res.diagnostic << '\n';
      return 1;
    }

    if (sym_cmd->parsed()) {
      if (!detect && !do_break) throw UsageError("symmetry needs --detect or --break");
      const Formula f = load(input);
      const auto search = find_generators(f, build_symmetry_graph(f), node_budget);
      if (!search.complete) std::cerr << "c warning: node budget exhausted, generator list partial\n";
      if (detect) {
        emit(output, search.generators.empty() ? std::string("c no generators found\n")
                                               : dump_generators(search.generators));
        return 0;
      }
      try {
        const auto br = build_lex_breaker(f, search.generators,
                                          mode == "relaxed" ? BreakerMode::Relaxed : BreakerMode::Conservative);
        for (const auto& w : br.warnings) std::cerr << "c warning: " << w << '\n';
        emit(output, print_dqdimacs(br.formula));
      } catch (const UnsupportedGenerator& e) {
        std::cerr << "c " << e.what() << '\n';
        return 1;
      }
      return 0;
    }

    if (solve_cmd->parsed()) {
      Formula f;
      try {
        f = load(input);
      } catch (const ParseError& e) {
        std::cerr << input << ": " << e.what() << '\n';
        return 2;
      }
      const auto r = solve_bruteforce(f, budget);
      switch (r.status) {
        case OracleStatus::Sat: std::cout << "s SATISFIABLE\n"; return 10;
        case OracleStatus::Unsat: std::cout << "s UNSATISFIABLE\n"; return 20;
        case OracleStatus::BudgetExceeded:
          std::cout << "c log2 candidates " << r.log2_candidates << " log2 universal assignments "
                    << r.log2_universal_assignments << "\ns UNKNOWN\n";
          return 30;
      }
    }

    if (sat_cmd_app->parsed()) {
      const CnfInstance inst = parse_cnf(slurp(input));
      const SatResult r = sat_solve(inst);
      if (r.status == SatStatus::Sat) {
        std::ostringstream os;
        os << "s SATISFIABLE\nv";
        for (std::uint32_t v = 1; v <= inst.n_vars; ++v) os << ' ' << (r.model[v] ? int(v) : -int(v));
        os << " 0\n";
        std::cout << os.str();
        return 10;
      }
      std::cout << (r.status == SatStatus::Unsat ? "s UNSATISFIABLE\n" : "s UNKNOWN\n");
      return r.status == SatStatus::Unsat ? 20 : 0;
    }

    if (fuzz_cmd->parsed()) {
      const RandomModelParams p = fp.get();
      if (!target.empty()) {
        CampaignOptions opts;
        opts.params = p;
        opts.count = count;
        opts.target_cmd = target;
        opts.oracle_check = oracle_check;
        opts.out_dir = out_dir;
        opts.timeout = timeout;
        const auto rep = fuzz_campaign(opts);
        std::cout << rep.to_string();
        return rep.failures.empty() ? 0 : 1;
      }
      if (out_dir.empty()) {
        if (count != 1) throw UsageError("--out-dir is required for more than one instance");
        std::cout << print_dqdimacs(generate(p));
        return 0;
      }
      std::filesystem::create_directories(out_dir);
      for (std::size_t i = 0; i < count; ++i) {
        RandomModelParams q = p;
        q.seed = p.seed + i;
        const auto path = std::filesystem::path(out_dir) / ("fuzz_" + std::to_string(q.seed) + ".dqdimacs");
        write_dqdimacs_file(generate(q), path.string());
      }
      return 0;
    }

    if (sweep_cmd->parsed()) {
      std::vector<double> rs;
      for (const auto& r : split(ratios, ',')) rs.push_back(std::stod(r));
      std::cout << format_sweep(sweep_phase_transition(sp.get(), rs, samples));
      return 0;
    }

    if (dd_cmd->parsed()) {
      for (const auto& c : split(exit_codes, ',')) spec.exit_codes.insert(std::stoi(c));
      if (dd_cmd->count("--interesting-signal")) spec.crash_signal = signal.value_or(0);
      if (!grep.empty()) spec.stdout_grep = grep;
      spec.check();
      const Formula f = load(input);
      ShrinkResult r;
      try {
        r = dd_mode == "clauses"     ? ddmin_clauses(f, spec)
            : dd_mode == "structure" ? shrink_structure(f, spec)
                                     : ddmin_pipeline(f, spec);
      } catch (const NotInterestingInitially& e) {
        std::cerr << "c " << e.what() << '\n';
        return 1;
      } catch (const ToolFailure& e) {
        std::cerr << "c " << e.what() << '\n';
        return 2;
      }
      r.reduced.comments.clear();
      emit(output, print_dqdimacs(r.reduced));
      std::cerr << "c " << r.passes.to_string() << (r.budget_hit ? " budget_hit" : "")
                << (r.still_interesting ? "" : " final_verification_failed") << '\n';
      return r.still_interesting ? 0 : 1;
    }
  } catch (const UsageError& e) {
    std::cerr << "dqprep: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    std::cerr << input << ": " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "dqprep: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "dqprep: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
