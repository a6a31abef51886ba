#include "dqprep/fuzzer.hpp"

#include "dqprep/dqdimacs.hpp"
#include "dqprep/process.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>

namespace dqprep {

void RandomModelParams::check() const {
  if (!(dep_prob >= 0.0 && dep_prob <= 1.0)) throw std::invalid_argument("dep_prob must lie in [0,1]");
  if (clause_width < 1) throw std::invalid_argument("clause width must be at least 1");
  if (clause_width > n_universal + n_existential && n_clauses > 0)
    throw std::invalid_argument("clause width exceeds the number of variables");
}

std::string RandomModelParams::header() const {
  std::ostringstream os;
  os << "dqfuzz seed=" << seed << " na=" << n_universal << " ne=" << n_existential << " p=" << dep_prob
     << " m=" << n_clauses << " k=" << clause_width;
  if (require_occurrence) os << " occ=1";
  return os.str();
}

namespace {

constexpr int kClauseRetries = 100;
constexpr int kMatrixRetries = 100;

bool every_existential_occurs(const Formula& f) {
  return occurring_existentials(f).size() == f.prefix.existentials().size();
}

} // namespace

Formula generate(const RandomModelParams& p) {
  p.check();
  std::mt19937_64 rng(p.seed);
  Formula f;
  const std::uint32_t n = p.n_universal + p.n_existential;
  f.n_declared = n;
  f.comments.push_back(p.header());
  for (std::uint32_t u = 1; u <= p.n_universal; ++u) f.prefix.add_universal(Var(u));
  std::bernoulli_distribution dep(p.dep_prob);
  for (std::uint32_t y = p.n_universal + 1; y <= n; ++y) {
    std::vector<Var> d;
    for (std::uint32_t u = 1; u <= p.n_universal; ++u)
      if (dep(rng)) d.push_back(Var(u));
    f.prefix.add_existential(Var(y), std::move(d));
  }

  std::vector<std::uint32_t> pool(n);
  std::iota(pool.begin(), pool.end(), 1u);
  std::bernoulli_distribution coin(0.5);
  auto random_clause = [&] {
    // Partial Fisher-Yates: the first `width` entries are a uniform sample.
    std::vector<Lit> lits;
    for (std::uint32_t i = 0; i < p.clause_width; ++i) {
      std::uniform_int_distribution<std::uint32_t> pick(i, n - 1);
      std::swap(pool[i], pool[pick(rng)]);
      lits.emplace_back(Var(pool[i]), coin(rng));
    }
    return Clause(std::move(lits));
  };

  for (int attempt = 0; attempt < kMatrixRetries; ++attempt) {
    f.matrix.clear();
    std::set<Clause> seen;
    for (std::size_t i = 0; i < p.n_clauses; ++i) {
      bool placed = false;
      for (int r = 0; r < kClauseRetries && !placed; ++r) {
        Clause c = random_clause();
        if (seen.insert(c).second) {
          f.matrix.push_back(std::move(c));
          placed = true;
        }
      }
      if (!placed)
        throw UnsatisfiableConstraints("no new distinct clause after " + std::to_string(kClauseRetries) +
                                       " tries (" + p.header() + ")");
    }
    if (!p.require_occurrence || every_existential_occurs(f)) return f;
  }
  throw UnsatisfiableConstraints("could not make every existential occur (" + p.header() + ")");
}

double SweepRow::std_error() const {
  if (samples == 0) return 0;
  const double q = frac_sat();
  return std::sqrt(q * (1 - q) / double(samples));
}

std::vector<SweepRow> sweep_phase_transition(const RandomModelParams& base, const std::vector<double>& ratios,
                                             std::size_t samples, const OracleBudget& budget) {
  base.check();
  const std::uint32_t n = base.n_universal + base.n_existential;
  std::vector<SweepRow> rows(ratios.size());
  for (std::size_t r = 0; r < ratios.size(); ++r) {
    rows[r].ratio = ratios[r];
    rows[r].n_clauses = static_cast<std::size_t>(std::llround(ratios[r] * n));
    rows[r].samples = samples;
  }
  const std::size_t total = ratios.size() * samples;
  std::vector<int> outcome(total, 0);  // 0 sat, 1 unsat, 2 budget, 3 invalid
#pragma omp parallel for schedule(dynamic)
  for (std::size_t t = 0; t < total; ++t) {
    const std::size_t r = t / samples;
    RandomModelParams p = base;
    p.n_clauses = rows[r].n_clauses;
    p.seed = base.seed + t;
    try {
      const auto res = solve_bruteforce(generate(p), budget);
      outcome[t] = res.status == OracleStatus::Sat ? 0 : res.status == OracleStatus::Unsat ? 1 : 2;
    } catch (const UnsatisfiableConstraints&) {
      outcome[t] = 3;
    }
  }
  for (std::size_t t = 0; t < total; ++t) {
    auto& row = rows[t / samples];
    switch (outcome[t]) {
      case 0: ++row.sat; break;
      case 1: ++row.unsat; break;
      case 2: ++row.budget_exceeded; break;
      default: ++row.invalid; break;
    }
  }
  return rows;
}

std::string format_sweep(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "ratio clauses samples sat unsat budget invalid frac_sat stderr\n";
  for (const auto& r : rows)
    os << r.ratio << ' ' << r.n_clauses << ' ' << r.samples << ' ' << r.sat << ' ' << r.unsat << ' '
       << r.budget_exceeded << ' ' << r.invalid << ' ' << r.frac_sat() << ' ' << r.std_error() << '\n';
  return os.str();
}

const char* to_string(CampaignFailure::Kind k) {
  switch (k) {
    case CampaignFailure::Kind::Crash: return "crash";
    case CampaignFailure::Kind::Timeout: return "timeout";
    case CampaignFailure::Kind::UnexpectedExit: return "unexpected-exit";
    case CampaignFailure::Kind::Disagreement: return "disagreement";
    case CampaignFailure::Kind::GenerationError: return "generation-error";
  }
  return "?";
}

SolverAnswer solver_answer(int exit_code, const std::string& out) {
  if (exit_code == 10) return SolverAnswer::Sat;
  if (exit_code == 20) return SolverAnswer::Unsat;
  std::istringstream is(out);
  for (std::string line; std::getline(is, line);) {
    if (line.rfind("s UNSATISFIABLE", 0) == 0) return SolverAnswer::Unsat;
    if (line.rfind("s SATISFIABLE", 0) == 0) return SolverAnswer::Sat;
  }
  return SolverAnswer::None;
}

std::string CampaignReport::to_string() const {
  std::ostringstream os;
  os << "instances " << instances << '\n'
     << "sat " << sat << '\n'
     << "unsat " << unsat << '\n'
     << "oracle_checked " << oracle_checked << '\n'
     << "crashes " << crashes << '\n'
     << "timeouts " << timeouts << '\n'
     << "unexpected_exits " << unexpected_exits << '\n'
     << "disagreements " << disagreements << '\n'
     << "seconds " << seconds << '\n';
  for (const auto& f : failures) {
    os << "failure " << f.index << " seed=" << f.seed << ' ' << dqprep::to_string(f.kind);
    if (!f.saved_path.empty()) os << ' ' << f.saved_path;
    if (!f.detail.empty()) os << " : " << f.detail;
    os << '\n';
  }
  return os.str();
}

CampaignReport fuzz_campaign(const CampaignOptions& opts) {
  opts.params.check();
  const auto start = std::chrono::steady_clock::now();
  struct Slot {
    std::string digest;
    SolverAnswer answer = SolverAnswer::None;
    bool checked = false;
    std::optional<CampaignFailure> failure;
    std::string text;
  };
  std::vector<Slot> slots(opts.count);
  if (!opts.out_dir.empty()) std::filesystem::create_directories(opts.out_dir);

#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < opts.count; ++i) {
    Slot& s = slots[i];
    RandomModelParams p = opts.params;
    p.seed = opts.params.seed + i;
    auto fail = [&](CampaignFailure::Kind kind, std::string detail) {
      s.failure = CampaignFailure{i, p.seed, kind, std::move(detail), {}};
    };
    Formula f;
    try {
      f = generate(p);
    } catch (const UnsatisfiableConstraints& e) {
      fail(CampaignFailure::Kind::GenerationError, e.what());
      continue;
    }
    s.text = print_dqdimacs(f);
    s.digest = content_digest(f);

    TempFile tmp(".dqdimacs");
    write_dqdimacs_file(f, tmp.path());
    const ProcessResult pr = run_shell(expand_command(opts.target_cmd, tmp.path()), opts.timeout);
    if (pr.timed_out) {
      fail(CampaignFailure::Kind::Timeout, "no answer within " + std::to_string(opts.timeout) + "s");
      continue;
    }
    if (pr.signal != 0) {
      fail(CampaignFailure::Kind::Crash, "signal " + std::to_string(pr.signal));
      continue;
    }
    s.answer = solver_answer(pr.exit_code, pr.out);
    if (s.answer == SolverAnswer::None) {
      fail(CampaignFailure::Kind::UnexpectedExit, "exit code " + std::to_string(pr.exit_code));
      continue;
    }
    if (opts.oracle_check) {
      const auto o = solve_bruteforce(f, opts.budget);
      if (o.status != OracleStatus::BudgetExceeded) {
        s.checked = true;
        const bool oracle_sat = o.status == OracleStatus::Sat;
        if (oracle_sat != (s.answer == SolverAnswer::Sat))
          fail(CampaignFailure::Kind::Disagreement,
               std::string("target says ") + (s.answer == SolverAnswer::Sat ? "SAT" : "UNSAT") + ", oracle says " +
                   (oracle_sat ? "SAT" : "UNSAT"));
      }
    }
  }

  CampaignReport rep;
  rep.instances = opts.count;
  for (auto& s : slots) {
    rep.instance_digests.push_back(s.digest);
    if (s.answer == SolverAnswer::Sat) ++rep.sat;
    if (s.answer == SolverAnswer::Unsat) ++rep.unsat;
    if (s.checked) ++rep.oracle_checked;
    if (!s.failure) continue;
    CampaignFailure fl = std::move(*s.failure);
    switch (fl.kind) {
      case CampaignFailure::Kind::Crash: ++rep.crashes; break;
      case CampaignFailure::Kind::Timeout: ++rep.timeouts; break;
      case CampaignFailure::Kind::UnexpectedExit: ++rep.unexpected_exits; break;
      case CampaignFailure::Kind::Disagreement: ++rep.disagreements; break;
      case CampaignFailure::Kind::GenerationError: break;
    }
    if (!opts.out_dir.empty() && !s.text.empty()) {
      const auto path = std::filesystem::path(opts.out_dir) / ("fail_" + std::to_string(fl.seed) + ".dqdimacs");
      std::ofstream(path) << s.text;
      fl.saved_path = path.string();
    }
    rep.failures.push_back(std::move(fl));
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

} // namespace dqprep
