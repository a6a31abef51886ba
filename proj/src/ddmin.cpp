#include "dqprep/ddmin.hpp"

#include "dqprep/dqdimacs.hpp"
#include "dqprep/fuzzer.hpp"
#include "dqprep/process.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <sstream>

namespace dqprep {

void InterestingnessSpec::check() const {
  if (cmd.empty()) throw std::invalid_argument("no target command");
  if (exit_codes.empty() && !crash_signal && !stdout_grep && !oracle_mismatch && !timeouts)
    throw std::invalid_argument("no interestingness predicate selected");
  if (!(per_run_timeout > 0)) throw std::invalid_argument("run timeout must be positive");
  if (total_budget < 0) throw std::invalid_argument("budget must not be negative");
}

std::string PassStats::to_string() const {
  std::ostringstream os;
  os << "tests " << tests << " cache_hits " << cache_hits << " clauses_removed " << clauses_removed
     << " literals_removed " << literals_removed << " dependencies_removed " << dependencies_removed
     << " variables_removed " << variables_removed << " rounds " << rounds;
  return os.str();
}

bool is_interesting(const Formula& f, const InterestingnessSpec& spec) {
  TempFile tmp(".dqdimacs");
  write_dqdimacs_file(f, tmp.path());
  const ProcessResult pr = run_shell(expand_command(spec.cmd, tmp.path()), spec.per_run_timeout);
  if (pr.spawn_failed) throw ToolFailure("target command could not be run: " + spec.cmd);
  if (pr.timed_out) return spec.timeouts;
  if (!spec.exit_codes.empty() && (pr.signal != 0 || !spec.exit_codes.contains(pr.exit_code))) return false;
  if (spec.crash_signal) {
    if (pr.signal == 0) return false;
    if (*spec.crash_signal != 0 && pr.signal != *spec.crash_signal) return false;
  }
  if (spec.stdout_grep && pr.out.find(*spec.stdout_grep) == std::string::npos) return false;
  if (spec.oracle_mismatch) {
    const SolverAnswer a = solver_answer(pr.exit_code, pr.out);
    if (a == SolverAnswer::None) return false;
    const auto o = solve_bruteforce(f, spec.oracle_budget);
    if (o.status == OracleStatus::BudgetExceeded) return false;
    if ((o.status == OracleStatus::Sat) == (a == SolverAnswer::Sat)) return false;
  }
  return true;
}

Formula compact_variables(const Formula& f) {
  std::vector<bool> used(f.n_declared + 1, false);
  std::uint32_t top = f.n_declared;
  for (const Clause& c : f.matrix)
    for (Lit l : c) top = std::max(top, l.var().id);
  used.resize(top + 1, false);
  for (const Clause& c : f.matrix)
    for (Lit l : c) used[l.var().id] = true;
  std::vector<std::uint32_t> image(top + 1, 0);
  std::uint32_t next = 0;
  for (std::uint32_t v = 1; v <= top; ++v)
    if (used[v]) image[v] = ++next;

  Formula out;
  out.n_declared = next;
  out.source_name = f.source_name;
  out.comments = f.comments;
  for (Var u : f.prefix.universals())
    if (used[u.id]) out.prefix.add_universal(Var(image[u.id]));
  for (Var y : f.prefix.existentials()) {
    if (!used[y.id]) continue;
    std::vector<Var> d;
    for (Var u : f.prefix.deps(y))
      if (used[u.id]) d.push_back(Var(image[u.id]));
    out.prefix.add_existential(Var(image[y.id]), std::move(d));
  }
  for (const Clause& c : f.matrix) {
    std::vector<Lit> lits;
    for (Lit l : c) lits.emplace_back(Var(image[l.var().id]), l.negated());
    out.matrix.emplace_back(std::move(lits));
  }
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

std::size_t literal_count(const Formula& f) {
  std::size_t n = 0;
  for (const Clause& c : f.matrix) n += c.size();
  return n;
}

// Predicate with a verdict cache and a wall-clock budget.
class Tester {
public:
  Tester(Predicate pred, double budget) : pred_(std::move(pred)), deadline_(Clock::now() + to_duration(budget)) {}

  bool out_of_time() {
    if (Clock::now() >= deadline_) budget_hit = true;
    return budget_hit;
  }

  bool operator()(const Formula& f) {
    if (out_of_time()) return false;
    const std::string key = content_digest(f);
    if (const auto it = cache_.find(key); it != cache_.end()) {
      ++stats.cache_hits;
      return it->second;
    }
    ++stats.tests;
    const bool v = pred_(f);
    cache_.emplace(key, v);
    return v;
  }

  // Uncached run.
  bool fresh(const Formula& f) {
    ++stats.tests;
    return pred_(f);
  }

  PassStats stats;
  bool budget_hit = false;

private:
  static Clock::duration to_duration(double s) {
    return std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(std::max(0.0, s)));
  }

  Predicate pred_;
  Clock::time_point deadline_;
  std::map<std::string, bool> cache_;
};

Formula with_clauses(const Formula& f, const std::vector<std::size_t>& keep) {
  Formula g = f;
  g.matrix.clear();
  for (std::size_t i : keep) g.matrix.push_back(f.matrix[i]);
  return g;
}

Formula run_ddmin(const Formula& f, Tester& test) {
  std::vector<std::size_t> cur(f.matrix.size());
  for (std::size_t i = 0; i < cur.size(); ++i) cur[i] = i;
  std::size_t n = 2;
  while (cur.size() >= 2 && !test.out_of_time()) {
    const std::size_t chunk = (cur.size() + n - 1) / n;
    std::vector<std::vector<std::size_t>> parts;
    for (std::size_t s = 0; s < cur.size(); s += chunk)
      parts.emplace_back(cur.begin() + s, cur.begin() + std::min(cur.size(), s + chunk));
    bool reduced = false;
    for (const auto& part : parts)
      if (test(with_clauses(f, part))) {
        cur = part;
        n = 2;
        reduced = true;
        break;
      }
    if (!reduced && parts.size() > 2) {
      for (std::size_t p = 0; p < parts.size(); ++p) {
        std::vector<std::size_t> rest;
        for (std::size_t q = 0; q < parts.size(); ++q)
          if (q != p) rest.insert(rest.end(), parts[q].begin(), parts[q].end());
        if (test(with_clauses(f, rest))) {
          cur = std::move(rest);
          n = std::max<std::size_t>(n - 1, 2);
          reduced = true;
          break;
        }
      }
    }
    if (reduced) continue;
    if (n >= cur.size()) break;
    n = std::min(2 * n, cur.size());
  }
  // One-minimality sweep; also covers the single-clause case.
  for (bool changed = true; changed && !test.out_of_time();) {
    changed = false;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      std::vector<std::size_t> rest = cur;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
      if (test(with_clauses(f, rest))) {
        cur = std::move(rest);
        changed = true;
        break;
      }
    }
  }
  return with_clauses(f, cur);
}

// One sweep of the structural passes; returns true if anything changed.
bool structure_round(Formula& cur, Tester& test) {
  bool changed = false;
  // Literals; a clause never becomes empty.
  for (std::size_t ci = 0; ci < cur.matrix.size(); ++ci) {
    for (std::size_t li = 0; li < cur.matrix[ci].size() && cur.matrix[ci].size() > 1;) {
      if (test.out_of_time()) return changed;
      std::vector<Lit> lits(cur.matrix[ci].begin(), cur.matrix[ci].end());
      lits.erase(lits.begin() + static_cast<std::ptrdiff_t>(li));
      Formula cand = cur;
      cand.matrix[ci] = Clause(std::move(lits));
      if (test(cand)) {
        cur = std::move(cand);
        ++test.stats.literals_removed;
        changed = true;
      } else {
        ++li;
      }
    }
  }
  // Dependencies.
  const std::vector<Var> existentials = cur.prefix.existentials();
  for (Var y : existentials) {
    for (std::size_t di = 0; di < cur.prefix.deps(y).size();) {
      if (test.out_of_time()) return changed;
      std::vector<Var> d = cur.prefix.deps(y);
      d.erase(d.begin() + static_cast<std::ptrdiff_t>(di));
      Formula cand = cur;
      cand.prefix.set_deps(y, std::move(d));
      if (test(cand)) {
        cur = std::move(cand);
        ++test.stats.dependencies_removed;
        changed = true;
      } else {
        ++di;
      }
    }
  }
  // Unused variables.
  Formula cand = compact_variables(cur);
  if (cand.n_declared < cur.n_declared && !test.out_of_time() && test(cand)) {
    test.stats.variables_removed += cur.n_declared - cand.n_declared;
    cur = std::move(cand);
    changed = true;
  }
  return changed;
}

void require_interesting(const Formula& f, Tester& test) {
  if (!test.fresh(f)) throw NotInterestingInitially("the input does not satisfy the interestingness predicate");
}

Predicate spec_predicate(const InterestingnessSpec& spec) {
  spec.check();
  return [spec](const Formula& f) { return is_interesting(f, spec); };
}

} // namespace

ShrinkResult ddmin_clauses(const Formula& f, const Predicate& pred, double total_budget) {
  Tester test(pred, total_budget);
  require_interesting(f, test);
  ShrinkResult r;
  r.reduced = run_ddmin(f, test);
  test.stats.clauses_removed = f.matrix.size() - r.reduced.matrix.size();
  test.stats.rounds = 1;
  r.still_interesting = test.fresh(r.reduced) || (r.reduced = f, test.fresh(f));
  r.passes = test.stats;
  r.budget_hit = test.budget_hit;
  return r;
}

ShrinkResult shrink_structure(const Formula& f, const Predicate& pred, double total_budget) {
  Tester test(pred, total_budget);
  require_interesting(f, test);
  ShrinkResult r;
  r.reduced = f;
  while (!test.out_of_time() && structure_round(r.reduced, test)) ++test.stats.rounds;
  r.still_interesting = test.fresh(r.reduced) || (r.reduced = f, test.fresh(f));
  r.passes = test.stats;
  r.budget_hit = test.budget_hit;
  return r;
}

ShrinkResult ddmin_pipeline(const Formula& f, const Predicate& pred, double total_budget) {
  Tester test(pred, total_budget);
  require_interesting(f, test);
  std::vector<Formula> history{f};
  Formula cur = f;
  while (!test.out_of_time()) {
    ++test.stats.rounds;
    const std::size_t clauses = cur.matrix.size();
    const std::size_t lits = literal_count(cur);
    const std::uint32_t vars = cur.n_declared;
    Formula next = run_ddmin(cur, test);
    test.stats.clauses_removed += clauses - next.matrix.size();
    while (!test.out_of_time() && structure_round(next, test)) {
    }
    const bool smaller = next.matrix.size() < clauses || literal_count(next) < lits || next.n_declared < vars ||
                         !(next.prefix == cur.prefix);
    if (!smaller) break;
    cur = std::move(next);
    history.push_back(cur);
  }

  ShrinkResult r;
  r.budget_hit = test.budget_hit;
  // Final verification on a fresh run; fall back along the accepted chain.
  for (auto it = history.rbegin(); it != history.rend(); ++it)
    if (test.fresh(*it)) {
      r.reduced = *it;
      r.still_interesting = true;
      break;
    }
  if (!r.still_interesting) r.reduced = f;
  r.reduced.comments.clear();
  r.passes = test.stats;
  return r;
}

ShrinkResult ddmin_clauses(const Formula& f, const InterestingnessSpec& spec) {
  return ddmin_clauses(f, spec_predicate(spec), spec.total_budget);
}

ShrinkResult shrink_structure(const Formula& f, const InterestingnessSpec& spec) {
  return shrink_structure(f, spec_predicate(spec), spec.total_budget);
}

ShrinkResult ddmin_pipeline(const Formula& f, const InterestingnessSpec& spec) {
  return ddmin_pipeline(f, spec_predicate(spec), spec.total_budget);
}

} // namespace dqprep
