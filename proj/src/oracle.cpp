#include "dqprep/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <unordered_map>

namespace dqprep {

bool respects_prefix(const Formula& f, const Autarky& a) {
  for (const auto& [y, fn] : a.funcs) {
    if (!f.prefix.is_existential(y)) return false;
    const auto& d = f.prefix.deps(y);
    if (!std::includes(d.begin(), d.end(), fn.domain().begin(), fn.domain().end())) return false;
  }
  return true;
}

std::vector<std::size_t> touched_clauses(const Formula& f, const Autarky& a) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < f.matrix.size(); ++i)
    for (Lit l : f.matrix[i])
      if (a.assigns(l.var())) {
        out.push_back(i);
        break;
      }
  return out;
}

namespace {

struct Term {
  const BoolFunc* fn;
  bool negated;
};

bool tautology_by_enumeration(std::span<const Var> free_vars, std::vector<std::uint8_t>& values,
                              std::span<const Term> terms) {
  if (free_vars.size() >= 63) throw DomainTooLarge("too many universal variables to enumerate");
  const std::uint64_t rows = std::uint64_t{1} << free_vars.size();
  for (std::uint64_t idx = 0; idx < rows; ++idx) {
    for (std::size_t i = 0; i < free_vars.size(); ++i) values[free_vars[i].id] = (idx >> i) & 1u;
    bool some_true = false;
    for (const Term& t : terms)
      if (t.fn->eval(values) != t.negated) {
        some_true = true;
        break;
      }
    if (!some_true) return false;
  }
  return true;
}

// The clause is a tautology iff "every term false" is unsatisfiable.
bool tautology_by_sat(std::span<const Var> free_vars, const std::vector<std::pair<Var, bool>>& fixed,
                      std::span<const Term> terms, const SatLimits& limits) {
  CnfInstance cnf;
  std::unordered_map<std::uint32_t, int> index;
  for (Var v : free_vars) index[v.id] = cnf.new_var();
  for (auto [v, val] : fixed) {
    const int x = cnf.new_var();
    index[v.id] = x;
    cnf.add({val ? x : -x});
  }
  auto lit_of = [&](Lit l) { return l.negated() ? -index.at(l.var().id) : index.at(l.var().id); };
  for (const Term& t : terms) {
    if (!t.negated) {
      // f must be 0: every cube falsified.
      for (const Cube& cube : t.fn->cover()) {
        std::vector<int> cl;
        for (Lit l : cube) cl.push_back(-lit_of(l));
        cnf.add(std::move(cl));
      }
    } else {
      // f must be 1: some cube satisfied.
      std::vector<int> some;
      for (const Cube& cube : t.fn->cover()) {
        const int sel = cnf.new_var();
        some.push_back(sel);
        for (Lit l : cube) cnf.add({-sel, lit_of(l)});
      }
      cnf.add(std::move(some));
    }
  }
  const SatResult r = sat_solve(cnf, limits);
  if (r.status == SatStatus::Unknown) throw BudgetExceeded("SAT budget exhausted during tautology check");
  return r.status == SatStatus::Unsat;
}

} // namespace

bool substituted_tautology(const Formula& f, std::size_t c, const Autarky& a, const TautologyOptions& opts) {
  const Clause& clause = f.matrix.at(c);
  std::vector<std::pair<Var, bool>> fixed;
  std::vector<Term> terms;
  for (Lit l : clause) {
    if (f.prefix.is_universal(l.var())) {
      // Only points falsifying every universal literal can refute.
      const bool falsifying = l.negated();
      if (!fixed.empty() && fixed.back().first == l.var()) return true;
      fixed.emplace_back(l.var(), falsifying);
    } else if (const BoolFunc* fn = a.get(l.var())) {
      terms.push_back({fn, l.negated()});
    }
  }
  if (terms.empty()) return false;

  std::vector<Var> free_vars;
  std::uint32_t max_id = 0;
  for (const Term& t : terms)
    for (Var u : t.fn->domain()) {
      max_id = std::max(max_id, u.id);
      const bool is_fixed =
          std::any_of(fixed.begin(), fixed.end(), [u](const auto& p) { return p.first == u; });
      if (!is_fixed) free_vars.push_back(u);
    }
  std::sort(free_vars.begin(), free_vars.end());
  free_vars.erase(std::unique(free_vars.begin(), free_vars.end()), free_vars.end());

  const bool enumerate = opts.method == TautologyMethod::Enumerate ||
                         (opts.method == TautologyMethod::Auto && free_vars.size() <= opts.enum_cap);
  if (enumerate) {
    for (auto [v, val] : fixed) max_id = std::max(max_id, v.id);
    std::vector<std::uint8_t> values(max_id + 1, 0);
    for (auto [v, val] : fixed) values[v.id] = val;
    return tautology_by_enumeration(free_vars, values, terms);
  }
  // Fixed variables outside every domain cannot influence the terms.
  std::erase_if(fixed, [&](const auto& p) {
    return std::none_of(terms.begin(), terms.end(), [&](const Term& t) {
      return std::binary_search(t.fn->domain().begin(), t.fn->domain().end(), p.first);
    });
  });
  return tautology_by_sat(free_vars, fixed, terms, opts.sat_limits);
}

bool is_autarky(const Formula& f, const Autarky& a, const TautologyOptions& opts) {
  if (!respects_prefix(f, a)) return false;
  for (std::size_t c : touched_clauses(f, a))
    if (!substituted_tautology(f, c, a, opts)) return false;
  return true;
}

Formula apply_autarky(const Formula& f, const Autarky& a, const TautologyOptions& opts) {
  if (!is_autarky(f, a, opts)) throw NotAnAutarky("assignment is not an autarky of the formula");
  const auto touched = touched_clauses(f, a);
  Formula out;
  out.prefix = f.prefix;
  out.n_declared = f.n_declared;
  out.source_name = f.source_name;
  out.comments = f.comments;
  std::size_t t = 0;
  for (std::size_t i = 0; i < f.matrix.size(); ++i) {
    if (t < touched.size() && touched[t] == i) {
      ++t;
      continue;
    }
    out.matrix.push_back(f.matrix[i]);
  }
  return out;
}

Autarky compose_autarkies(const Autarky& phi, const Autarky& psi) {
  Autarky out = phi;
  for (const auto& [y, fn] : psi.funcs) out.funcs.insert_or_assign(y, fn);
  return out;
}

const char* to_string(OracleStatus s) {
  switch (s) {
    case OracleStatus::Sat: return "SAT";
    case OracleStatus::Unsat: return "UNSAT";
    case OracleStatus::BudgetExceeded: return "BUDGET_EXCEEDED";
  }
  return "?";
}

namespace {

// Universals that can influence the matrix: those in clauses or in the
// dependency set of an occurring existential.
std::vector<Var> relevant_universals(const Formula& f, std::span<const Var> occurring) {
  std::vector<Var> out;
  for (const Clause& c : f.matrix)
    for (Lit l : c)
      if (f.prefix.is_universal(l.var())) out.push_back(l.var());
  for (Var y : occurring) {
    const auto& d = f.prefix.deps(y);
    out.insert(out.end(), d.begin(), d.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// One row per local universal assignment falsifying the clause's universal
// literals: the clause holds iff some (position, table index, negated) entry
// evaluates to true.
struct RowEntry {
  std::uint32_t pos;
  std::uint32_t index;
  bool negated;
};
using Row = std::vector<RowEntry>;

class SkolemSearch {
public:
  SkolemSearch(const Formula& f, std::vector<Var> occurring, const OracleBudget& budget)
      : f_(f), ex_(std::move(occurring)), budget_(budget), tables_(ex_.size(), 0), by_level_(ex_.size() + 1) {
    std::vector<std::int32_t> pos_of(f.n_declared + 2, -1);
    for (std::size_t i = 0; i < ex_.size(); ++i) pos_of[ex_[i].id] = static_cast<std::int32_t>(i);
    for (const Clause& c : f.matrix) compile_clause(c, pos_of);
  }

  OracleStatus run() {
    start_ = std::chrono::steady_clock::now();
    for (const auto& rows : by_level_[0])
      if (!holds(rows)) return OracleStatus::Unsat;
    if (timed_out_) return OracleStatus::BudgetExceeded;
    const bool sat = dfs(0);
    if (timed_out_) return OracleStatus::BudgetExceeded;
    return sat ? OracleStatus::Sat : OracleStatus::Unsat;
  }

  SkolemAssignment skolem() const {
    SkolemAssignment s;
    for (Var y : f_.prefix.existentials()) {
      const auto it = std::find(ex_.begin(), ex_.end(), y);
      const auto& d = f_.prefix.deps(y);
      if (it == ex_.end()) {
        s.funcs.emplace(y, BoolFunc::from_cover(d, {}));
        continue;
      }
      const std::uint64_t t = tables_[it - ex_.begin()];
      std::vector<bool> table(std::size_t{1} << d.size());
      for (std::size_t i = 0; i < table.size(); ++i) table[i] = (t >> i) & 1u;
      s.funcs.emplace(y, BoolFunc::from_table(d, std::move(table)));
    }
    return s;
  }

private:
  void compile_clause(const Clause& c, const std::vector<std::int32_t>& pos_of) {
    std::vector<std::pair<Var, bool>> fixed;
    std::vector<std::pair<std::uint32_t, bool>> ex_lits;
    std::vector<Var> local;
    for (Lit l : c) {
      if (f_.prefix.is_universal(l.var())) {
        if (!fixed.empty() && fixed.back().first == l.var()) return;  // tautology
        fixed.emplace_back(l.var(), l.negated());
      } else {
        const auto p = static_cast<std::uint32_t>(pos_of[l.var().id]);
        ex_lits.emplace_back(p, l.negated());
        const auto& d = f_.prefix.deps(l.var());
        local.insert(local.end(), d.begin(), d.end());
      }
    }
    std::sort(local.begin(), local.end());
    local.erase(std::unique(local.begin(), local.end()), local.end());
    std::erase_if(local, [&](Var u) {
      return std::any_of(fixed.begin(), fixed.end(), [u](const auto& p) { return p.first == u; });
    });

    std::vector<std::uint8_t> values(f_.n_declared + 1, 0);
    for (auto [v, val] : fixed) values[v.id] = val;
    std::vector<Row> rows;
    for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << local.size()); ++idx) {
      for (std::size_t i = 0; i < local.size(); ++i) values[local[i].id] = (idx >> i) & 1u;
      Row row;
      for (auto [p, neg] : ex_lits) {
        const auto& d = f_.prefix.deps(ex_[p]);
        std::uint32_t ti = 0;
        for (std::size_t i = 0; i < d.size(); ++i)
          if (values[d[i].id]) ti |= 1u << i;
        row.push_back({p, ti, neg});
      }
      rows.push_back(std::move(row));
    }
    std::uint32_t level = 0;
    for (auto [p, neg] : ex_lits) level = std::max(level, p + 1);
    by_level_[level].push_back(std::move(rows));
  }

  bool holds(const std::vector<Row>& rows) const {
    for (const Row& row : rows) {
      bool ok = false;
      for (const RowEntry& e : row)
        if ((((tables_[e.pos] >> e.index) & 1u) != 0) != e.negated) {
          ok = true;
          break;
        }
      if (!ok) return false;
    }
    return true;
  }

  bool dfs(std::size_t level) {
    if (level == ex_.size()) return true;
    const std::size_t bits = std::size_t{1} << f_.prefix.deps(ex_[level]).size();
    const std::uint64_t last = bits == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
    for (std::uint64_t t = 0;; ++t) {
      if ((++nodes_ & 0xfff) == 0 &&
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count() > budget_.max_seconds) {
        timed_out_ = true;
        return false;
      }
      tables_[level] = t;
      bool ok = true;
      for (const auto& rows : by_level_[level + 1])
        if (!holds(rows)) {
          ok = false;
          break;
        }
      if (ok && dfs(level + 1)) return true;
      if (timed_out_ || t == last) break;
    }
    return false;
  }

  const Formula& f_;
  std::vector<Var> ex_;
  OracleBudget budget_;
  std::vector<std::uint64_t> tables_;
  // by_level_[i]: clauses whose last existential sits at position i-1.
  std::vector<std::vector<std::vector<Row>>> by_level_;
  std::chrono::steady_clock::time_point start_;
  std::uint64_t nodes_ = 0;
  bool timed_out_ = false;
};

} // namespace

OracleResult estimate_bruteforce(const Formula& f) {
  OracleResult r;
  const auto occ = occurring_existentials(f);
  for (Var y : occ) r.log2_candidates += std::ldexp(1.0, static_cast<int>(f.prefix.deps(y).size()));
  r.log2_universal_assignments = static_cast<double>(relevant_universals(f, occ).size());
  return r;
}

OracleResult solve_bruteforce(const Formula& f, const OracleBudget& budget) {
  OracleResult r = estimate_bruteforce(f);
  const auto occ = occurring_existentials(f);
  const bool too_wide =
      std::any_of(occ.begin(), occ.end(), [&](Var y) { return f.prefix.deps(y).size() > 6; });
  if (too_wide || r.log2_candidates > std::log2(budget.max_skolem_candidates) ||
      r.log2_universal_assignments > std::log2(budget.max_universal_assignments)) {
    r.status = OracleStatus::BudgetExceeded;
    return r;
  }
  SkolemSearch search(f, occ, budget);
  r.status = search.run();
  if (r.status == OracleStatus::Sat) r.skolem = search.skolem();
  return r;
}

std::vector<Autarky> enumerate_autarkies(const Formula& f, std::size_t max_vars, const OracleBudget& budget) {
  const auto occ = occurring_existentials(f);
  const std::size_t k = std::min(max_vars, occ.size());
  for (Var y : occ)
    if (f.prefix.deps(y).size() > 5) throw BudgetExceeded("dependency set too large to enumerate");

  // Walk subsets of size 1..k in lexicographic order.
  std::vector<std::vector<std::size_t>> subsets;
  double total = 0;
  for (std::size_t size = 1; size <= k; ++size) {
    std::vector<std::size_t> idx(size);
    for (std::size_t i = 0; i < size; ++i) idx[i] = i;
    for (;;) {
      double count = 1;
      for (std::size_t i : idx) count *= std::ldexp(1.0, 1 << f.prefix.deps(occ[i]).size());
      total += count;
      subsets.push_back(idx);
      std::size_t i = size;
      while (i > 0 && idx[i - 1] == occ.size() - size + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  if (total > budget.max_skolem_candidates)
    throw BudgetExceeded("enumeration of " + std::to_string(total) + " candidates exceeds budget");

  const auto start = std::chrono::steady_clock::now();
  std::vector<Autarky> out;
  for (const auto& subset : subsets) {
    std::vector<std::uint64_t> tables(subset.size(), 0);
    for (;;) {
      Autarky a;
      for (std::size_t i = 0; i < subset.size(); ++i) {
        const Var y = occ[subset[i]];
        const auto& d = f.prefix.deps(y);
        std::vector<bool> table(std::size_t{1} << d.size());
        for (std::size_t b = 0; b < table.size(); ++b) table[b] = (tables[i] >> b) & 1u;
        a.funcs.emplace(y, BoolFunc::from_table(d, std::move(table)));
      }
      if (is_autarky(f, a)) out.push_back(std::move(a));
      std::size_t i = 0;
      for (; i < subset.size(); ++i) {
        const std::uint64_t limit = std::uint64_t{1} << (std::size_t{1} << f.prefix.deps(occ[subset[i]]).size());
        if (++tables[i] < limit) break;
        tables[i] = 0;
      }
      if (i == subset.size()) break;
      if (std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() > budget.max_seconds)
        throw BudgetExceeded("autarky enumeration timed out");
    }
  }
  return out;
}

} // namespace dqprep
