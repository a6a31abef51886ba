#include "dqprep/autarky.hpp"
#include "dqprep/symmetry.hpp"
#include "dqprep/witness.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace dqprep {

void AutarkySystemConfig::check() const {
  if (a_k && (*a_k < 0 || *a_k > 2)) throw std::invalid_argument("a_k must be 0, 1 or 2");
  if (e_k < 1 || e_k > 2) throw std::invalid_argument("e_k must be 1 or 2");
}

BoolFunc FunctionChoice::to_func() const {
  switch (kind) {
    case Kind::Const0: return BoolFunc::constant(false);
    case Kind::Const1: return BoolFunc::constant(true);
    case Kind::Literal: return BoolFunc::literal(lit);
    case Kind::Table2: {
      std::vector<bool> t(4);
      for (int i = 0; i < 4; ++i) t[i] = (table >> i) & 1u;
      return BoolFunc::from_table({a, b}, std::move(t));
    }
  }
  return {};
}

std::string FunctionChoice::to_string() const {
  switch (kind) {
    case Kind::Const0: return "0";
    case Kind::Const1: return "1";
    case Kind::Literal: return std::to_string(lit.to_dimacs());
    case Kind::Table2: {
      std::ostringstream os;
      os << "T" << int(table) << "(" << a.id << "," << b.id << ")";
      return os.str();
    }
  }
  return "?";
}

namespace {

bool essential_on_both(std::uint8_t t) {
  auto at = [t](int va, int vb) { return ((t >> (va + 2 * vb)) & 1u) != 0; };
  const bool dep_a = at(0, 0) != at(1, 0) || at(0, 1) != at(1, 1);
  const bool dep_b = at(0, 0) != at(0, 1) || at(1, 0) != at(1, 1);
  return dep_a && dep_b;
}

std::vector<FunctionChoice> options_for(const Formula& f, Var y, int k) {
  std::vector<FunctionChoice> out{FunctionChoice::constant(false), FunctionChoice::constant(true)};
  const auto& d = f.prefix.deps(y);
  if (k >= 1)
    for (Var u : d) {
      out.push_back(FunctionChoice::literal(Lit(u, false)));
      out.push_back(FunctionChoice::literal(Lit(u, true)));
    }
  if (k >= 2)
    for (std::size_t i = 0; i < d.size(); ++i)
      for (std::size_t j = i + 1; j < d.size(); ++j)
        for (int t = 0; t < 16; ++t)
          if (essential_on_both(static_cast<std::uint8_t>(t)))
            out.push_back(FunctionChoice::table2(d[i], d[j], static_cast<std::uint8_t>(t)));
  return out;
}

bool eval_choice(const FunctionChoice& c, std::span<const std::uint8_t> values) {
  switch (c.kind) {
    case FunctionChoice::Kind::Const0: return false;
    case FunctionChoice::Kind::Const1: return true;
    case FunctionChoice::Kind::Literal: return (values[c.lit.var().id] != 0) != c.lit.negated();
    case FunctionChoice::Kind::Table2: {
      const int idx = values[c.a.id] + 2 * values[c.b.id];
      return ((c.table >> idx) & 1u) != 0;
    }
  }
  return false;
}

std::vector<Var> detector_order(const Formula& f, const AutarkySystemConfig& cfg) {
  auto vars = occurring_existentials(f);
  if (cfg.shuffle_seed) {
    std::mt19937_64 rng(*cfg.shuffle_seed);
    std::shuffle(vars.begin(), vars.end(), rng);
  }
  return vars;
}

std::vector<Var> existential_vars(const Formula& f, const Clause& c) {
  std::vector<Var> out;
  for (Lit l : c)
    if (f.prefix.is_existential(l.var()) && (out.empty() || out.back() != l.var())) out.push_back(l.var());
  return out;
}

} // namespace

AkEncoding encode_ak(const Formula& f, int k, const AutarkySystemConfig& cfg, AkEncoding::Style style) {
  if (k < 0 || k > 2) throw std::invalid_argument("A_k needs k in {0,1,2}");
  if (style == AkEncoding::Style::Witness && k > 1)
    throw std::invalid_argument("witness encoding covers k <= 1; use expansion for k = 2");

  AkEncoding enc;
  CnfInstance& cnf = enc.cnf;
  std::map<std::pair<Var, FunctionChoice>, int> sel;
  std::map<Var, int> unassigned;
  std::map<Var, std::vector<FunctionChoice>> options;

  const auto vars = detector_order(f, cfg);
  for (Var y : vars) {
    std::vector<int> group;
    const int u = cnf.new_var();
    unassigned[y] = u;
    enc.selectors.push_back({y, std::nullopt, u});
    group.push_back(u);
    options[y] = options_for(f, y, k);
    for (const auto& o : options[y]) {
      const int v = cnf.new_var();
      sel[{y, o}] = v;
      enc.selectors.push_back({y, o, v});
      group.push_back(v);
    }
    cnf.add(group);
    for (std::size_t i = 0; i < group.size(); ++i)
      for (std::size_t j = i + 1; j < group.size(); ++j) cnf.add({-group[i], -group[j]});
  }
  {
    std::vector<int> some;
    for (Var y : vars) some.push_back(-unassigned[y]);
    cnf.add(std::move(some));
  }

  WitnessMap witnesses;
  if (style == AkEncoding::Style::Witness) {
    if (cfg.use_symmetry_compilation) {
      const auto gens = find_generators(f, build_symmetry_graph(f));
      witnesses = compile_with_symmetry(f, clause_orbits(f, gens.generators), k);
    } else {
      witnesses = compile_tautology_witnesses(f, k);
    }
  }

  std::vector<std::uint8_t> values(f.n_declared + 1, 0);
  for (std::size_t ci = 0; ci < f.matrix.size(); ++ci) {
    const Clause& c = f.matrix[ci];
    const auto ex = existential_vars(f, c);
    if (ex.empty()) continue;

    if (style == AkEncoding::Style::Witness) {
      const auto& ws = witnesses.at(ci);
      if (std::any_of(ws.begin(), ws.end(),
                      [](const auto& w) { return w.kind == WitnessKind::AlreadyTautological; }))
        continue;
      const int t = cnf.new_var();
      for (Var y : ex) cnf.add({unassigned[y], t});
      std::vector<int> realized{-t};
      for (const auto& w : ws) {
        if (w.choices.size() == 1) {
          realized.push_back(sel.at({w.choices[0].var, w.choices[0].fn}));
        } else {
          const int p = cnf.new_var();
          for (const auto& ch : w.choices) cnf.add({-p, sel.at({ch.var, ch.fn})});
          realized.push_back(p);
        }
      }
      cnf.add(std::move(realized));
      continue;
    }

    // Expansion: one clause per universal assignment falsifying the clause's
    // universal literals.
    std::vector<std::pair<Var, bool>> fixed;
    bool tautology = false;
    for (Lit l : c)
      if (f.prefix.is_universal(l.var())) {
        if (!fixed.empty() && fixed.back().first == l.var()) tautology = true;
        fixed.emplace_back(l.var(), l.negated());
      }
    if (tautology) continue;
    std::vector<Var> free_vars;
    for (Var y : ex)
      for (Var u : f.prefix.deps(y))
        if (std::none_of(fixed.begin(), fixed.end(), [u](const auto& p) { return p.first == u; }))
          free_vars.push_back(u);
    std::sort(free_vars.begin(), free_vars.end());
    free_vars.erase(std::unique(free_vars.begin(), free_vars.end()), free_vars.end());
    if (free_vars.size() > cfg.expansion_cap) {
      enc.incomplete = true;
      enc.warnings.push_back("clause " + std::to_string(ci + 1) + " spans " + std::to_string(free_vars.size()) +
                             " universals; its variables stay unassigned");
      for (Var y : ex) cnf.add({unassigned[y]});
      continue;
    }
    const int t = cnf.new_var();
    for (Var y : ex) cnf.add({unassigned[y], t});
    for (auto [v, val] : fixed) values[v.id] = val;
    for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << free_vars.size()); ++idx) {
      for (std::size_t i = 0; i < free_vars.size(); ++i) values[free_vars[i].id] = (idx >> i) & 1u;
      std::vector<int> row{-t};
      for (Lit l : c) {
        if (!f.prefix.is_existential(l.var())) continue;
        for (const auto& o : options[l.var()])
          if (eval_choice(o, values) != l.negated()) row.push_back(sel.at({l.var(), o}));
      }
      cnf.add(std::move(row));
    }
  }
  return enc;
}

Autarky AkEncoding::decode(const SatResult& model) const {
  Autarky a;
  for (const auto& s : selectors)
    if (s.choice && model.value(s.sat_var)) a.funcs.insert_or_assign(s.var, s.choice->to_func());
  return a;
}

Detection find_ak_autarky(const Formula& f, int k, const AutarkySystemConfig& cfg) {
  Detection d;
  if (occurring_existentials(f).empty()) return d;
  const auto style = k <= 1 ? AkEncoding::Style::Witness : AkEncoding::Style::Expansion;
  AkEncoding enc = encode_ak(f, k, cfg, style);
  d.incomplete = enc.incomplete;
  d.warnings = std::move(enc.warnings);
  SatResult r;
  try {
    r = cfg.sat.solve(enc.cnf);
  } catch (const SolverCrashed& e) {
    d.incomplete = true;
    d.warnings.push_back(std::string("A") + std::to_string(k) + ": " + e.what());
    return d;
  }
  if (r.status == SatStatus::Unknown) {
    d.incomplete = true;
    d.warnings.push_back("A" + std::to_string(k) + ": SAT budget exhausted");
    return d;
  }
  if (r.status == SatStatus::Unsat) return d;

  Autarky a = enc.decode(r);
  if (!is_autarky(f, a)) throw std::logic_error("DecodedNotAutarky: A" + std::to_string(k) + " encoding bug");
  for (const auto& [y, fn] : a.funcs)
    if (essential_vars(fn).size() > static_cast<std::size_t>(k))
      throw std::logic_error("DecodedNotAutarky: function exceeds A" + std::to_string(k));
  d.autarky = std::move(a);
  return d;
}

namespace {

std::optional<Autarky> pair_autarky(const Formula& f, Var y, Var z, const std::vector<std::size_t>& clauses,
                                    const AutarkySystemConfig& cfg, Detection& d) {
  const auto& dy = f.prefix.deps(y);
  const auto& dz = f.prefix.deps(z);
  CnfInstance cnf;
  const int base_y = 1;
  const int base_z = 1 + (1 << dy.size());
  cnf.n_vars = static_cast<std::uint32_t>((1u << dy.size()) + (1u << dz.size()));

  std::vector<Var> both = dy;
  both.insert(both.end(), dz.begin(), dz.end());
  std::sort(both.begin(), both.end());
  both.erase(std::unique(both.begin(), both.end()), both.end());

  std::vector<std::uint8_t> values(f.n_declared + 1, 0);
  auto index_in = [&](const std::vector<Var>& dom) {
    int idx = 0;
    for (std::size_t i = 0; i < dom.size(); ++i)
      if (values[dom[i].id]) idx |= 1 << i;
    return idx;
  };

  for (std::size_t ci : clauses) {
    const Clause& c = f.matrix[ci];
    std::vector<std::pair<Var, bool>> fixed;
    bool tautology = false;
    for (Lit l : c)
      if (f.prefix.is_universal(l.var())) {
        if (!fixed.empty() && fixed.back().first == l.var()) tautology = true;
        fixed.emplace_back(l.var(), l.negated());
      }
    if (tautology) continue;
    std::vector<Var> free_vars;
    for (Var u : both)
      if (std::none_of(fixed.begin(), fixed.end(), [u](const auto& p) { return p.first == u; }))
        free_vars.push_back(u);
    if (free_vars.size() > 20) {
      d.incomplete = true;
      d.warnings.push_back("E2 pair (" + std::to_string(y.id) + "," + std::to_string(z.id) + ") skipped");
      return std::nullopt;
    }
    for (auto [v, val] : fixed) values[v.id] = val;
    std::set<std::vector<int>> rows;
    for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << free_vars.size()); ++idx) {
      for (std::size_t i = 0; i < free_vars.size(); ++i) values[free_vars[i].id] = (idx >> i) & 1u;
      std::vector<int> row;
      for (Lit l : c) {
        int v = 0;
        if (l.var() == y)
          v = base_y + index_in(dy);
        else if (l.var() == z)
          v = base_z + index_in(dz);
        else
          continue;
        row.push_back(l.negated() ? -v : v);
      }
      std::sort(row.begin(), row.end());
      rows.insert(std::move(row));
    }
    for (const auto& row : rows) cnf.add(row);
  }

  const SatResult r = cfg.sat.solve(cnf);
  if (r.status == SatStatus::Unknown) {
    d.incomplete = true;
    return std::nullopt;
  }
  if (r.status == SatStatus::Unsat) return std::nullopt;
  auto table_of = [&](const std::vector<Var>& dom, int base) {
    std::vector<bool> t(std::size_t{1} << dom.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = r.model[base + i];
    return BoolFunc::from_table(dom, std::move(t));
  };
  Autarky a;
  a.funcs.emplace(y, table_of(dy, base_y));
  a.funcs.emplace(z, table_of(dz, base_z));
  if (!is_autarky(f, a)) throw std::logic_error("E2 pair encoding produced a non-autarky");
  return a;
}

} // namespace

Detection find_ek_autarky(const Formula& f, int k, const AutarkySystemConfig& cfg) {
  if (k < 1 || k > 2) throw std::invalid_argument("E_k needs k in {1,2}");
  Detection d;
  const auto order = detector_order(f, cfg);
  if (auto a = find_e1_autarky(f, order)) {
    d.autarky = std::move(a);
    return d;
  }
  if (k == 1) return d;

  std::map<Var, std::vector<std::size_t>> occ;
  std::set<std::pair<Var, Var>> pairs;
  for (std::size_t ci = 0; ci < f.matrix.size(); ++ci) {
    const auto ex = existential_vars(f, f.matrix[ci]);
    for (Var y : ex) occ[y].push_back(ci);
    for (std::size_t i = 0; i < ex.size(); ++i)
      for (std::size_t j = i + 1; j < ex.size(); ++j) pairs.emplace(ex[i], ex[j]);
  }
  for (auto [y, z] : pairs) {
    const std::size_t tables = (std::size_t{1} << f.prefix.deps(y).size()) + (std::size_t{1} << f.prefix.deps(z).size());
    if (f.prefix.deps(y).size() > 16 || f.prefix.deps(z).size() > 16 || tables > cfg.e2_table_bound) {
      d.incomplete = true;
      d.warnings.push_back("E2 pair (" + std::to_string(y.id) + "," + std::to_string(z.id) +
                           ") exceeds the table bound");
      continue;
    }
    std::vector<std::size_t> clauses = occ[y];
    clauses.insert(clauses.end(), occ[z].begin(), occ[z].end());
    std::sort(clauses.begin(), clauses.end());
    clauses.erase(std::unique(clauses.begin(), clauses.end()), clauses.end());
    if (auto a = pair_autarky(f, y, z, clauses, cfg, d)) {
      d.autarky = std::move(a);
      return d;
    }
  }
  return d;
}

} // namespace dqprep
