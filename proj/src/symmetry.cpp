#include "dqprep/symmetry.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>

namespace dqprep {

bool ColoredGraph::has_edge(std::uint32_t a, std::uint32_t b) const {
  return std::binary_search(adj[a].begin(), adj[a].end(), b);
}

std::size_t ColoredGraph::n_colors() const {
  std::set<std::uint32_t> s(color.begin(), color.end());
  return s.size();
}

namespace {

std::uint32_t variable_count(const Formula& f) {
  std::uint32_t n = std::max(f.n_declared, f.prefix.max_var());
  for (const Clause& c : f.matrix)
    for (Lit l : c) n = std::max(n, l.var().id);
  return n;
}

} // namespace

ColoredGraph build_symmetry_graph(const Formula& f) {
  ColoredGraph g;
  g.n_vars = variable_count(f);
  g.n_clauses = f.matrix.size();
  const std::size_t n = 2 * std::size_t{g.n_vars} + g.n_clauses;
  g.adj.assign(n, {});

  std::set<std::vector<Var>> classes;
  for (Var y : f.prefix.existentials()) classes.insert(f.prefix.deps(y));

  // Keys: (kind, payload). Clause vertices get the smallest key.
  using Key = std::pair<int, std::vector<std::uint32_t>>;
  std::vector<Key> keys(n, Key{0, {}});
  for (std::uint32_t v = 1; v <= g.n_vars; ++v) {
    Key k;
    const Var var(v);
    if (f.prefix.is_existential(var)) {
      k.first = 1;
      for (Var u : f.prefix.deps(var)) k.second.push_back(u.id);
    } else if (f.prefix.is_universal(var)) {
      k.first = 2;
      std::uint32_t idx = 0;
      for (const auto& cls : classes) {
        if (std::binary_search(cls.begin(), cls.end(), var)) k.second.push_back(idx);
        ++idx;
      }
    } else {
      k = {3, {v}};
    }
    keys[g.lit_vertex(Lit(var, false))] = k;
    keys[g.lit_vertex(Lit(var, true))] = k;
  }
  std::vector<Key> sorted = keys;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  g.color.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    g.color[i] = static_cast<std::uint32_t>(std::lower_bound(sorted.begin(), sorted.end(), keys[i]) - sorted.begin());

  auto edge = [&](std::uint32_t a, std::uint32_t b) {
    g.adj[a].push_back(b);
    g.adj[b].push_back(a);
  };
  for (std::uint32_t v = 1; v <= g.n_vars; ++v) edge(g.lit_vertex(Lit(Var(v), false)), g.lit_vertex(Lit(Var(v), true)));
  for (std::size_t i = 0; i < f.matrix.size(); ++i)
    for (Lit l : f.matrix[i]) edge(g.clause_vertex(i), g.lit_vertex(l));
  for (auto& a : g.adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  return g;
}

SymGenerator::SymGenerator(std::uint32_t n_vars) : image_(2 * (std::size_t{n_vars} + 1)) {
  for (std::uint32_t c = 0; c < image_.size(); ++c) image_[c] = Lit::from_code(c);
}

void SymGenerator::map(Lit l, Lit to) {
  image_[l.code()] = to;
  image_[(~l).code()] = ~to;
}

std::vector<Var> SymGenerator::support() const {
  std::vector<Var> out;
  for (std::uint32_t v = 1; v <= n_vars(); ++v)
    if ((*this)(Var(v)) != Lit(Var(v), false)) out.push_back(Var(v));
  return out;
}

Clause SymGenerator::apply(const Clause& c) const {
  std::vector<Lit> lits;
  lits.reserve(c.size());
  for (Lit l : c) lits.push_back(l.code() < image_.size() ? image_[l.code()] : l);
  return Clause(std::move(lits));
}

SymGenerator SymGenerator::after(const SymGenerator& other) const {
  SymGenerator r(std::max(n_vars(), other.n_vars()));
  for (std::uint32_t c = 0; c < r.image_.size(); ++c) {
    Lit x = Lit::from_code(c);
    if (c < other.image_.size()) x = other.image_[c];
    if (x.code() < image_.size()) x = image_[x.code()];
    r.image_[c] = x;
  }
  return r;
}

bool is_formula_symmetry(const Formula& f, const SymGenerator& g, std::string* why) {
  auto fail = [why](std::string msg) {
    if (why) *why = std::move(msg);
    return false;
  };
  const std::uint32_t n = g.n_vars();
  std::vector<bool> hit(n + 1, false);
  for (std::uint32_t v = 1; v <= n; ++v) {
    const Lit p = g(Lit(Var(v), false));
    const Lit q = g(Lit(Var(v), true));
    if (q != ~p) return fail("inconsistent on variable " + std::to_string(v));
    if (p.var().id == 0 || p.var().id > n || hit[p.var().id]) return fail("not a bijection");
    hit[p.var().id] = true;
  }
  for (std::uint32_t v = 1; v <= n; ++v) {
    const Var x(v);
    const Var y = g(x).var();
    if (f.prefix.kind(x) != f.prefix.kind(y)) return fail("variable " + std::to_string(v) + " changes quantifier kind");
    if (!f.prefix.is_existential(x)) continue;
    const auto& d = f.prefix.deps(x);
    if (f.prefix.deps(y) != d) return fail("variable " + std::to_string(v) + " changes dependency set");
    std::vector<Var> img;
    for (Var u : d) img.push_back(g(u).var());
    std::sort(img.begin(), img.end());
    if (img != d) return fail("dependency set of " + std::to_string(v) + " is not mapped onto itself");
  }
  std::vector<Clause> mapped;
  mapped.reserve(f.matrix.size());
  for (const Clause& c : f.matrix) mapped.push_back(g.apply(c));
  if (!same_clause_multiset(mapped, f.matrix)) return fail("clause multiset not preserved");
  return true;
}

namespace {

using Coloring = std::vector<std::uint32_t>;

class AutomorphismSearch {
public:
  AutomorphismSearch(const Formula& f, const ColoredGraph& g, std::size_t budget) : f_(f), g_(g), budget_(budget) {}

  GeneratorSearch run() {
    GeneratorSearch out;
    const std::size_t n = g_.size();
    if (n == 0) return out;
    parent_.resize(n);
    std::iota(parent_.begin(), parent_.end(), 0u);

    Coloring col = g_.color;
    normalize(col);
    refine(col);
    // First path.
    while (true) {
      const auto cell = first_cell(col);
      if (cell.empty()) break;
      path_.push_back({col, cell, sizes(col)});
      col = individualize(col, cell.front());
    }
    leaf_inv_ = inverse(col);
    leaf_sizes_ = sizes(col);

    for (std::size_t level = path_.size(); level-- > 0;) {
      const auto& node = path_[level];
      const std::uint32_t base = node.cell.front();
      for (std::size_t i = 1; i < node.cell.size(); ++i) {
        const std::uint32_t w = node.cell[i];
        if (find(w) == find(base)) continue;
        if (nodes_ > budget_) {
          out.complete = false;
          break;
        }
        Coloring next = individualize(node.col, w);
        if (!matches(next, level + 1)) continue;
        if (auto gamma = descend(next, level + 1)) record(*gamma, out);
      }
      if (!out.complete) break;
    }
    if (nodes_ > budget_) out.complete = false;
    out.nodes = nodes_;
    return out;
  }

private:
  struct PathNode {
    Coloring col;
    std::vector<std::uint32_t> cell;
    std::vector<std::uint32_t> sizes;
  };

  static void normalize(Coloring& col) {
    Coloring s = col;
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    for (auto& c : col) c = static_cast<std::uint32_t>(std::lower_bound(s.begin(), s.end(), c) - s.begin());
  }

  // Equitable refinement; labels are ranks of (old color, neighbor colors).
  void refine(Coloring& col) {
    ++nodes_;
    const std::size_t n = col.size();
    std::size_t n_colors = *std::max_element(col.begin(), col.end()) + 1;
    std::vector<std::vector<std::uint32_t>> sig(n);
    std::vector<std::uint32_t> order(n);
    while (true) {
      for (std::size_t v = 0; v < n; ++v) {
        auto& s = sig[v];
        s.clear();
        s.push_back(col[v]);
        for (std::uint32_t w : g_.adj[v]) s.push_back(col[w]);
        std::sort(s.begin() + 1, s.end());
      }
      std::iota(order.begin(), order.end(), 0u);
      std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return sig[a] < sig[b]; });
      std::uint32_t label = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && sig[order[i]] != sig[order[i - 1]]) ++label;
        col[order[i]] = label;
      }
      const std::size_t now = std::size_t{label} + 1;
      if (now == n_colors) break;
      n_colors = now;
    }
  }

  Coloring individualize(const Coloring& col, std::uint32_t v) {
    Coloring next(col.size());
    for (std::size_t u = 0; u < col.size(); ++u) next[u] = 2 * col[u] + (u == v ? 0 : 1);
    normalize(next);
    refine(next);
    return next;
  }

  static std::vector<std::uint32_t> sizes(const Coloring& col) {
    std::vector<std::uint32_t> s(col.size(), 0);
    for (auto c : col) ++s[c];
    while (!s.empty() && s.back() == 0) s.pop_back();
    return s;
  }

  static std::vector<std::uint32_t> first_cell(const Coloring& col) {
    const auto s = sizes(col);
    for (std::uint32_t c = 0; c < s.size(); ++c)
      if (s[c] > 1) {
        std::vector<std::uint32_t> cell;
        for (std::uint32_t v = 0; v < col.size(); ++v)
          if (col[v] == c) cell.push_back(v);
        return cell;
      }
    return {};
  }

  static std::vector<std::uint32_t> inverse(const Coloring& col) {
    std::vector<std::uint32_t> inv(col.size());
    for (std::uint32_t v = 0; v < col.size(); ++v) inv[col[v]] = v;
    return inv;
  }

  bool matches(const Coloring& col, std::size_t depth) const {
    const auto& want = depth < path_.size() ? path_[depth].sizes : leaf_sizes_;
    return sizes(col) == want;
  }

  std::optional<std::vector<std::uint32_t>> descend(const Coloring& col, std::size_t depth) {
    if (nodes_ > budget_) return std::nullopt;
    const auto cell = first_cell(col);
    if (cell.empty()) {
      const auto inv = inverse(col);
      std::vector<std::uint32_t> gamma(col.size());
      for (std::size_t c = 0; c < inv.size(); ++c) gamma[leaf_inv_[c]] = inv[c];
      if (!preserves_edges(gamma)) return std::nullopt;
      return gamma;
    }
    for (std::uint32_t w : cell) {
      Coloring next = individualize(col, w);
      if (!matches(next, depth + 1)) continue;
      if (auto gamma = descend(next, depth + 1)) return gamma;
      if (nodes_ > budget_) return std::nullopt;
    }
    return std::nullopt;
  }

  bool preserves_edges(const std::vector<std::uint32_t>& gamma) const {
    for (std::uint32_t a = 0; a < gamma.size(); ++a) {
      if (g_.color[a] != g_.color[gamma[a]]) return false;
      if (g_.adj[a].size() != g_.adj[gamma[a]].size()) return false;
      for (std::uint32_t b : g_.adj[a])
        if (!g_.has_edge(gamma[a], gamma[b])) return false;
    }
    return true;
  }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }

  void record(const std::vector<std::uint32_t>& gamma, GeneratorSearch& out) {
    for (std::uint32_t v = 0; v < gamma.size(); ++v) {
      const auto a = find(v);
      const auto b = find(gamma[v]);
      if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }
    SymGenerator gen(g_.n_vars);
    for (std::uint32_t v = 1; v <= g_.n_vars; ++v) {
      const Lit l(Var(v), false);
      gen.map(l, g_.vertex_lit(gamma[g_.lit_vertex(l)]));
    }
    if (gen.is_identity()) return;
    if (!is_formula_symmetry(f_, gen)) return;
    if (std::find(out.generators.begin(), out.generators.end(), gen) == out.generators.end())
      out.generators.push_back(std::move(gen));
  }

  const Formula& f_;
  const ColoredGraph& g_;
  std::size_t budget_;
  std::size_t nodes_ = 0;
  std::vector<PathNode> path_;
  std::vector<std::uint32_t> leaf_inv_;
  std::vector<std::uint32_t> leaf_sizes_;
  std::vector<std::uint32_t> parent_;
};

} // namespace

GeneratorSearch find_generators(const Formula& f, const ColoredGraph& g, std::size_t node_budget) {
  return AutomorphismSearch(f, g, node_budget).run();
}

std::size_t ClauseOrbits::representative(std::size_t clause) const {
  for (const auto& o : orbits)
    if (std::binary_search(o.begin(), o.end(), clause)) return o.front();
  return clause;
}

ClauseOrbits clause_orbits(const Formula& f, const std::vector<SymGenerator>& gens) {
  ClauseOrbits out;
  std::map<Clause, std::vector<std::size_t>> by_content;
  for (std::size_t i = 0; i < f.matrix.size(); ++i) by_content[f.matrix[i]].push_back(i);
  const std::uint32_t n = variable_count(f);

  std::vector<bool> seen(f.matrix.size(), false);
  for (std::size_t i = 0; i < f.matrix.size(); ++i) {
    if (seen[i]) continue;
    std::vector<std::size_t> orbit;
    std::map<Clause, SymGenerator> reached;
    std::vector<Clause> queue{f.matrix[i]};
    reached.emplace(f.matrix[i], SymGenerator(n));
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const Clause cur = queue[q];
      const SymGenerator p = reached.at(cur);
      for (const auto& g : gens) {
        Clause img = g.apply(cur);
        if (reached.contains(img)) continue;
        if (!by_content.contains(img)) continue;  // invalid generator; ignore the edge
        reached.emplace(img, g.after(p));
        queue.push_back(std::move(img));
      }
    }
    for (const auto& [content, perm] : reached)
      for (std::size_t idx : by_content.at(content)) {
        orbit.push_back(idx);
        seen[idx] = true;
      }
    std::sort(orbit.begin(), orbit.end());
    for (const auto& [content, perm] : reached)
      for (std::size_t idx : by_content.at(content))
        if (idx != orbit.front()) out.to_member.emplace(idx, perm);
    out.orbits.push_back(std::move(orbit));
  }
  return out;
}

BreakerResult build_lex_breaker(const Formula& f, const std::vector<SymGenerator>& gens, BreakerMode mode) {
  if (mode == BreakerMode::Relaxed && !gens.empty())
    throw UnsupportedGenerator("relaxed breaker mode has no soundness argument and is disabled");
  BreakerResult r;
  r.formula = f;
  Formula& out = r.formula;
  std::uint32_t next_var = std::max(out.n_declared, variable_count(f));

  for (std::size_t gi = 0; gi < gens.size(); ++gi) {
    const SymGenerator& pi = gens[gi];
    const auto support = pi.support();
    std::string reason;
    if (support.empty()) {
      reason = "identity";
    } else {
      for (Var v : support)
        if (!f.prefix.is_existential(v)) {
          reason = "moves universal or unquantified variable " + std::to_string(v.id);
          break;
        }
      if (reason.empty())
        for (Var v : support)
          if (f.prefix.deps(v) != f.prefix.deps(support.front())) {
            reason = "support spans several dependency classes";
            break;
          }
    }
    if (!reason.empty()) {
      ++r.skipped;
      r.warnings.push_back("generator " + std::to_string(gi + 1) + " skipped: " + reason);
      continue;
    }
    ++r.used;
    const auto& deps = f.prefix.deps(support.front());

    std::vector<std::size_t> positions;
    for (std::size_t i = 0; i < support.size(); ++i) {
      const Lit v(support[i], false);
      const Lit img = pi(v);
      if (pi(img) == v && img.var() < support[i]) continue;
      positions.push_back(i);
    }

    std::optional<Lit> chain;  // e_{i-1}; nullopt means true
    for (std::size_t k = 0; k < positions.size(); ++k) {
      const Lit v(support[positions[k]], false);
      const Lit p = pi(v);
      std::vector<Lit> order{~v, p};
      if (chain) order.push_back(~*chain);
      out.matrix.emplace_back(order);
      if (p == ~v) break;  // equality at this position is impossible
      if (k + 1 == positions.size()) break;

      const Var e(++next_var);
      out.prefix.add_existential(e, deps);
      const Lit el(e, false);
      out.matrix.emplace_back(std::vector<Lit>{~el, ~v, p});
      out.matrix.emplace_back(std::vector<Lit>{~el, v, ~p});
      if (chain) {
        out.matrix.emplace_back(std::vector<Lit>{~el, *chain});
        out.matrix.emplace_back(std::vector<Lit>{~*chain, ~v, ~p, el});
        out.matrix.emplace_back(std::vector<Lit>{~*chain, v, p, el});
      } else {
        out.matrix.emplace_back(std::vector<Lit>{~v, ~p, el});
        out.matrix.emplace_back(std::vector<Lit>{v, p, el});
      }
      chain = el;
    }
  }
  out.n_declared = next_var;
  return r;
}

std::string dump_generators(const std::vector<SymGenerator>& gens) {
  std::ostringstream os;
  for (const auto& g : gens) {
    const std::uint32_t n = g.n_vars();
    std::vector<bool> done(2 * (std::size_t{n} + 1), false);
    bool first = true;
    for (std::uint32_t v = 1; v <= n; ++v)
      for (bool neg : {false, true}) {
        const Lit start(Var(v), neg);
        if (done[start.code()] || g(start) == start) continue;
        if (!first) os << ' ';
        first = false;
        os << '(';
        Lit cur = start;
        do {
          done[cur.code()] = true;
          os << ' ' << cur.to_dimacs();
          cur = g(cur);
        } while (cur != start);
        os << " )";
      }
    os << '\n';
  }
  return os.str();
}

} // namespace dqprep
