#include "dqprep/autarky.hpp"

#include <omp.h>

#include <algorithm>
#include <set>

namespace dqprep {

namespace {

using Occurrences = std::vector<std::vector<std::size_t>>;

Occurrences existential_occurrences(const Formula& f) {
  Occurrences occ(f.n_declared + 1);
  for (std::size_t i = 0; i < f.matrix.size(); ++i) {
    Var last;
    for (Lit l : f.matrix[i])
      if (l.var() != last && f.prefix.is_existential(l.var())) {
        occ[l.var().id].push_back(i);
        last = l.var();
      }
  }
  return occ;
}

// Fills regions for y from the given clauses.
void collect_regions(const Formula& f, Var y, std::span<const std::size_t> clauses,
                     std::vector<ForcingRegion>& out) {
  const Lit pos(y, false);
  for (std::size_t ci : clauses) {
    const Clause& c = f.matrix[ci];
    const bool has_pos = c.contains(pos);
    const bool has_neg = c.contains(~pos);
    if (has_pos == has_neg) continue;
    Cube cube;
    bool tautology = false;
    Var prev_universal;
    for (Lit l : c) {
      if (!f.prefix.is_universal(l.var())) continue;
      if (l.var() == prev_universal) {
        tautology = true;
        break;
      }
      prev_universal = l.var();
      if (f.prefix.depends_on(y, l.var())) cube.push_back(~l);
    }
    if (tautology) continue;
    out.push_back({y, has_pos, std::move(cube), ci});
  }
}

// Both cubes are sorted by variable.
bool cubes_intersect(const Cube& a, const Cube& b) {
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].var() < b[j].var()) {
      ++i;
    } else if (b[j].var() < a[i].var()) {
      ++j;
    } else {
      if (a[i] != b[j]) return false;
      ++i;
      ++j;
    }
  }
  return true;
}

std::optional<BoolFunc> e1_function(const Formula& f, Var y, std::span<const std::size_t> clauses) {
  if (clauses.empty()) return std::nullopt;
  std::vector<ForcingRegion> regions;
  collect_regions(f, y, clauses, regions);
  std::vector<const Cube*> positive;
  std::vector<const Cube*> negative;
  for (const auto& r : regions) (r.polarity ? positive : negative).push_back(&r.cube);
  for (const Cube* p : positive)
    for (const Cube* n : negative)
      if (cubes_intersect(*p, *n)) return std::nullopt;
  std::vector<Cube> cover;
  cover.reserve(positive.size());
  for (const Cube* p : positive) cover.push_back(*p);
  return BoolFunc::from_cover(f.prefix.deps(y), std::move(cover));
}

Autarky checked(const Formula& f, Var y, BoolFunc fn) {
  Autarky a;
  a.funcs.emplace(y, std::move(fn));
  if (!is_autarky(f, a)) throw std::logic_error("E1 detector produced a non-autarky for " + std::to_string(y.id));
  return a;
}

std::vector<Var> default_order(const Formula& f) { return occurring_existentials(f); }

} // namespace

std::vector<ForcingRegion> forcing_regions(const Formula& f, Var y) {
  std::vector<std::size_t> clauses;
  for (std::size_t i = 0; i < f.matrix.size(); ++i)
    if (f.matrix[i].contains_var(y)) clauses.push_back(i);
  std::vector<ForcingRegion> out;
  collect_regions(f, y, clauses, out);
  return out;
}

std::optional<Autarky> find_e1_autarky_serial(const Formula& f, std::span<const Var> order) {
  const Occurrences occ = existential_occurrences(f);
  for (Var y : order) {
    if (!f.prefix.is_existential(y)) continue;
    if (auto fn = e1_function(f, y, occ[y.id])) return checked(f, y, std::move(*fn));
  }
  return std::nullopt;
}

std::optional<Autarky> find_e1_autarky_serial(const Formula& f) {
  const auto order = default_order(f);
  return find_e1_autarky_serial(f, order);
}

std::optional<Autarky> find_e1_autarky(const Formula& f, std::span<const Var> order) {
  const Occurrences occ = existential_occurrences(f);
  const std::size_t n = order.size();
  const std::size_t block = std::max<std::size_t>(1, 4 * static_cast<std::size_t>(omp_get_max_threads()));
  std::vector<std::optional<BoolFunc>> found(block);
  for (std::size_t start = 0; start < n; start += block) {
    const std::size_t end = std::min(n, start + block);
    for (auto& slot : found) slot.reset();
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = start; i < end; ++i) {
      const Var y = order[i];
      if (f.prefix.is_existential(y)) found[i - start] = e1_function(f, y, occ[y.id]);
    }
    for (std::size_t i = start; i < end; ++i)
      if (found[i - start]) return checked(f, order[i], std::move(*found[i - start]));
  }
  return std::nullopt;
}

std::optional<Autarky> find_e1_autarky(const Formula& f) {
  const auto order = default_order(f);
  return find_e1_autarky(f, order);
}

E1Exhaustion exhaust_e1(const Formula& f, std::span<const Var> order) {
  const Occurrences occ = existential_occurrences(f);
  const std::size_t m = f.matrix.size();
  std::vector<bool> alive(m, true);
  // Fenwick tree over alive clauses, for indices into the shrinking matrix.
  std::vector<std::size_t> tree(m + 1, 0);
  auto add = [&tree, m](std::size_t i, long d) {
    for (++i; i <= m; i += i & (~i + 1)) tree[i] = static_cast<std::size_t>(static_cast<long>(tree[i]) + d);
  };
  auto alive_before = [&tree](std::size_t i) {
    std::size_t s = 0;
    for (; i > 0; i -= i & (~i + 1)) s += tree[i];
    return s;
  };
  for (std::size_t i = 0; i < m; ++i) add(i, 1);

  std::vector<std::size_t> position(f.n_declared + 1, order.size());
  std::set<std::size_t> pending;
  for (std::size_t p = 0; p < order.size(); ++p)
    if (order[p].id <= f.n_declared && f.prefix.is_existential(order[p])) {
      position[order[p].id] = p;
      pending.insert(p);
    }

  E1Exhaustion out;
  std::vector<std::size_t> live;
  while (!pending.empty()) {
    const std::size_t p = *pending.begin();
    pending.erase(pending.begin());
    const Var y = order[p];
    live.clear();
    for (std::size_t ci : occ[y.id])
      if (alive[ci]) live.push_back(ci);
    auto fn = e1_function(f, y, live);
    if (!fn) continue;

    AppliedAutarky step;
    step.autarky.funcs.emplace(y, std::move(*fn));
    bool ok = respects_prefix(f, step.autarky);
    for (std::size_t ci : live) ok = ok && substituted_tautology(f, ci, step.autarky);
    if (!ok) throw std::logic_error("E1 detector produced a non-autarky for " + std::to_string(y.id));
    for (std::size_t ci : live) step.removed.push_back(alive_before(ci));
    for (std::size_t ci : live) {
      alive[ci] = false;
      add(ci, -1);
      for (Lit l : f.matrix[ci])
        if (position[l.var().id] < order.size() && l.var() != y) pending.insert(position[l.var().id]);
    }
    out.steps.push_back(std::move(step));
  }

  out.rest = f;
  out.rest.matrix.clear();
  for (std::size_t i = 0; i < m; ++i)
    if (alive[i]) out.rest.matrix.push_back(f.matrix[i]);
  return out;
}

E1Exhaustion exhaust_e1(const Formula& f) {
  const auto order = default_order(f);
  return exhaust_e1(f, order);
}

} // namespace dqprep
