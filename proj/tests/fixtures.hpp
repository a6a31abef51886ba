#pragma once

#include "dqprep/dqdimacs.hpp"
#include "dqprep/fuzzer.hpp"
#include "dqprep/oracle.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace fixtures {

// x1..x3 = 1..3, y1..y3 = 4..6.
inline const char* kWorked =
    "p cnf 6 5\n"
    "a 1 2 3 0\n"
    "e 4 5 6 0\n"
    "d 4 1 2 0\n"
    "d 5 2 3 0\n"
    "d 6 1 0\n"
    "4 1 0\n"
    "-4 2 0\n"
    "-5 -2 3 0\n"
    "6 -1 2 0\n"
    "-6 1 0\n";

inline dqprep::Formula worked() { return dqprep::parse_dqdimacs(kWorked); }

inline dqprep::Formula worked_kernel() {
  return dqprep::parse_dqdimacs(
      "p cnf 6 2\na 1 2 3 0\ne 4 5 6 0\nd 4 1 2 0\nd 5 2 3 0\nd 6 1 0\n4 1 0\n-4 2 0\n");
}

// (y1 v x1) & (y2 v x2), swapping (y1 y2)(x1 x2). x = 1,2; y = 3,4.
inline dqprep::Formula swap_pair() {
  return dqprep::parse_dqdimacs("p cnf 4 2\na 1 2 0\ne 3 4 0\nd 3 1 2 0\nd 4 1 2 0\n3 1 0\n4 2 0\n");
}

// (y1 v x1) & (y2 v x1), D(y1) = D(y2) = {x1}.
inline dqprep::Formula shared_x() {
  return dqprep::parse_dqdimacs("p cnf 3 2\na 1 0\ne 2 3 0\nd 2 1 0\nd 3 1 0\n2 1 0\n3 1 0\n");
}

inline dqprep::Formula parse(const std::string& text) { return dqprep::parse_dqdimacs(text); }

// Tiny instances inside the oracle budget: <= 4 universals, <= 3 existentials.
inline dqprep::Formula tiny(std::uint64_t seed) {
  std::mt19937_64 rng(seed * 7919 + 17);
  dqprep::RandomModelParams p;
  p.n_universal = 2 + static_cast<std::uint32_t>(rng() % 3);
  p.n_existential = 1 + static_cast<std::uint32_t>(rng() % 3);
  p.dep_prob = 0.5;
  p.clause_width = 2 + static_cast<std::uint32_t>(rng() % 2);
  p.n_clauses = 2 + rng() % 7;
  p.seed = seed;
  for (;;) {
    try {
      dqprep::Formula f = dqprep::generate(p);
      bool small = true;
      for (dqprep::Var y : f.prefix.existentials()) small = small && f.prefix.deps(y).size() <= 2;
      if (small) return f;
    } catch (const dqprep::UnsatisfiableConstraints&) {
    }
    p.seed += 1000003;
  }
}

// Independent semantics for tests: expands every Skolem candidate over the
// full universal space. Only for very small formulas.
inline bool naive_sat(const dqprep::Formula& f) {
  using namespace dqprep;
  const auto& us = f.prefix.universals();
  const auto& es = f.prefix.existentials();
  std::vector<std::size_t> bits;
  std::size_t total = 0;
  for (Var y : es) {
    bits.push_back(std::size_t{1} << f.prefix.deps(y).size());
    total += bits.back();
  }
  if (total > 24 || us.size() > 10) throw std::runtime_error("naive_sat: too large");
  std::vector<std::uint8_t> val(f.n_declared + 1, 0);
  for (std::uint64_t cand = 0; cand < (std::uint64_t{1} << total); ++cand) {
    bool ok = true;
    for (std::uint64_t sigma = 0; ok && sigma < (std::uint64_t{1} << us.size()); ++sigma) {
      for (std::size_t i = 0; i < us.size(); ++i) val[us[i].id] = (sigma >> i) & 1u;
      std::size_t off = 0;
      for (std::size_t j = 0; j < es.size(); ++j) {
        const auto& d = f.prefix.deps(es[j]);
        std::size_t idx = 0;
        for (std::size_t i = 0; i < d.size(); ++i) idx |= std::size_t{val[d[i].id]} << i;
        val[es[j].id] = (cand >> (off + idx)) & 1u;
        off += bits[j];
      }
      for (const Clause& c : f.matrix) {
        bool sat = false;
        for (Lit l : c) sat = sat || ((val[l.var().id] != 0) != l.negated());
        if (!sat) {
          ok = false;
          break;
        }
      }
    }
    if (ok) return true;
  }
  return false;
}

// Independent autarky check by enumeration of all universal assignments.
inline bool naive_autarky(const dqprep::Formula& f, const dqprep::Autarky& a) {
  using namespace dqprep;
  for (const auto& [y, fn] : a.funcs) {
    if (!f.prefix.is_existential(y)) return false;
    for (Var u : fn.domain())
      if (!f.prefix.depends_on(y, u)) return false;
  }
  const auto& us = f.prefix.universals();
  std::vector<std::uint8_t> val(f.n_declared + 1, 0);
  for (const Clause& c : f.matrix) {
    bool touched = false;
    for (Lit l : c) touched = touched || a.assigns(l.var());
    if (!touched) continue;
    for (std::uint64_t sigma = 0; sigma < (std::uint64_t{1} << us.size()); ++sigma) {
      for (std::size_t i = 0; i < us.size(); ++i) val[us[i].id] = (sigma >> i) & 1u;
      bool sat = false;
      for (Lit l : c) {
        if (f.prefix.is_universal(l.var())) {
          sat = sat || ((val[l.var().id] != 0) != l.negated());
        } else if (const BoolFunc* fn = a.get(l.var())) {
          sat = sat || (fn->eval(val) != l.negated());
        }
      }
      if (!sat) return false;
    }
  }
  return true;
}

} // namespace fixtures
