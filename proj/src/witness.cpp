#include "dqprep/witness.hpp"

#include <algorithm>

namespace dqprep {

const char* to_string(WitnessKind k) {
  switch (k) {
    case WitnessKind::AlreadyTautological: return "AlreadyTautological";
    case WitnessKind::ConstantTrue: return "ConstantTrue";
    case WitnessKind::ComplementWithClauseLiteral: return "ComplementWithClauseLiteral";
    case WitnessKind::ComplementBetweenSubstitutions: return "ComplementBetweenSubstitutions";
  }
  return "?";
}

Autarky TautologyWitness::as_autarky() const {
  Autarky a;
  for (const auto& c : choices) a.funcs.emplace(c.var, c.fn.to_func());
  return a;
}

namespace {

bool universally_tautological(const Formula& f, const Clause& c) {
  for (std::size_t i = 1; i < c.size(); ++i)
    if (c[i].var() == c[i - 1].var() && f.prefix.is_universal(c[i].var())) return true;
  return false;
}

void normalize(std::vector<TautologyWitness>& ws) {
  for (auto& w : ws) std::sort(w.choices.begin(), w.choices.end());
  std::sort(ws.begin(), ws.end());
  ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
}

} // namespace

std::vector<TautologyWitness> clause_witnesses(const Formula& f, std::size_t ci, int k) {
  if (k < 0 || k > 1) throw std::invalid_argument("clause-wise witness compilation needs k in {0,1}");
  const Clause& c = f.matrix.at(ci);
  if (universally_tautological(f, c)) return {{ci, WitnessKind::AlreadyTautological, {}}};

  std::vector<Lit> universal;
  std::vector<Lit> existential;
  for (Lit l : c) (f.prefix.is_universal(l.var()) ? universal : existential).push_back(l);

  std::vector<TautologyWitness> out;
  for (std::size_t i = 0; i < existential.size(); ++i) {
    const Lit e = existential[i];
    const Var y = e.var();
    out.push_back({ci, WitnessKind::ConstantTrue, {{y, FunctionChoice::constant(!e.negated())}}});
    if (k == 0) continue;

    // Substituted literal complementary to a universal literal m of the clause.
    for (Lit m : universal)
      if (f.prefix.depends_on(y, m.var()))
        out.push_back({ci, WitnessKind::ComplementWithClauseLiteral,
                       {{y, FunctionChoice::literal(e.negated() ? m : ~m)}}});

    // Two substituted literals complementary to each other.
    for (std::size_t j = i + 1; j < existential.size(); ++j) {
      const Lit e2 = existential[j];
      const Var y2 = e2.var();
      for (Var u : f.prefix.deps(y)) {
        if (!f.prefix.depends_on(y2, u)) continue;
        for (bool neg : {false, true}) {
          const Lit s(u, neg);
          const Lit f1 = e.negated() ? ~s : s;
          const Lit f2 = e2.negated() ? s : ~s;
          if (y == y2) {
            if (f1 == f2)
              out.push_back({ci, WitnessKind::ComplementBetweenSubstitutions, {{y, FunctionChoice::literal(f1)}}});
          } else {
            out.push_back({ci,
                           WitnessKind::ComplementBetweenSubstitutions,
                           {{y, FunctionChoice::literal(f1)}, {y2, FunctionChoice::literal(f2)}}});
          }
        }
      }
    }
  }
  normalize(out);
  return out;
}

WitnessMap compile_tautology_witnesses(const Formula& f, int k) {
  WitnessMap out;
  for (std::size_t i = 0; i < f.matrix.size(); ++i) out.emplace(i, clause_witnesses(f, i, k));
  return out;
}

namespace {

FunctionChoice transport_choice(const FunctionChoice& fn, const SymGenerator& perm, bool negate) {
  switch (fn.kind) {
    case FunctionChoice::Kind::Const0:
    case FunctionChoice::Kind::Const1: {
      const bool value = fn.kind == FunctionChoice::Kind::Const1;
      return FunctionChoice::constant(value != negate);
    }
    case FunctionChoice::Kind::Literal: {
      const Lit img = perm(fn.lit);
      return FunctionChoice::literal(negate ? ~img : img);
    }
    case FunctionChoice::Kind::Table2: {
      const Lit ia = perm(fn.a);
      const Lit ib = perm(fn.b);
      const bool swap = ib.var() < ia.var();
      std::uint8_t table = 0;
      for (int va = 0; va < 2; ++va)
        for (int vb = 0; vb < 2; ++vb) {
          // New variables take the values that make the images of a and b equal va, vb.
          const int na = va ^ (ia.negated() ? 1 : 0);
          const int nb = vb ^ (ib.negated() ? 1 : 0);
          const int bit = swap ? (nb + 2 * na) : (na + 2 * nb);
          const bool value = ((fn.table >> (va + 2 * vb)) & 1u) != negate;
          if (value) table |= static_cast<std::uint8_t>(1u << bit);
        }
      return swap ? FunctionChoice::table2(ib.var(), ia.var(), table)
                  : FunctionChoice::table2(ia.var(), ib.var(), table);
    }
  }
  return fn;
}

} // namespace

std::vector<TautologyWitness> transport_witnesses(const Formula& f, std::span<const TautologyWitness> rep,
                                                  std::size_t member, const SymGenerator& perm) {
  std::vector<TautologyWitness> out;
  for (const TautologyWitness& w : rep) {
    TautologyWitness t{member, w.kind, {}};
    for (const WitnessChoice& c : w.choices) {
      const Lit img = perm(c.var);
      t.choices.push_back({img.var(), transport_choice(c.fn, perm, img.negated())});
    }
    if (t.kind == WitnessKind::AlreadyTautological) {
      if (!universally_tautological(f, f.matrix.at(member)))
        throw OrbitPermutationInvalid("member clause " + std::to_string(member + 1) + " is not tautological");
    } else {
      const Autarky a = t.as_autarky();
      if (!respects_prefix(f, a) || !substituted_tautology(f, member, a))
        throw OrbitPermutationInvalid("transported witness fails on clause " + std::to_string(member + 1));
    }
    out.push_back(std::move(t));
  }
  normalize(out);
  return out;
}

WitnessMap compile_with_symmetry(const Formula& f, const ClauseOrbits& orbits, int k, SymmetryCompileStats* stats) {
  SymmetryCompileStats local;
  WitnessMap out;
  for (const auto& orbit : orbits.orbits) {
    const std::size_t rep = orbit.front();
    auto rep_ws = clause_witnesses(f, rep, k);
    ++local.compiled;
    try {
      for (std::size_t i = 1; i < orbit.size(); ++i) {
        out[orbit[i]] = transport_witnesses(f, rep_ws, orbit[i], orbits.to_member.at(orbit[i]));
        ++local.transported;
      }
    } catch (const OrbitPermutationInvalid&) {
      ++local.fallbacks;
      for (std::size_t i = 1; i < orbit.size(); ++i) out[orbit[i]] = clause_witnesses(f, orbit[i], k);
    }
    out[rep] = std::move(rep_ws);
  }
  if (stats) *stats = local;
  return out;
}

} // namespace dqprep
