#pragma once

// Syntactic symmetries of a DQBF: literal permutations that map the clause
// multiset onto itself, keep quantifier kinds, and keep every dependency set.
// Detected as automorphisms of a colored graph; broken statically with
// lex-leader constraints.

#include "dqprep/core.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace dqprep {

// Vertex layout: literal vertices 2(v-1) and 2(v-1)+1 for variable v, then
// one vertex per clause.
struct ColoredGraph {
  std::uint32_t n_vars = 0;
  std::size_t n_clauses = 0;
  std::vector<std::uint32_t> color;
  std::vector<std::vector<std::uint32_t>> adj;  // sorted

  std::size_t size() const { return color.size(); }
  std::uint32_t lit_vertex(Lit l) const { return 2 * (l.var().id - 1) + (l.negated() ? 1 : 0); }
  std::uint32_t clause_vertex(std::size_t i) const { return 2 * n_vars + static_cast<std::uint32_t>(i); }
  bool is_literal_vertex(std::uint32_t v) const { return v < 2 * n_vars; }
  Lit vertex_lit(std::uint32_t v) const { return Lit(Var(v / 2 + 1), (v & 1u) != 0); }
  bool has_edge(std::uint32_t a, std::uint32_t b) const;
  std::size_t n_colors() const;
};

// Colors: clause vertices; existential literals by exact dependency set;
// universal literals by the set of dependency classes that contain them;
// unquantified variables on their own.
ColoredGraph build_symmetry_graph(const Formula& f);

// A consistent literal permutation, image indexed by literal code.
class SymGenerator {
public:
  SymGenerator() = default;
  explicit SymGenerator(std::uint32_t n_vars);

  static SymGenerator identity(std::uint32_t n_vars) { return SymGenerator(n_vars); }

  Lit operator()(Lit l) const { return image_[l.code()]; }
  Lit operator()(Var v) const { return image_[Lit(v, false).code()]; }
  // Sets both l -> to and ~l -> ~to.
  void map(Lit l, Lit to);

  std::uint32_t n_vars() const { return static_cast<std::uint32_t>(image_.size() / 2) - 1; }
  std::vector<Var> support() const;
  bool is_identity() const { return support().empty(); }

  Clause apply(const Clause& c) const;
  // (this after other): x -> this(other(x)).
  SymGenerator after(const SymGenerator& other) const;

  bool operator==(const SymGenerator&) const = default;

private:
  std::vector<Lit> image_;
};

// Checks the generator against the formula itself: consistency, bijectivity,
// quantifier kinds, dependency sets (D(pi(y)) = D(y) = pi(D(y))) and the
// clause multiset.
bool is_formula_symmetry(const Formula& f, const SymGenerator& g, std::string* why = nullptr);

struct GeneratorSearch {
  std::vector<SymGenerator> generators;
  bool complete = true;
  std::size_t nodes = 0;
};

// Color refinement plus individualization; every returned generator passed
// is_formula_symmetry. Incomplete when the node budget ran out.
GeneratorSearch find_generators(const Formula& f, const ColoredGraph& g, std::size_t node_budget = 100000);

struct ClauseOrbits {
  // Each orbit lists its clause indices ascending; the first is the representative.
  std::vector<std::vector<std::size_t>> orbits;
  // For every non-representative member: a permutation taking the
  // representative clause onto it.
  std::map<std::size_t, SymGenerator> to_member;

  std::size_t representative(std::size_t clause) const;
};

ClauseOrbits clause_orbits(const Formula& f, const std::vector<SymGenerator>& gens);

enum class BreakerMode { Conservative, Relaxed };

class UnsupportedGenerator : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct BreakerResult {
  Formula formula;
  std::size_t used = 0;
  std::size_t skipped = 0;
  std::vector<std::string> warnings;
};

// Appends lex-leader clauses for each usable generator: support entirely
// existential and inside one dependency class. Relaxed mode is not
// supported and throws UnsupportedGenerator.
BreakerResult build_lex_breaker(const Formula& f, const std::vector<SymGenerator>& gens,
                                BreakerMode mode = BreakerMode::Conservative);

// Cycle notation over signed literals, one generator per line.
std::string dump_generators(const std::vector<SymGenerator>& gens);

} // namespace dqprep
