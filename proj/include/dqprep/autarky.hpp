#pragma once

// Autarky detection: the polynomial single-variable (E1) check, the SAT
// encodings for A0/A1/A2 and the pairwise E2 search.

#include "dqprep/core.hpp"
#include "dqprep/oracle.hpp"
#include "dqprep/sat.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dqprep {

struct AutarkySystemConfig {
  bool enable_e1 = true;
  // Largest essential-variable count for A_k; nullopt disables A_k detection.
  std::optional<int> a_k = 1;
  // 2 adds the pairwise E2 search after the single-variable one.
  int e_k = 1;
  bool use_symmetry_compilation = false;
  SatBackend sat;
  // Largest 2^|D(y)| + 2^|D(y')| for which an E2 pair is encoded.
  std::size_t e2_table_bound = 256;
  // Largest number of free universals a clause may expand over in the A2
  // encoding; wider clauses are kept untouched and the search is incomplete.
  std::size_t expansion_cap = 12;
  // Permutes detector order, E1 scan order and selector numbering.
  std::optional<std::uint64_t> shuffle_seed;

  void check() const;
};

struct Detection {
  std::optional<Autarky> autarky;
  // Some budget or bound cut the search short: "none found" is not "none exists".
  bool incomplete = false;
  std::vector<std::string> warnings;
};

// The cube over D(var) on which a clause forces var's function to `polarity`.
struct ForcingRegion {
  Var var;
  bool polarity = true;
  Cube cube;
  std::size_t clause = 0;
};

// Regions imposed on y by its clauses; universally tautological clauses and
// clauses containing both y and its complement impose none.
std::vector<ForcingRegion> forcing_regions(const Formula& f, Var y);

// Single-variable autarky for the first eligible variable in ascending order
// (or in `order` when given). The parallel version scans blocks of variables
// concurrently and returns the same answer as the serial reference.
std::optional<Autarky> find_e1_autarky(const Formula& f);
std::optional<Autarky> find_e1_autarky(const Formula& f, std::span<const Var> order);
std::optional<Autarky> find_e1_autarky_serial(const Formula& f);
std::optional<Autarky> find_e1_autarky_serial(const Formula& f, std::span<const Var> order);

struct AppliedAutarky {
  Autarky autarky;
  // 0-based indices into the formula the autarky was applied to.
  std::vector<std::size_t> removed;
};

struct E1Exhaustion {
  std::vector<AppliedAutarky> steps;
  Formula rest;
};

// Applies E1 autarkies until none is left. Yields the same steps as calling
// find_e1_autarky with `order` (restricted to occurring variables) after every
// application, but only re-examines variables whose clauses were removed.
E1Exhaustion exhaust_e1(const Formula& f, std::span<const Var> order);
E1Exhaustion exhaust_e1(const Formula& f);

// Value chosen for one existential by an A_k selector.
struct FunctionChoice {
  enum class Kind : std::uint8_t { Const0, Const1, Literal, Table2 };
  Kind kind = Kind::Const0;
  // Literal: the function is this universal literal.
  Lit lit;
  // Table2: function of (a, b) with a < b; bit (va + 2*vb) of table.
  Var a, b;
  std::uint8_t table = 0;

  static FunctionChoice constant(bool v) { return {v ? Kind::Const1 : Kind::Const0, {}, {}, {}, 0}; }
  static FunctionChoice literal(Lit l) { return {Kind::Literal, l, {}, {}, 0}; }
  static FunctionChoice table2(Var a, Var b, std::uint8_t t) { return {Kind::Table2, {}, a, b, t}; }

  BoolFunc to_func() const;
  std::string to_string() const;
  auto operator<=>(const FunctionChoice&) const = default;
};

// Encoding of A_k detection; kept separate so callers can feed it to any backend.
struct AkEncoding {
  enum class Style { Witness, Expansion };

  CnfInstance cnf;
  struct Selector {
    Var var;
    std::optional<FunctionChoice> choice;  // nullopt: unassigned
    int sat_var;
  };
  std::vector<Selector> selectors;
  bool incomplete = false;
  std::vector<std::string> warnings;

  // Decodes a model; the result is not yet checked against the oracle.
  Autarky decode(const SatResult& model) const;
};

// k in {0,1,2}. Witness style (k <= 1) requires one "witness realized" clause
// per touched clause; expansion style spells the tautology out per universal
// assignment and is used for k = 2.
AkEncoding encode_ak(const Formula& f, int k, const AutarkySystemConfig& cfg,
                     AkEncoding::Style style = AkEncoding::Style::Witness);

// Throws std::logic_error if a decoded model is not an autarky.
Detection find_ak_autarky(const Formula& f, int k, const AutarkySystemConfig& cfg);

// k = 1: the E1 check. k = 2: E1, then pairs of existentials sharing a clause.
Detection find_ek_autarky(const Formula& f, int k, const AutarkySystemConfig& cfg);

} // namespace dqprep
