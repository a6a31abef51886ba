#pragma once

// Per-clause "tautology witnesses": the minimal selector choices that turn a
// clause into a tautology under substitution, for functions of at most one
// universal variable.

#include "dqprep/autarky.hpp"
#include "dqprep/symmetry.hpp"

#include <map>
#include <stdexcept>
#include <vector>

namespace dqprep {

enum class WitnessKind : std::uint8_t {
  AlreadyTautological,
  ConstantTrue,
  ComplementWithClauseLiteral,
  ComplementBetweenSubstitutions,
};

const char* to_string(WitnessKind k);

struct WitnessChoice {
  Var var;
  FunctionChoice fn;
  auto operator<=>(const WitnessChoice&) const = default;
};

struct TautologyWitness {
  std::size_t clause = 0;
  WitnessKind kind = WitnessKind::ConstantTrue;
  // Sorted by variable; one or two entries (none for AlreadyTautological).
  std::vector<WitnessChoice> choices;

  Autarky as_autarky() const;
  auto operator<=>(const TautologyWitness&) const = default;
};

using WitnessMap = std::map<std::size_t, std::vector<TautologyWitness>>;

// Sorted, duplicate-free witnesses of one clause; k in {0, 1}.
std::vector<TautologyWitness> clause_witnesses(const Formula& f, std::size_t clause, int k);

// Every clause index maps to its witness list (possibly empty).
WitnessMap compile_tautology_witnesses(const Formula& f, int k);

class OrbitPermutationInvalid : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct SymmetryCompileStats {
  std::size_t compiled = 0;
  std::size_t transported = 0;
  std::size_t fallbacks = 0;
};

// Carries a representative's witnesses to another clause of its orbit.
// Throws OrbitPermutationInvalid if a carried witness does not hold.
std::vector<TautologyWitness> transport_witnesses(const Formula& f, std::span<const TautologyWitness> rep,
                                                  std::size_t member, const SymGenerator& perm);

// Compiles once per orbit representative and transports to the other members.
// An orbit whose transport fails is compiled clause-wise instead.
WitnessMap compile_with_symmetry(const Formula& f, const ClauseOrbits& orbits, int k,
                                 SymmetryCompileStats* stats = nullptr);

} // namespace dqprep
