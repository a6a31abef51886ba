#pragma once

// Ground-truth DQBF semantics. Everything here is exhaustive and unoptimized
// on purpose: the engines are property-tested against it.

#include "dqprep/boolfunc.hpp"
#include "dqprep/core.hpp"
#include "dqprep/sat.hpp"

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace dqprep {

// Partial map from existential variables to functions over (part of) their
// dependency sets. The empty map is the trivial autarky.
struct Autarky {
  std::map<Var, BoolFunc> funcs;

  bool empty() const { return funcs.empty(); }
  bool assigns(Var y) const { return funcs.contains(y); }
  const BoolFunc* get(Var y) const {
    const auto it = funcs.find(y);
    return it == funcs.end() ? nullptr : &it->second;
  }
  bool operator==(const Autarky&) const = default;
};

// Total map: every existential gets a function whose domain is exactly D(y).
using SkolemAssignment = Autarky;

inline constexpr std::size_t kEnumCap = 20;

enum class TautologyMethod { Auto, Enumerate, Sat };

struct TautologyOptions {
  TautologyMethod method = TautologyMethod::Auto;
  std::size_t enum_cap = kEnumCap;
  SatLimits sat_limits{};
};

// Domains of all assigned functions are subsets of the dependency sets.
bool respects_prefix(const Formula& f, const Autarky& a);

// Indices of clauses containing a literal of an assigned variable.
std::vector<std::size_t> touched_clauses(const Formula& f, const Autarky& a);

// Universal literals of clause c, together with the substituted functions of
// its assigned existential literals, form a tautology. Unassigned existential
// literals are dropped.
bool substituted_tautology(const Formula& f, std::size_t c, const Autarky& a, const TautologyOptions& opts = {});

bool is_autarky(const Formula& f, const Autarky& a, const TautologyOptions& opts = {});

class NotAnAutarky : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// F[a]: the matrix without the touched clauses; the prefix is unchanged.
Formula apply_autarky(const Formula& f, const Autarky& a, const TautologyOptions& opts = {});

// Acts like psi on psi's variables and like phi elsewhere.
Autarky compose_autarkies(const Autarky& phi, const Autarky& psi);

struct OracleBudget {
  // Bound on the product over occurring existentials of 2^(2^|D(y)|).
  double max_skolem_candidates = double(1 << 24);
  // Bound on 2^(relevant universals).
  double max_universal_assignments = double(1 << 20);
  double max_seconds = 60;
};

enum class OracleStatus { Sat, Unsat, BudgetExceeded };

const char* to_string(OracleStatus s);

struct OracleResult {
  OracleStatus status = OracleStatus::BudgetExceeded;
  // log2 of the number of Skolem candidates and of universal assignments.
  double log2_candidates = 0;
  double log2_universal_assignments = 0;
  // Present when status == Sat.
  std::optional<SkolemAssignment> skolem;
};

// Cost of solve_bruteforce, without running it.
OracleResult estimate_bruteforce(const Formula& f);

// Exhaustive Skolem-function enumeration.
OracleResult solve_bruteforce(const Formula& f, const OracleBudget& budget = {});

class BudgetExceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Every non-trivial autarky assigning between 1 and max_vars occurring
// existentials, with each function ranging over all truth tables on D(y).
std::vector<Autarky> enumerate_autarkies(const Formula& f, std::size_t max_vars, const OracleBudget& budget = {});

} // namespace dqprep
