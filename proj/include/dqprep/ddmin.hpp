#pragma once

// Delta debugging of DQBF instances against an external target.

#include "dqprep/core.hpp"
#include "dqprep/oracle.hpp"

#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

namespace dqprep {

// An instance is interesting when every component that is set holds.
struct InterestingnessSpec {
  std::string cmd;
  std::set<int> exit_codes;
  // 0: any signal.
  std::optional<int> crash_signal;
  std::optional<std::string> stdout_grep;
  // The target's SAT/UNSAT answer disagrees with solve_bruteforce.
  bool oracle_mismatch = false;
  // A run that times out is interesting only when this is set.
  bool timeouts = false;
  double per_run_timeout = 10;
  double total_budget = 300;
  OracleBudget oracle_budget{};

  // Throws std::invalid_argument.
  void check() const;
};

class NotInterestingInitially : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ToolFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct PassStats {
  std::size_t tests = 0;
  std::size_t cache_hits = 0;
  std::size_t clauses_removed = 0;
  std::size_t literals_removed = 0;
  std::size_t dependencies_removed = 0;
  std::size_t variables_removed = 0;
  std::size_t rounds = 0;

  std::string to_string() const;
};

struct ShrinkResult {
  Formula reduced;
  bool still_interesting = false;
  PassStats passes;
  bool budget_hit = false;
};

// In-process predicate, mainly for tests.
using Predicate = std::function<bool(const Formula&)>;

// Runs the target once on f and evaluates the spec.
bool is_interesting(const Formula& f, const InterestingnessSpec& spec);

ShrinkResult ddmin_clauses(const Formula& f, const InterestingnessSpec& spec);
ShrinkResult shrink_structure(const Formula& f, const InterestingnessSpec& spec);
ShrinkResult ddmin_pipeline(const Formula& f, const InterestingnessSpec& spec);

// Predicate variants; total_budget in seconds.
ShrinkResult ddmin_clauses(const Formula& f, const Predicate& pred, double total_budget = 300);
ShrinkResult shrink_structure(const Formula& f, const Predicate& pred, double total_budget = 300);
ShrinkResult ddmin_pipeline(const Formula& f, const Predicate& pred, double total_budget = 300);

// Drops variables that do not occur in the matrix and renumbers the rest
// densely, keeping their relative order.
Formula compact_variables(const Formula& f);

} // namespace dqprep
