#pragma once

// Propositional SAT backend: a DPLL solver with two-watched-literal unit
// propagation and chronological backtracking, plus an adapter that runs an
// external DIMACS solver.

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace dqprep {

struct CnfInstance {
  std::uint32_t n_vars = 0;
  std::vector<std::vector<int>> clauses;

  int new_var() { return static_cast<int>(++n_vars); }
  void add(std::vector<int> clause) { clauses.push_back(std::move(clause)); }
  // Throws std::invalid_argument when a literal is 0 or exceeds n_vars.
  void check() const;
};

enum class SatStatus { Sat, Unsat, Unknown };

const char* to_string(SatStatus s);

struct SatResult {
  SatStatus status = SatStatus::Unknown;
  // Indexed by variable (entry 0 unused); non-empty iff status == Sat.
  std::vector<bool> model;

  bool value(int lit) const { return lit > 0 ? model[lit] : !model[-lit]; }
};

struct SatLimits {
  std::uint64_t max_conflicts = std::numeric_limits<std::uint64_t>::max();
  double max_seconds = std::numeric_limits<double>::infinity();
};

bool satisfies(const CnfInstance& inst, const std::vector<bool>& model);

// Complete within the limits; Unknown only when a limit is hit.
SatResult sat_solve(const CnfInstance& inst, const SatLimits& limits = {});

std::string to_dimacs(const CnfInstance& inst);

class SolverCrashed : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ModelInvalid : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Runs cmd_template with `{file}` replaced by a temporary DIMACS file (the path
// is appended when the placeholder is missing). Exit code 10/20 or an `s` line
// decides the status; a SAT model is read from `v` lines and checked locally.
SatResult sat_solve_external(const CnfInstance& inst, const std::string& cmd_template, double timeout_seconds = 60);

// Either the internal solver or, when a command is configured, the external one.
struct SatBackend {
  std::string external_cmd;
  SatLimits limits;
  double external_timeout = 60;

  SatResult solve(const CnfInstance& inst) const {
    return external_cmd.empty() ? sat_solve(inst, limits) : sat_solve_external(inst, external_cmd, external_timeout);
  }
};

} // namespace dqprep
