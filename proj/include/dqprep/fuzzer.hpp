#pragma once

// Seeded random DQBF generation, phase-transition sweeps and fuzz campaigns.
// Generation uses std::mt19937_64; output is byte-identical for identical
// parameters within one build.

#include "dqprep/core.hpp"
#include "dqprep/oracle.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dqprep {

struct RandomModelParams {
  std::uint32_t n_universal = 3;
  std::uint32_t n_existential = 2;
  double dep_prob = 0.5;
  std::size_t n_clauses = 5;
  std::uint32_t clause_width = 2;
  std::uint64_t seed = 1;
  bool require_occurrence = false;

  // Throws std::invalid_argument.
  void check() const;
  std::string header() const;
};

class UnsatisfiableConstraints : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Universals are 1..na, existentials na+1..na+ne.
Formula generate(const RandomModelParams& p);

struct SweepRow {
  double ratio = 0;
  std::size_t n_clauses = 0;
  std::size_t samples = 0;
  std::size_t sat = 0;
  std::size_t unsat = 0;
  std::size_t budget_exceeded = 0;
  // Parameters the generator could not satisfy.
  std::size_t invalid = 0;

  double frac_sat() const { return samples ? double(sat) / double(samples) : 0.0; }
  double frac_budget() const { return samples ? double(budget_exceeded) / double(samples) : 0.0; }
  // Standard error of frac_sat.
  double std_error() const;
};

// Instance j at ratio index r uses seed base.seed + r * samples + j.
std::vector<SweepRow> sweep_phase_transition(const RandomModelParams& base, const std::vector<double>& ratios,
                                             std::size_t samples, const OracleBudget& budget = {});

std::string format_sweep(const std::vector<SweepRow>& rows);

struct CampaignOptions {
  RandomModelParams params;
  std::size_t count = 100;
  // Command template; `{file}` is replaced by the instance path.
  std::string target_cmd;
  bool oracle_check = true;
  std::string out_dir;
  double timeout = 10;
  OracleBudget budget{};
};

struct CampaignFailure {
  enum class Kind { Crash, Timeout, UnexpectedExit, Disagreement, GenerationError };
  std::size_t index = 0;
  std::uint64_t seed = 0;
  Kind kind = Kind::Crash;
  std::string detail;
  std::string saved_path;
};

const char* to_string(CampaignFailure::Kind k);

struct CampaignReport {
  std::size_t instances = 0;
  std::size_t sat = 0;
  std::size_t unsat = 0;
  std::size_t oracle_checked = 0;
  std::size_t crashes = 0;
  std::size_t timeouts = 0;
  std::size_t unexpected_exits = 0;
  std::size_t disagreements = 0;
  std::vector<CampaignFailure> failures;
  // Digests of the generated instances, in index order.
  std::vector<std::string> instance_digests;
  double seconds = 0;

  std::string to_string() const;
};

// Answer reported by a solver run: exit 10/20, else an `s` line on stdout.
enum class SolverAnswer { Sat, Unsat, None };
SolverAnswer solver_answer(int exit_code, const std::string& out);

// Instance i uses seed params.seed + i. Targets run in parallel; the report
// is assembled in index order.
CampaignReport fuzz_campaign(const CampaignOptions& opts);

} // namespace dqprep
