#include "dqprep/sat.hpp"

#include "dqprep/process.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dqprep {

const char* to_string(SatStatus s) {
  switch (s) {
    case SatStatus::Sat: return "SAT";
    case SatStatus::Unsat: return "UNSAT";
    case SatStatus::Unknown: return "UNKNOWN";
  }
  return "?";
}

void CnfInstance::check() const {
  for (const auto& c : clauses)
    for (int l : c)
      if (l == 0 || static_cast<std::uint32_t>(std::abs(l)) > n_vars)
        throw std::invalid_argument("literal " + std::to_string(l) + " out of range");
}

bool satisfies(const CnfInstance& inst, const std::vector<bool>& model) {
  if (model.size() != inst.n_vars + 1) return false;
  for (const auto& c : inst.clauses) {
    bool sat = false;
    for (int l : c)
      if ((l > 0) == model[std::abs(l)]) {
        sat = true;
        break;
      }
    if (!sat) return false;
  }
  return true;
}

std::string to_dimacs(const CnfInstance& inst) {
  std::ostringstream os;
  os << "p cnf " << inst.n_vars << ' ' << inst.clauses.size() << '\n';
  for (const auto& c : inst.clauses) {
    for (int l : c) os << l << ' ';
    os << "0\n";
  }
  return os.str();
}

namespace {

// Literal codes: 2*var + sign.
using LitCode = std::uint32_t;

inline LitCode code_of(int l) { return 2 * static_cast<LitCode>(std::abs(l)) + (l < 0 ? 1 : 0); }
inline std::uint32_t var_of(LitCode c) { return c >> 1; }

class Dpll {
public:
  Dpll(const CnfInstance& inst, const SatLimits& limits)
      : n_(inst.n_vars), limits_(limits), value_(n_ + 1, -1), activity_(n_ + 1, 0.0), watches_(2 * n_ + 2) {
    for (const auto& raw : inst.clauses) {
      std::vector<LitCode> c;
      c.reserve(raw.size());
      for (int l : raw) c.push_back(code_of(l));
      std::sort(c.begin(), c.end());
      c.erase(std::unique(c.begin(), c.end()), c.end());
      bool taut = false;
      for (std::size_t i = 1; i < c.size(); ++i)
        if (var_of(c[i]) == var_of(c[i - 1])) taut = true;
      if (taut) continue;
      if (c.empty()) {
        trivially_unsat_ = true;
        continue;
      }
      if (c.size() == 1) {
        units_.push_back(c[0]);
        continue;
      }
      const auto idx = static_cast<std::uint32_t>(clauses_.size());
      watches_[c[0]].push_back(idx);
      watches_[c[1]].push_back(idx);
      clauses_.push_back(std::move(c));
    }
  }

  SatResult run() {
    SatResult r;
    if (trivially_unsat_) {
      r.status = SatStatus::Unsat;
      return r;
    }
    for (LitCode u : units_) {
      const int v = lit_value(u);
      if (v == 0) {
        r.status = SatStatus::Unsat;
        return r;
      }
      if (v < 0) assign(u);
    }
    const auto start = std::chrono::steady_clock::now();
    for (;;) {
      if (const auto conflict = propagate(); conflict >= 0) {
        ++conflicts_;
        for (LitCode l : clauses_[conflict]) activity_[var_of(l)] += 1.0;
        if (!backtrack()) {
          r.status = SatStatus::Unsat;
          return r;
        }
        if (conflicts_ >= limits_.max_conflicts) return r;
        if ((conflicts_ & 1023) == 0 &&
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() > limits_.max_seconds)
          return r;
        continue;
      }
      const std::uint32_t v = pick_branch();
      if (v == 0) break;
      levels_.push_back({static_cast<std::uint32_t>(trail_.size()), 2 * v, false});
      assign(2 * v);
    }
    r.status = SatStatus::Sat;
    r.model.assign(n_ + 1, false);
    for (std::uint32_t v = 1; v <= n_; ++v) r.model[v] = value_[v] == 1;
    return r;
  }

private:
  struct Level {
    std::uint32_t trail_start;
    LitCode decision;
    bool flipped;
  };

  // 1 true, 0 false, -1 unassigned.
  int lit_value(LitCode l) const {
    const int v = value_[var_of(l)];
    return v < 0 ? -1 : (v ^ static_cast<int>(l & 1u));
  }

  void assign(LitCode l) {
    value_[var_of(l)] = (l & 1u) ? 0 : 1;
    trail_.push_back(l);
  }

  // Returns the index of a falsified clause, or -1.
  long propagate() {
    while (qhead_ < trail_.size()) {
      const LitCode falsified = trail_[qhead_++] ^ 1u;
      auto& ws = watches_[falsified];
      std::size_t keep = 0;
      for (std::size_t i = 0; i < ws.size(); ++i) {
        const std::uint32_t ci = ws[i];
        auto& c = clauses_[ci];
        if (c[0] == falsified) std::swap(c[0], c[1]);
        if (lit_value(c[0]) == 1) {
          ws[keep++] = ci;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k)
          if (lit_value(c[k]) != 0) {
            std::swap(c[1], c[k]);
            watches_[c[1]].push_back(ci);
            moved = true;
            break;
          }
        if (moved) continue;
        ws[keep++] = ci;
        if (lit_value(c[0]) == 0) {
          for (std::size_t j = i + 1; j < ws.size(); ++j) ws[keep++] = ws[j];
          ws.resize(keep);
          qhead_ = trail_.size();
          return ci;
        }
        assign(c[0]);
      }
      ws.resize(keep);
    }
    return -1;
  }

  // Chronological backtracking: flip the deepest decision not yet flipped.
  bool backtrack() {
    while (!levels_.empty() && levels_.back().flipped) {
      undo_to(levels_.back().trail_start);
      levels_.pop_back();
    }
    if (levels_.empty()) return false;
    Level& lv = levels_.back();
    undo_to(lv.trail_start);
    lv.flipped = true;
    assign(lv.decision ^ 1u);
    return true;
  }

  void undo_to(std::uint32_t size) {
    while (trail_.size() > size) {
      value_[var_of(trail_.back())] = -1;
      trail_.pop_back();
    }
    qhead_ = std::min<std::size_t>(qhead_, size);
  }

  // Highest activity; ties go to the lowest index.
  std::uint32_t pick_branch() const {
    std::uint32_t best = 0;
    double best_act = -1;
    for (std::uint32_t v = 1; v <= n_; ++v)
      if (value_[v] < 0 && activity_[v] > best_act) {
        best = v;
        best_act = activity_[v];
      }
    return best;
  }

  std::uint32_t n_;
  SatLimits limits_;
  std::vector<int> value_;
  std::vector<double> activity_;
  std::vector<std::vector<LitCode>> clauses_;
  std::vector<std::vector<std::uint32_t>> watches_;
  std::vector<LitCode> units_;
  std::vector<LitCode> trail_;
  std::vector<Level> levels_;
  std::size_t qhead_ = 0;
  std::uint64_t conflicts_ = 0;
  bool trivially_unsat_ = false;
};

} // namespace

SatResult sat_solve(const CnfInstance& inst, const SatLimits& limits) {
  inst.check();
  SatResult r = Dpll(inst, limits).run();
  if (r.status == SatStatus::Sat && !satisfies(inst, r.model))
    throw std::logic_error("internal SAT solver produced a non-model");
  return r;
}

SatResult sat_solve_external(const CnfInstance& inst, const std::string& cmd_template, double timeout_seconds) {
  inst.check();
  TempFile file(".cnf");
  {
    std::ofstream out(file.path());
    out << to_dimacs(inst);
  }
  const ProcessResult pr = run_shell(expand_command(cmd_template, file.path()), timeout_seconds);
  if (pr.spawn_failed) throw SolverCrashed("cannot run `" + cmd_template + "`");
  if (pr.timed_out) return {};

  SatResult r;
  bool saw_status = false;
  std::vector<int> values;
  std::istringstream is(pr.out);
  std::string line;
  while (std::getline(is, line)) {
    if (line.rfind("s ", 0) == 0) {
      saw_status = true;
      if (line.find("UNSATISFIABLE") != std::string::npos)
        r.status = SatStatus::Unsat;
      else if (line.find("SATISFIABLE") != std::string::npos)
        r.status = SatStatus::Sat;
    } else if (line.rfind("v ", 0) == 0) {
      std::istringstream vs(line.substr(2));
      int lit = 0;
      while (vs >> lit)
        if (lit != 0) values.push_back(lit);
    }
  }
  if (!saw_status) {
    if (pr.exit_code == 10)
      r.status = SatStatus::Sat;
    else if (pr.exit_code == 20)
      r.status = SatStatus::Unsat;
    else
      throw SolverCrashed("external solver exited with " +
                          (pr.signal ? "signal " + std::to_string(pr.signal) : "code " + std::to_string(pr.exit_code)));
  } else if (pr.signal != 0 || (pr.exit_code != 10 && pr.exit_code != 20 && pr.exit_code != 0)) {
    throw SolverCrashed("external solver reported a status but exited with code " + std::to_string(pr.exit_code));
  }

  if (r.status == SatStatus::Sat) {
    r.model.assign(inst.n_vars + 1, false);
    for (int lit : values)
      if (static_cast<std::uint32_t>(std::abs(lit)) <= inst.n_vars) r.model[std::abs(lit)] = lit > 0;
    if (!satisfies(inst, r.model)) throw ModelInvalid("external solver model falsifies a clause");
  }
  return r;
}

} // namespace dqprep
