#pragma once

#include "dqprep/autarky.hpp"
#include "dqprep/certificate.hpp"

#include <map>
#include <string>

namespace dqprep {

enum class AutarkySystem { E1, A0, A1, A2, E2 };

const char* to_string(AutarkySystem s);

struct ReductionStats {
  std::map<AutarkySystem, std::size_t> autarkies;
  std::size_t removed_clauses = 0;
  bool incomplete = false;
  std::vector<std::string> warnings;
};

struct ReductionResult {
  Formula kernel;
  ReductionCertificate certificate;
  ReductionStats stats;
};

// Enabled detectors in priority order E1, A0, A1, A2, E2.
std::vector<AutarkySystem> enabled_systems(const AutarkySystemConfig& cfg);

// Applies autarkies until no enabled detector finds one. Every applied
// autarky is re-checked by the oracle before it is recorded.
ReductionResult reduce_to_lean_kernel(const Formula& f, const AutarkySystemConfig& cfg);

} // namespace dqprep
