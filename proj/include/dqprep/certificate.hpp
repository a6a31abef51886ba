#pragma once

// Reduction certificates.
//
//   dqprep-cert 1
//   orig <sha256 of the original>
//   kernel <sha256 of the kernel>
//   steps <sha256 of the step lines below>
//   autarky
//   func <evar> <domain vars> : <cube> | <cube> ...   (empty = 0, TRUE = 1)
//   removes <clause>... 0                            (1-based, current formula)
//
// Digests are taken over the canonical DQDIMACS rendering.

#include "dqprep/core.hpp"
#include "dqprep/oracle.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dqprep {

struct CertificateStep {
  Autarky autarky;
  // 0-based indices into the formula the step is applied to.
  std::vector<std::size_t> removed;

  bool operator==(const CertificateStep&) const = default;
};

struct ReductionCertificate {
  std::string original_hash;
  std::string kernel_hash;
  std::vector<CertificateStep> steps;
  // Digest of the rendered steps; filled by parse_certificate, checked when set.
  std::string steps_hash;
  bool incomplete = false;

  bool operator==(const ReductionCertificate&) const = default;
};

class CertificateFormatError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::string write_certificate(const ReductionCertificate& cert);
std::string steps_digest(const ReductionCertificate& cert);
ReductionCertificate parse_certificate(std::string_view text);

struct CertificateCheck {
  bool ok = false;
  // 0: before the first step; i: step i (1-based); steps+1: final comparison.
  std::size_t failed_at = 0;
  std::string diagnostic;
};

// Replays the steps with the oracle only.
CertificateCheck check_certificate(const Formula& original, const Formula& kernel, const ReductionCertificate& cert);
// Same, starting from the certificate text (steps digest included).
CertificateCheck check_certificate_text(const Formula& original, const Formula& kernel, std::string_view text);

} // namespace dqprep
