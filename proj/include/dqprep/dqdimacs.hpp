#pragma once

// DQDIMACS: QDIMACS plus `d <evar> <uvar>... 0` lines.
//
// An existential with a `d` line depends on exactly the listed universals; one
// without depends on every universal declared before its `e` line. A `d` line
// for a variable that has no `e` line declares it existential.

#include "dqprep/core.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dqprep {

enum class ParseErrorKind {
  MalformedHeader,
  MalformedLine,
  UnknownVariable,
  DependencyOnNonUniversal,
  DuplicateQuantification,
  ClauseCountMismatch,
};

const char* to_string(ParseErrorKind k);

class ParseError : public std::runtime_error {
public:
  ParseError(ParseErrorKind kind, std::size_t line, const std::string& what);

  ParseErrorKind kind() const { return kind_; }
  std::size_t line() const { return line_; }

private:
  ParseErrorKind kind_;
  std::size_t line_;
};

struct ParseOptions {
  // Treat variables that appear only in clauses as outermost universals.
  bool lenient = false;
};

Formula parse_dqdimacs(std::istream& in, const ParseOptions& opts = {});
Formula parse_dqdimacs(std::string_view text, const ParseOptions& opts = {});
Formula read_dqdimacs_file(const std::string& path, const ParseOptions& opts = {});

std::string print_dqdimacs(const Formula& f, bool with_comments = true);
void write_dqdimacs_file(const Formula& f, const std::string& path);

} // namespace dqprep
