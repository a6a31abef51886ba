#include "dqprep/dqdimacs.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

namespace dqprep {

const char* to_string(ParseErrorKind k) {
  switch (k) {
    case ParseErrorKind::MalformedHeader: return "MalformedHeader";
    case ParseErrorKind::MalformedLine: return "MalformedLine";
    case ParseErrorKind::UnknownVariable: return "UnknownVariable";
    case ParseErrorKind::DependencyOnNonUniversal: return "DependencyOnNonUniversal";
    case ParseErrorKind::DuplicateQuantification: return "DuplicateQuantification";
    case ParseErrorKind::ClauseCountMismatch: return "ClauseCountMismatch";
  }
  return "?";
}

ParseError::ParseError(ParseErrorKind kind, std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + to_string(kind) + ": " + what),
      kind_(kind), line_(line) {}

namespace {

class Parser {
public:
  Parser(std::istream& in, const ParseOptions& opts) : in_(in), opts_(opts) {}

  Formula run() {
    std::string line;
    while (std::getline(in_, line)) {
      ++lineno_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto first = line.find_first_not_of(" \t");
      if (first == std::string::npos) continue;
      const char head = line[first];
      if (head == 'c' && !in_clause_) {
        const auto text = line.find_first_not_of(" \t", first + 1);
        f_.comments.push_back(text == std::string::npos ? "" : line.substr(text));
        continue;
      }
      if (head == 'p') {
        header(line.substr(first + 1));
        continue;
      }
      if (!have_header_) throw error(ParseErrorKind::MalformedHeader, "content before `p cnf` line");
      if (head == 'a' || head == 'e') {
        if (stage_ > Stage::Quantifiers) throw error(ParseErrorKind::MalformedLine, "quantifier line out of order");
        quantifier(head == 'a' ? Quant::Universal : Quant::Existential, line.substr(first + 1));
      } else if (head == 'd') {
        if (stage_ > Stage::Dependencies) throw error(ParseErrorKind::MalformedLine, "d-line after clauses");
        stage_ = Stage::Dependencies;
        dependency(line.substr(first + 1));
      } else {
        stage_ = Stage::Clauses;
        clause_tokens(line);
      }
    }
    if (!have_header_) throw error(ParseErrorKind::MalformedHeader, "missing `p cnf` line");
    if (in_clause_) throw error(ParseErrorKind::MalformedLine, "unterminated clause at end of input");
    if (opts_.lenient) adopt_free_variables();
    if (f_.matrix.size() != declared_clauses_)
      throw error(ParseErrorKind::ClauseCountMismatch, "header declares " + std::to_string(declared_clauses_) +
                                                           " clauses, found " + std::to_string(f_.matrix.size()));
    return std::move(f_);
  }

private:
  enum class Stage { Quantifiers, Dependencies, Clauses };

  ParseError error(ParseErrorKind k, const std::string& msg) const { return {k, lineno_, msg}; }

  std::vector<long long> integers(std::string_view s) const {
    std::vector<long long> out;
    std::size_t i = 0;
    while (i < s.size()) {
      while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
      if (i == s.size()) break;
      std::size_t j = i;
      while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
      long long v = 0;
      const auto [ptr, ec] = std::from_chars(s.data() + i, s.data() + j, v);
      if (ec != std::errc() || ptr != s.data() + j)
        throw error(ParseErrorKind::MalformedLine, "not an integer: `" + std::string(s.substr(i, j - i)) + "`");
      out.push_back(v);
      i = j;
    }
    return out;
  }

  std::vector<long long> terminated(std::string_view s, const char* what) const {
    auto v = integers(s);
    if (v.empty() || v.back() != 0) throw error(ParseErrorKind::MalformedLine, std::string(what) + " not terminated by 0");
    v.pop_back();
    if (std::find(v.begin(), v.end(), 0) != v.end())
      throw error(ParseErrorKind::MalformedLine, std::string(what) + " has an embedded 0");
    return v;
  }

  Var variable(long long v) const {
    if (v <= 0 || v > static_cast<long long>(f_.n_declared))
      throw error(ParseErrorKind::UnknownVariable, "variable " + std::to_string(v) + " not declared");
    return Var(static_cast<std::uint32_t>(v));
  }

  void header(const std::string& rest) {
    if (have_header_) throw error(ParseErrorKind::MalformedHeader, "duplicate `p` line");
    std::istringstream is(rest);
    std::string fmt;
    long long n = -1;
    long long m = -1;
    std::string extra;
    if (!(is >> fmt >> n >> m) || fmt != "cnf" || n < 0 || m < 0 || (is >> extra))
      throw error(ParseErrorKind::MalformedHeader, "expected `p cnf <vars> <clauses>`");
    f_.n_declared = static_cast<std::uint32_t>(n);
    declared_clauses_ = static_cast<std::size_t>(m);
    have_header_ = true;
  }

  void quantifier(Quant q, const std::string& rest) {
    for (long long raw : terminated(rest, "quantifier line")) {
      if (raw < 0) throw error(ParseErrorKind::MalformedLine, "negative variable in quantifier line");
      const Var v = variable(raw);
      if (f_.prefix.kind(v) != Quant::None)
        throw error(ParseErrorKind::DuplicateQuantification, "variable " + std::to_string(raw) + " quantified twice");
      if (q == Quant::Universal) {
        f_.prefix.add_universal(v);
      } else {
        f_.prefix.add_existential(v, sorted(f_.prefix.universals()));
        linear_.push_back(v);
      }
    }
  }

  static std::vector<Var> sorted(std::vector<Var> v) {
    std::sort(v.begin(), v.end());
    return v;
  }

  void dependency(const std::string& rest) {
    const auto vals = terminated(rest, "d-line");
    if (vals.empty() || vals.front() < 0) throw error(ParseErrorKind::MalformedLine, "d-line needs a variable");
    const Var y = variable(vals.front());
    if (f_.prefix.is_universal(y))
      throw error(ParseErrorKind::DuplicateQuantification, "d-line for universal " + std::to_string(y.id));
    if (std::find(with_dline_.begin(), with_dline_.end(), y) != with_dline_.end())
      throw error(ParseErrorKind::DuplicateQuantification, "second d-line for " + std::to_string(y.id));
    std::vector<Var> deps;
    for (std::size_t i = 1; i < vals.size(); ++i) {
      if (vals[i] < 0) throw error(ParseErrorKind::MalformedLine, "negative variable in d-line");
      const Var u = variable(vals[i]);
      if (u == y || f_.prefix.is_existential(u))
        throw error(ParseErrorKind::DependencyOnNonUniversal,
                    std::to_string(y.id) + " cannot depend on " + std::to_string(u.id));
      if (!f_.prefix.is_universal(u))
        throw error(ParseErrorKind::UnknownVariable, "dependency " + std::to_string(u.id) + " is not quantified");
      deps.push_back(u);
    }
    if (f_.prefix.is_existential(y)) {
      f_.prefix.set_deps(y, std::move(deps));
      std::erase(linear_, y);
    } else {
      f_.prefix.add_existential(y, {});
      f_.prefix.set_deps(y, std::move(deps));
    }
    with_dline_.push_back(y);
  }

  void clause_tokens(const std::string& line) {
    for (long long raw : integers(line)) {
      if (raw == 0) {
        f_.matrix.emplace_back(std::move(pending_));
        pending_.clear();
        in_clause_ = false;
        continue;
      }
      in_clause_ = true;
      const Var v = variable(raw < 0 ? -raw : raw);
      if (f_.prefix.kind(v) == Quant::None) {
        if (!opts_.lenient)
          throw error(ParseErrorKind::UnknownVariable, "variable " + std::to_string(v.id) + " is not quantified");
        free_.push_back(v);
      }
      pending_.push_back(Lit(v, raw < 0));
    }
  }

  void adopt_free_variables() {
    std::sort(free_.begin(), free_.end());
    free_.erase(std::unique(free_.begin(), free_.end()), free_.end());
    for (auto it = free_.rbegin(); it != free_.rend(); ++it) f_.prefix.prepend_universal(*it);
    if (free_.empty()) return;
    for (Var y : linear_) {
      auto d = f_.prefix.deps(y);
      d.insert(d.end(), free_.begin(), free_.end());
      f_.prefix.set_deps(y, std::move(d));
    }
  }

  std::istream& in_;
  ParseOptions opts_;
  Formula f_;
  std::size_t lineno_ = 0;
  std::size_t declared_clauses_ = 0;
  bool have_header_ = false;
  bool in_clause_ = false;
  Stage stage_ = Stage::Quantifiers;
  std::vector<Lit> pending_;
  std::vector<Var> linear_;
  std::vector<Var> with_dline_;
  std::vector<Var> free_;
};

} // namespace

Formula parse_dqdimacs(std::istream& in, const ParseOptions& opts) { return Parser(in, opts).run(); }

Formula parse_dqdimacs(std::string_view text, const ParseOptions& opts) {
  std::istringstream is{std::string(text)};
  return parse_dqdimacs(is, opts);
}

Formula read_dqdimacs_file(const std::string& path, const ParseOptions& opts) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  Formula f = parse_dqdimacs(in, opts);
  f.source_name = path;
  return f;
}

std::string print_dqdimacs(const Formula& f, bool with_comments) {
  std::ostringstream os;
  if (with_comments)
    for (const auto& c : f.comments) os << "c " << c << '\n';
  os << "p cnf " << f.n_declared << ' ' << f.matrix.size() << '\n';
  const Prefix& p = f.prefix;
  if (!p.universals().empty()) {
    os << 'a';
    for (Var u : p.universals()) os << ' ' << u.id;
    os << " 0\n";
  }
  if (!p.existentials().empty()) {
    os << 'e';
    for (Var y : p.existentials()) os << ' ' << y.id;
    os << " 0\n";
    for (Var y : p.existentials()) {
      os << "d " << y.id;
      for (Var u : p.deps(y)) os << ' ' << u.id;
      os << " 0\n";
    }
  }
  for (const Clause& c : f.matrix) {
    for (Lit l : c) os << l.to_dimacs() << ' ';
    os << "0\n";
  }
  return os.str();
}

void write_dqdimacs_file(const Formula& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << print_dqdimacs(f);
}

} // namespace dqprep
