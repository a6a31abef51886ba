#pragma once

// Domain model for dependency quantified Boolean formulas in prenex CNF.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dqprep {

struct Var {
  std::uint32_t id = 0;

  constexpr Var() = default;
  constexpr explicit Var(std::uint32_t i) : id(i) {}
  constexpr auto operator<=>(const Var&) const = default;
};

// A literal sorts by (var, sign) with the positive literal first.
class Lit {
public:
  constexpr Lit() = default;
  constexpr Lit(Var v, bool negated) : code_(2 * v.id + (negated ? 1u : 0u)) {}

  static Lit from_dimacs(int value) {
    return Lit(Var(static_cast<std::uint32_t>(std::abs(value))), value < 0);
  }

  constexpr Var var() const { return Var(code_ >> 1); }
  constexpr bool negated() const { return (code_ & 1u) != 0; }
  constexpr Lit operator~() const { return from_code(code_ ^ 1u); }
  constexpr std::uint32_t code() const { return code_; }
  int to_dimacs() const {
    const int v = static_cast<int>(var().id);
    return negated() ? -v : v;
  }

  static constexpr Lit from_code(std::uint32_t c) {
    Lit l;
    l.code_ = c;
    return l;
  }

  constexpr auto operator<=>(const Lit&) const = default;

private:
  std::uint32_t code_ = 0;
};

// Literals are kept sorted and duplicate-free; complementary pairs are kept.
class Clause {
public:
  Clause() = default;
  explicit Clause(std::vector<Lit> lits);
  Clause(std::initializer_list<int> dimacs);

  std::span<const Lit> lits() const { return lits_; }
  std::size_t size() const { return lits_.size(); }
  bool empty() const { return lits_.empty(); }
  auto begin() const { return lits_.begin(); }
  auto end() const { return lits_.end(); }
  const Lit& operator[](std::size_t i) const { return lits_[i]; }

  bool contains(Lit l) const;
  bool contains_var(Var v) const;
  bool is_tautological() const;

  auto operator<=>(const Clause&) const = default;

private:
  std::vector<Lit> lits_;
};

enum class Quant : std::uint8_t { None, Universal, Existential };

class Prefix {
public:
  void add_universal(Var v);
  // deps must be sorted; callers outside the parser normally go through set_deps.
  void add_existential(Var v, std::vector<Var> deps);
  void set_deps(Var y, std::vector<Var> deps);
  // Inserts an already quantified universal at the outermost position.
  void prepend_universal(Var v);

  Quant kind(Var v) const { return v.id < kinds_.size() ? kinds_[v.id] : Quant::None; }
  bool is_universal(Var v) const { return kind(v) == Quant::Universal; }
  bool is_existential(Var v) const { return kind(v) == Quant::Existential; }

  const std::vector<Var>& universals() const { return universals_; }
  const std::vector<Var>& existentials() const { return existentials_; }
  // Sorted dependency set D(y); empty for non-existentials.
  const std::vector<Var>& deps(Var y) const;
  bool depends_on(Var y, Var u) const;

  std::uint32_t max_var() const;

  bool operator==(const Prefix& o) const;

private:
  void grow(Var v);

  std::vector<Var> universals_;
  std::vector<Var> existentials_;
  std::vector<Quant> kinds_;
  std::vector<std::vector<Var>> deps_;
};

struct Formula {
  Prefix prefix;
  std::vector<Clause> matrix;
  std::uint32_t n_declared = 0;
  std::string source_name;
  std::vector<std::string> comments;

  // Structural identity: prefix, declared count and clause sequence.
  bool operator==(const Formula& o) const {
    return n_declared == o.n_declared && prefix == o.prefix && matrix == o.matrix;
  }
};

// Sorted copies of the two matrices compare equal.
bool same_clause_multiset(std::span<const Clause> a, std::span<const Clause> b);

// Existential variables that occur in at least one clause, ascending.
std::vector<Var> occurring_existentials(const Formula& f);

// Hex SHA-256 of the canonical DQDIMACS rendering (comments excluded).
std::string content_digest(const Formula& f);
std::string sha256_hex(std::string_view data);

struct InvariantCheck {
  std::string name;
  bool ok = true;
  std::string detail;
};

struct ValidationReport {
  std::vector<InvariantCheck> checks;
  std::map<std::size_t, std::size_t> width_histogram;
  std::map<std::size_t, std::size_t> dependency_histogram;
  std::size_t tautological_clauses = 0;
  std::size_t n_universals = 0;
  std::size_t n_existentials = 0;
  std::size_t n_clauses = 0;

  bool ok() const;
  std::string to_string() const;
};

ValidationReport validate(const Formula& f);

} // namespace dqprep
