#pragma once

#include "dqprep/core.hpp"

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace dqprep {

// Largest domain for which truth tables are materialized.
inline constexpr std::size_t kTableCap = 16;

class DomainTooLarge : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A conjunction of universal literals; sorted, no two literals on one variable.
using Cube = std::vector<Lit>;

// Boolean function over a set of universal variables, stored as a cube cover:
// f(sigma) = 1 iff sigma extends some cube. The empty cover is constant 0 and
// a cover containing the empty cube is constant 1.
//
// Truth-table index convention: bit i of the index is the value of domain()[i].
class BoolFunc {
public:
  BoolFunc() = default;

  static BoolFunc constant(bool value);
  static BoolFunc literal(Lit l);
  // Cubes containing complementary literals are dropped; throws
  // std::invalid_argument if a cube mentions a variable outside domain.
  static BoolFunc from_cover(std::vector<Var> domain, std::vector<Cube> cover);
  static BoolFunc from_table(std::vector<Var> domain, std::vector<bool> table);

  const std::vector<Var>& domain() const { return domain_; }
  const std::vector<Cube>& cover() const { return cover_; }
  bool has_table() const { return table_.has_value(); }

  bool is_const_false() const { return cover_.empty(); }
  bool is_const_true() const { return cover_.size() == 1 && cover_.front().empty(); }

  // values is indexed by variable id; entries for domain variables must exist.
  bool eval(std::span<const std::uint8_t> values) const;
  // Evaluate at a truth-table index over domain().
  bool eval_index(std::uint64_t index) const;

  // Materialized view; throws DomainTooLarge beyond kTableCap.
  std::vector<bool> truth_table() const;

  // Substitute each domain variable u by the literal image(u).
  template <class Image> BoolFunc renamed(Image&& image) const;

  BoolFunc negated() const;

  // Structural: same domain and same normalized cover.
  bool operator==(const BoolFunc& o) const { return domain_ == o.domain_ && cover_ == o.cover_; }

private:
  std::vector<Var> domain_;
  std::vector<Cube> cover_;
  std::optional<std::vector<bool>> table_;
};

// Variables v such that flipping v changes f at some point.
std::vector<Var> essential_vars(const BoolFunc& f);

// Pointwise equality over the union of both domains.
bool equivalent(const BoolFunc& a, const BoolFunc& b);

template <class Image> BoolFunc BoolFunc::renamed(Image&& image) const {
  std::vector<Var> dom;
  for (Var u : domain_) dom.push_back(image(u).var());
  std::vector<Cube> cover;
  for (const Cube& c : cover_) {
    Cube m;
    for (Lit l : c) {
      const Lit img = image(l.var());
      m.push_back(l.negated() ? ~img : img);
    }
    cover.push_back(std::move(m));
  }
  return from_cover(std::move(dom), std::move(cover));
}

} // namespace dqprep
