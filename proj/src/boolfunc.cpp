#include "dqprep/boolfunc.hpp"

#include <algorithm>
#include <string>

namespace dqprep {

namespace {

bool normalize_cube(Cube& c) {
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  for (std::size_t i = 1; i < c.size(); ++i)
    if (c[i - 1].var() == c[i].var()) return false;
  return true;
}

} // namespace

BoolFunc BoolFunc::constant(bool value) {
  BoolFunc f;
  if (value) f.cover_.emplace_back();
  f.table_ = std::vector<bool>{value};
  return f;
}

BoolFunc BoolFunc::literal(Lit l) { return from_cover({l.var()}, {Cube{l}}); }

BoolFunc BoolFunc::from_cover(std::vector<Var> domain, std::vector<Cube> cover) {
  BoolFunc f;
  std::sort(domain.begin(), domain.end());
  domain.erase(std::unique(domain.begin(), domain.end()), domain.end());
  f.domain_ = std::move(domain);
  for (Cube& c : cover) {
    for (Lit l : c)
      if (!std::binary_search(f.domain_.begin(), f.domain_.end(), l.var()))
        throw std::invalid_argument("cube literal " + std::to_string(l.to_dimacs()) + " outside domain");
    if (!normalize_cube(c)) continue;
    if (c.empty()) {
      f.cover_.assign(1, Cube{});
      return f;
    }
    f.cover_.push_back(std::move(c));
  }
  std::sort(f.cover_.begin(), f.cover_.end());
  f.cover_.erase(std::unique(f.cover_.begin(), f.cover_.end()), f.cover_.end());
  return f;
}

BoolFunc BoolFunc::from_table(std::vector<Var> domain, std::vector<bool> table) {
  if (!std::is_sorted(domain.begin(), domain.end()))
    throw std::invalid_argument("truth-table domain must be sorted");
  if (domain.size() > kTableCap) throw DomainTooLarge("domain exceeds table cap");
  if (table.size() != (std::size_t{1} << domain.size()))
    throw std::invalid_argument("truth-table size does not match domain");
  std::vector<Cube> minterms;
  bool all = true;
  for (std::size_t idx = 0; idx < table.size(); ++idx) {
    if (!table[idx]) {
      all = false;
      continue;
    }
    Cube c;
    for (std::size_t i = 0; i < domain.size(); ++i) c.push_back(Lit(domain[i], ((idx >> i) & 1u) == 0));
    minterms.push_back(std::move(c));
  }
  BoolFunc f = all ? from_cover(domain, {Cube{}}) : from_cover(domain, std::move(minterms));
  f.table_ = std::move(table);
  return f;
}

bool BoolFunc::eval(std::span<const std::uint8_t> values) const {
  for (const Cube& c : cover_) {
    bool sat = true;
    for (Lit l : c)
      if ((values[l.var().id] != 0) == l.negated()) {
        sat = false;
        break;
      }
    if (sat) return true;
  }
  return false;
}

bool BoolFunc::eval_index(std::uint64_t index) const {
  if (table_) return (*table_)[index];
  for (const Cube& c : cover_) {
    bool sat = true;
    for (Lit l : c) {
      const auto pos = std::lower_bound(domain_.begin(), domain_.end(), l.var()) - domain_.begin();
      if ((((index >> pos) & 1u) != 0) == l.negated()) {
        sat = false;
        break;
      }
    }
    if (sat) return true;
  }
  return false;
}

std::vector<bool> BoolFunc::truth_table() const {
  if (table_) return *table_;
  if (domain_.size() > kTableCap) throw DomainTooLarge("domain of " + std::to_string(domain_.size()) + " variables");
  std::vector<bool> t(std::size_t{1} << domain_.size(), false);
  // Mark the points of each cube by enumerating its free positions.
  for (const Cube& c : cover_) {
    std::uint64_t fixed_mask = 0;
    std::uint64_t fixed_val = 0;
    for (Lit l : c) {
      const auto pos = std::lower_bound(domain_.begin(), domain_.end(), l.var()) - domain_.begin();
      fixed_mask |= std::uint64_t{1} << pos;
      if (!l.negated()) fixed_val |= std::uint64_t{1} << pos;
    }
    const std::uint64_t free_mask = (t.size() - 1) & ~fixed_mask;
    std::uint64_t sub = 0;
    do {
      t[fixed_val | sub] = true;
      sub = (sub - free_mask) & free_mask;
    } while (sub != 0);
  }
  return t;
}

BoolFunc BoolFunc::negated() const {
  auto t = truth_table();
  t.flip();
  return from_table(domain_, std::move(t));
}

std::vector<Var> essential_vars(const BoolFunc& f) {
  const auto t = f.truth_table();
  std::vector<Var> out;
  for (std::size_t i = 0; i < f.domain().size(); ++i) {
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t idx = 0; idx < t.size(); ++idx)
      if (!(idx & bit) && t[idx] != t[idx | bit]) {
        out.push_back(f.domain()[i]);
        break;
      }
  }
  return out;
}

bool equivalent(const BoolFunc& a, const BoolFunc& b) {
  std::vector<Var> dom = a.domain();
  dom.insert(dom.end(), b.domain().begin(), b.domain().end());
  std::sort(dom.begin(), dom.end());
  dom.erase(std::unique(dom.begin(), dom.end()), dom.end());
  if (dom.size() > kTableCap) throw DomainTooLarge("union domain too large");
  std::vector<std::uint8_t> values(dom.empty() ? 1 : dom.back().id + 1, 0);
  for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << dom.size()); ++idx) {
    for (std::size_t i = 0; i < dom.size(); ++i) values[dom[i].id] = (idx >> i) & 1u;
    if (a.eval(values) != b.eval(values)) return false;
  }
  return true;
}

} // namespace dqprep
