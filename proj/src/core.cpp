#include "dqprep/core.hpp"

#include "dqprep/dqdimacs.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <sstream>

namespace dqprep {

Clause::Clause(std::vector<Lit> lits) : lits_(std::move(lits)) {
  std::sort(lits_.begin(), lits_.end());
  lits_.erase(std::unique(lits_.begin(), lits_.end()), lits_.end());
}

Clause::Clause(std::initializer_list<int> dimacs) {
  std::vector<Lit> lits;
  lits.reserve(dimacs.size());
  for (int v : dimacs) lits.push_back(Lit::from_dimacs(v));
  *this = Clause(std::move(lits));
}

bool Clause::contains(Lit l) const { return std::binary_search(lits_.begin(), lits_.end(), l); }

bool Clause::contains_var(Var v) const { return contains(Lit(v, false)) || contains(Lit(v, true)); }

bool Clause::is_tautological() const {
  for (std::size_t i = 1; i < lits_.size(); ++i)
    if (lits_[i - 1].var() == lits_[i].var()) return true;
  return false;
}

void Prefix::grow(Var v) {
  if (v.id >= kinds_.size()) {
    kinds_.resize(v.id + 1, Quant::None);
    deps_.resize(v.id + 1);
  }
}

void Prefix::add_universal(Var v) {
  grow(v);
  kinds_[v.id] = Quant::Universal;
  universals_.push_back(v);
}

void Prefix::prepend_universal(Var v) {
  grow(v);
  kinds_[v.id] = Quant::Universal;
  universals_.insert(universals_.begin(), v);
}

void Prefix::add_existential(Var v, std::vector<Var> deps) {
  grow(v);
  kinds_[v.id] = Quant::Existential;
  existentials_.push_back(v);
  deps_[v.id] = std::move(deps);
}

void Prefix::set_deps(Var y, std::vector<Var> deps) {
  grow(y);
  std::sort(deps.begin(), deps.end());
  deps.erase(std::unique(deps.begin(), deps.end()), deps.end());
  deps_[y.id] = std::move(deps);
}

const std::vector<Var>& Prefix::deps(Var y) const {
  static const std::vector<Var> none;
  return y.id < deps_.size() ? deps_[y.id] : none;
}

bool Prefix::depends_on(Var y, Var u) const {
  const auto& d = deps(y);
  return std::binary_search(d.begin(), d.end(), u);
}

std::uint32_t Prefix::max_var() const {
  std::uint32_t m = 0;
  for (Var v : universals_) m = std::max(m, v.id);
  for (Var v : existentials_) m = std::max(m, v.id);
  return m;
}

bool Prefix::operator==(const Prefix& o) const {
  if (universals_ != o.universals_ || existentials_ != o.existentials_) return false;
  for (Var y : existentials_)
    if (deps(y) != o.deps(y)) return false;
  return true;
}

bool same_clause_multiset(std::span<const Clause> a, std::span<const Clause> b) {
  if (a.size() != b.size()) return false;
  std::vector<Clause> sa(a.begin(), a.end());
  std::vector<Clause> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  return sa == sb;
}

std::vector<Var> occurring_existentials(const Formula& f) {
  std::vector<Var> out;
  for (const Clause& c : f.matrix)
    for (Lit l : c)
      if (f.prefix.is_existential(l.var())) out.push_back(l.var());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr);
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xf]);
  }
  return out;
}

std::string content_digest(const Formula& f) { return sha256_hex(print_dqdimacs(f, false)); }

bool ValidationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const InvariantCheck& c) { return c.ok; });
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  os << "c universals " << n_universals << " existentials " << n_existentials << " clauses " << n_clauses
     << '\n';
  for (const auto& c : checks) {
    os << "c " << (c.ok ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) os << ": " << c.detail;
    os << '\n';
  }
  os << "c widths";
  for (auto [w, n] : width_histogram) os << ' ' << w << ':' << n;
  os << "\nc dependency-sizes";
  for (auto [w, n] : dependency_histogram) os << ' ' << w << ':' << n;
  os << "\nc tautological " << tautological_clauses << '\n';
  return os.str();
}

ValidationReport validate(const Formula& f) {
  ValidationReport r;
  const Prefix& p = f.prefix;
  r.n_universals = p.universals().size();
  r.n_existentials = p.existentials().size();
  r.n_clauses = f.matrix.size();

  auto fail = [](InvariantCheck& c, std::string msg) {
    if (c.ok) c.detail = std::move(msg);
    c.ok = false;
  };

  InvariantCheck range{"variable ids within 1..n_declared", true, {}};
  InvariantCheck disjoint{"universals and existentials disjoint", true, {}};
  std::vector<int> seen(std::max<std::uint32_t>(f.n_declared, p.max_var()) + 1, 0);
  for (Var u : p.universals()) {
    if (u.id == 0 || u.id > f.n_declared) fail(range, "universal " + std::to_string(u.id));
    if (seen[u.id]++) fail(disjoint, "variable " + std::to_string(u.id) + " quantified twice");
  }
  for (Var y : p.existentials()) {
    if (y.id == 0 || y.id > f.n_declared) fail(range, "existential " + std::to_string(y.id));
    if (seen[y.id]++) fail(disjoint, "variable " + std::to_string(y.id) + " quantified twice");
  }

  InvariantCheck deps{"dependency sets contain universals only", true, {}};
  for (Var y : p.existentials()) {
    const auto& d = p.deps(y);
    r.dependency_histogram[d.size()]++;
    for (Var u : d)
      if (!p.is_universal(u))
        fail(deps, "D(" + std::to_string(y.id) + ") lists " + std::to_string(u.id));
    if (!std::is_sorted(d.begin(), d.end()) || std::adjacent_find(d.begin(), d.end()) != d.end())
      fail(deps, "D(" + std::to_string(y.id) + ") not a sorted set");
  }

  InvariantCheck quantified{"every literal is quantified", true, {}};
  InvariantCheck canonical{"clauses sorted without duplicate literals", true, {}};
  for (std::size_t i = 0; i < f.matrix.size(); ++i) {
    const Clause& c = f.matrix[i];
    r.width_histogram[c.size()]++;
    if (c.is_tautological()) r.tautological_clauses++;
    for (Lit l : c) {
      if (l.var().id == 0 || l.var().id > f.n_declared)
        fail(range, "clause " + std::to_string(i + 1) + " literal " + std::to_string(l.to_dimacs()));
      if (p.kind(l.var()) == Quant::None)
        fail(quantified, "clause " + std::to_string(i + 1) + " literal " + std::to_string(l.to_dimacs()));
    }
    for (std::size_t j = 1; j < c.size(); ++j)
      if (!(c[j - 1] < c[j])) fail(canonical, "clause " + std::to_string(i + 1));
  }

  r.checks = {range, disjoint, deps, quantified, canonical};
  return r;
}

} // namespace dqprep
