#include "dqprep/certificate.hpp"

#include <algorithm>
#include <sstream>

namespace dqprep {

namespace {

void write_steps(std::ostream& os, const ReductionCertificate& cert) {
  for (const auto& step : cert.steps) {
    os << "autarky\n";
    for (const auto& [y, fn] : step.autarky.funcs) {
      os << "func " << y.id;
      for (Var u : fn.domain()) os << ' ' << u.id;
      os << " :";
      if (fn.is_const_true()) {
        os << " TRUE";
      } else {
        bool first = true;
        for (const Cube& c : fn.cover()) {
          if (!first) os << " |";
          first = false;
          for (Lit l : c) os << ' ' << l.to_dimacs();
        }
      }
      os << '\n';
    }
    os << "removes";
    for (std::size_t i : step.removed) os << ' ' << i + 1;
    os << " 0\n";
  }
}

[[noreturn]] void bad(std::size_t line, const std::string& msg) {
  throw CertificateFormatError("certificate line " + std::to_string(line) + ": " + msg);
}

long parse_int(const std::string& tok, std::size_t line) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(tok, &pos);
    if (pos != tok.size()) bad(line, "bad integer '" + tok + "'");
    return v;
  } catch (const std::logic_error&) {
    bad(line, "bad integer '" + tok + "'");
  }
}

std::vector<std::string> tokens(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string t; is >> t;) out.push_back(t);
  return out;
}

BoolFunc parse_func(const std::vector<std::string>& tok, std::size_t line, Var& y) {
  if (tok.size() < 3) bad(line, "short func line");
  const long yv = parse_int(tok[1], line);
  if (yv <= 0) bad(line, "bad variable");
  y = Var(static_cast<std::uint32_t>(yv));
  std::size_t i = 2;
  std::vector<Var> domain;
  for (; i < tok.size() && tok[i] != ":"; ++i) {
    const long u = parse_int(tok[i], line);
    if (u <= 0) bad(line, "bad domain variable");
    domain.push_back(Var(static_cast<std::uint32_t>(u)));
  }
  if (i == tok.size()) bad(line, "missing ':'");
  ++i;
  std::vector<Cube> cover;
  if (i < tok.size() && tok[i] == "TRUE") {
    if (i + 1 != tok.size()) bad(line, "junk after TRUE");
    cover.emplace_back();
  } else if (i < tok.size()) {
    cover.emplace_back();
    for (; i < tok.size(); ++i) {
      if (tok[i] == "|") {
        cover.emplace_back();
        continue;
      }
      const long l = parse_int(tok[i], line);
      if (l == 0) bad(line, "zero literal");
      cover.back().push_back(Lit::from_dimacs(static_cast<int>(l)));
    }
  }
  try {
    return BoolFunc::from_cover(std::move(domain), std::move(cover));
  } catch (const std::invalid_argument& e) {
    bad(line, e.what());
  }
}

} // namespace

std::string steps_digest(const ReductionCertificate& cert) {
  std::ostringstream os;
  write_steps(os, cert);
  return sha256_hex(os.str());
}

std::string write_certificate(const ReductionCertificate& cert) {
  std::ostringstream os;
  os << "dqprep-cert 1\n";
  os << "orig " << cert.original_hash << '\n';
  os << "kernel " << cert.kernel_hash << '\n';
  os << "steps " << steps_digest(cert) << '\n';
  if (cert.incomplete) os << "c incomplete\n";
  write_steps(os, cert);
  return os.str();
}

ReductionCertificate parse_certificate(std::string_view text) {
  ReductionCertificate cert;
  std::istringstream is{std::string(text)};
  std::string line;
  std::size_t n = 0;
  bool header = false;
  CertificateStep* step = nullptr;
  while (std::getline(is, line)) {
    ++n;
    const auto tok = tokens(line);
    if (tok.empty()) continue;
    const std::string& kw = tok[0];
    if (kw == "c") {
      if (tok.size() >= 2 && tok[1] == "incomplete") cert.incomplete = true;
      continue;
    }
    if (!header) {
      if (kw != "dqprep-cert" || tok.size() != 2 || tok[1] != "1") bad(n, "expected 'dqprep-cert 1'");
      header = true;
      continue;
    }
    if (kw == "orig" || kw == "kernel" || kw == "steps") {
      if (tok.size() != 2) bad(n, "expected one digest");
      (kw == "orig" ? cert.original_hash : kw == "kernel" ? cert.kernel_hash : cert.steps_hash) = tok[1];
    } else if (kw == "autarky") {
      if (step && step->removed.empty() && step->autarky.empty()) bad(n, "empty step");
      cert.steps.emplace_back();
      step = &cert.steps.back();
    } else if (kw == "func") {
      if (!step) bad(n, "func outside a step");
      Var y;
      BoolFunc fn = parse_func(tok, n, y);
      if (!step->autarky.funcs.emplace(y, std::move(fn)).second) bad(n, "variable assigned twice");
    } else if (kw == "removes") {
      if (!step) bad(n, "removes outside a step");
      if (tok.back() != "0") bad(n, "removes line must end with 0");
      for (std::size_t i = 1; i + 1 < tok.size(); ++i) {
        const long v = parse_int(tok[i], n);
        if (v <= 0) bad(n, "bad clause index");
        step->removed.push_back(static_cast<std::size_t>(v - 1));
      }
    } else {
      bad(n, "unknown keyword '" + kw + "'");
    }
  }
  if (!header) bad(n, "missing header");
  if (cert.original_hash.empty() || cert.kernel_hash.empty()) bad(n, "missing digest");
  return cert;
}

CertificateCheck check_certificate(const Formula& original, const Formula& kernel, const ReductionCertificate& cert) {
  CertificateCheck r;
  auto fail = [&r](std::size_t at, std::string msg) {
    r.ok = false;
    r.failed_at = at;
    r.diagnostic = std::move(msg);
    return r;
  };
  if (content_digest(original) != cert.original_hash) return fail(0, "original formula digest mismatch");

  // Replays on the original matrix; removed clauses are only marked.
  const std::size_t m = original.matrix.size();
  std::vector<std::vector<std::size_t>> occ(original.n_declared + 1);
  for (std::size_t ci = 0; ci < m; ++ci)
    for (Lit l : original.matrix[ci]) {
      auto& o = occ[l.var().id];
      if (o.empty() || o.back() != ci) o.push_back(ci);
    }
  std::vector<bool> alive(m, true);
  std::vector<long> tree(m + 1, 0);
  auto add = [&tree, m](std::size_t i, long d) {
    for (++i; i <= m; i += i & (~i + 1)) tree[i] += d;
  };
  auto alive_before = [&tree](std::size_t i) {
    long s = 0;
    for (; i > 0; i -= i & (~i + 1)) s += tree[i];
    return static_cast<std::size_t>(s);
  };
  for (std::size_t i = 0; i < m; ++i) add(i, 1);

  for (std::size_t i = 0; i < cert.steps.size(); ++i) {
    const auto& step = cert.steps[i];
    const std::size_t at = i + 1;
    if (step.autarky.empty()) return fail(at, "step assigns no variable");
    for (const auto& [y, fn] : step.autarky.funcs)
      if (!original.prefix.is_existential(y))
        return fail(at, "variable " + std::to_string(y.id) + " is not existential");
    if (!respects_prefix(original, step.autarky)) return fail(at, "function domain outside dependency set");
    std::vector<std::size_t> touched;
    for (const auto& [y, fn] : step.autarky.funcs)
      for (std::size_t ci : occ[y.id])
        if (alive[ci]) touched.push_back(ci);
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (std::size_t ci : touched)
      if (!substituted_tautology(original, ci, step.autarky)) return fail(at, "assignment is not an autarky");
    if (touched.empty()) return fail(at, "step touches no clause");
    std::vector<std::size_t> current;
    for (std::size_t ci : touched) current.push_back(alive_before(ci));
    auto removed = step.removed;
    std::sort(removed.begin(), removed.end());
    if (removed != current) return fail(at, "removed clauses differ from the touched clauses");
    for (std::size_t ci : touched) {
      alive[ci] = false;
      add(ci, -1);
    }
  }
  Formula cur = original;
  cur.matrix.clear();
  for (std::size_t ci = 0; ci < m; ++ci)
    if (alive[ci]) cur.matrix.push_back(original.matrix[ci]);
  const std::size_t last = cert.steps.size() + 1;
  if (!(cur == kernel)) return fail(last, "replay does not reproduce the kernel");
  if (content_digest(kernel) != cert.kernel_hash) return fail(last, "kernel digest mismatch");
  if (!cert.steps_hash.empty() && steps_digest(cert) != cert.steps_hash) return fail(last, "steps digest mismatch");
  r.ok = true;
  r.failed_at = 0;
  return r;
}

CertificateCheck check_certificate_text(const Formula& original, const Formula& kernel, std::string_view text) {
  try {
    return check_certificate(original, kernel, parse_certificate(text));
  } catch (const CertificateFormatError& e) {
    CertificateCheck r;
    r.diagnostic = e.what();
    return r;
  }
}

} // namespace dqprep
