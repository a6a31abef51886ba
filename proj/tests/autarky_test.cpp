#include "dqprep/autarky.hpp"
#include "dqprep/witness.hpp"
#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <omp.h>

using namespace dqprep;

namespace {

Formula drop_clause(Formula f, std::size_t i) {
  f.matrix.erase(f.matrix.begin() + static_cast<std::ptrdiff_t>(i));
  return f;
}

bool has_single_var_autarky(const Formula& f) {
  // Full-domain functions over one variable.
  for (const auto& a : enumerate_autarkies(f, 1))
    if (a.funcs.size() == 1) return true;
  return false;
}

} // namespace

TEST(E1Test, WorkedPicksLowestIndex) {
  const auto a = find_e1_autarky(fixtures::worked());
  ASSERT_TRUE(a);
  ASSERT_EQ(a->funcs.size(), 1u);
  EXPECT_TRUE(a->assigns(Var(5)));
  EXPECT_TRUE(a->get(Var(5))->is_const_false());
}

TEST(E1Test, KernelHasNone) {
  EXPECT_FALSE(find_e1_autarky(fixtures::worked_kernel()));
  const auto regions = forcing_regions(fixtures::worked_kernel(), Var(4));
  ASSERT_EQ(regions.size(), 2u);
  EXPECT_TRUE(regions[0].polarity);
  EXPECT_EQ(regions[0].cube, (Cube{Lit::from_dimacs(-1)}));
  EXPECT_FALSE(regions[1].polarity);
  EXPECT_EQ(regions[1].cube, (Cube{Lit::from_dimacs(-2)}));
}

TEST(E1Test, TautologicalClausesImposeNothing) {
  const Formula f = fixtures::parse("p cnf 2 1\na 1 0\ne 2 0\n1 -1 2 0\n");
  EXPECT_TRUE(forcing_regions(f, Var(2)).empty());
  const auto a = find_e1_autarky(f);
  ASSERT_TRUE(a);
  EXPECT_TRUE(a->get(Var(2))->is_const_false());
}

TEST(E1Test, CompletenessAgainstOracle) {
  for (std::uint64_t s = 0; s < 250; ++s) {
    const Formula f = fixtures::tiny(s);
    const auto a = find_e1_autarky(f);
    EXPECT_EQ(a.has_value(), has_single_var_autarky(f)) << print_dqdimacs(f);
    if (a) EXPECT_TRUE(fixtures::naive_autarky(f, *a));
  }
}

TEST(E1Test, ParallelMatchesSerial) {
  const int saved = omp_get_max_threads();
  omp_set_num_threads(4);
  for (std::uint64_t s = 0; s < 100; ++s) {
    RandomModelParams p;
    p.n_universal = 6;
    p.n_existential = 30;
    p.n_clauses = 60;
    p.clause_width = 3;
    p.seed = s;
    const Formula f = generate(p);
    EXPECT_EQ(find_e1_autarky(f), find_e1_autarky_serial(f));
  }
  omp_set_num_threads(saved);
}

TEST(E1Test, ExhaustionMatchesRestarts) {
  for (std::uint64_t s = 0; s < 60; ++s) {
    RandomModelParams p;
    p.n_universal = 5;
    p.n_existential = 40;
    p.n_clauses = 60;
    p.clause_width = 2 + s % 2;
    p.seed = s;
    Formula cur = generate(p);
    const auto run = exhaust_e1(cur);
    std::size_t i = 0;
    while (auto a = find_e1_autarky(cur)) {
      ASSERT_LT(i, run.steps.size());
      EXPECT_EQ(run.steps[i].autarky, *a);
      EXPECT_EQ(run.steps[i].removed, touched_clauses(cur, *a));
      cur = apply_autarky(cur, *a);
      ++i;
    }
    EXPECT_EQ(i, run.steps.size());
    EXPECT_EQ(run.rest, cur);
  }
}

TEST(AkTest, WorkedA0FindsY2) {
  AutarkySystemConfig cfg;
  const auto d = find_ak_autarky(fixtures::worked(), 0, cfg);
  ASSERT_TRUE(d.autarky);
  EXPECT_EQ(d.autarky->funcs.size(), 1u);
  ASSERT_TRUE(d.autarky->assigns(Var(5)));
  EXPECT_TRUE(d.autarky->get(Var(5))->is_const_false());
}

TEST(AkTest, WorkedWithoutClause3A1FindsY3) {
  AutarkySystemConfig cfg;
  const Formula f = drop_clause(fixtures::worked(), 2);
  EXPECT_FALSE(find_ak_autarky(f, 0, cfg).autarky);
  const auto d = find_ak_autarky(f, 1, cfg);
  ASSERT_TRUE(d.autarky);
  ASSERT_TRUE(d.autarky->assigns(Var(6)));
  EXPECT_TRUE(equivalent(*d.autarky->get(Var(6)), BoolFunc::literal(Lit::from_dimacs(1))));
  EXPECT_EQ(touched_clauses(f, *d.autarky), (std::vector<std::size_t>{2, 3}));
}

TEST(AkTest, KernelHasNoneUpToA2) {
  AutarkySystemConfig cfg;
  for (int k = 0; k <= 2; ++k) EXPECT_FALSE(find_ak_autarky(fixtures::worked_kernel(), k, cfg).autarky) << k;
}

TEST(AkTest, WitnessAndExpansionEncodingsAgree) {
  AutarkySystemConfig cfg;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const Formula f = fixtures::tiny(s);
    for (int k = 0; k <= 1; ++k) {
      const auto w = encode_ak(f, k, cfg, AkEncoding::Style::Witness);
      const auto e = encode_ak(f, k, cfg, AkEncoding::Style::Expansion);
      const auto rw = sat_solve(w.cnf);
      const auto re = sat_solve(e.cnf);
      EXPECT_EQ(rw.status, re.status) << "k=" << k << '\n' << print_dqdimacs(f);
      if (rw.status == SatStatus::Sat) EXPECT_TRUE(fixtures::naive_autarky(f, w.decode(rw)));
      if (re.status == SatStatus::Sat) EXPECT_TRUE(fixtures::naive_autarky(f, e.decode(re)));
    }
  }
}

TEST(AkTest, DecodedFunctionsRespectEssentialBound) {
  AutarkySystemConfig cfg;
  for (std::uint64_t s = 0; s < 150; ++s) {
    const Formula f = fixtures::tiny(s);
    for (int k = 0; k <= 2; ++k) {
      const auto d = find_ak_autarky(f, k, cfg);
      if (!d.autarky) continue;
      EXPECT_TRUE(fixtures::naive_autarky(f, *d.autarky));
      for (const auto& [y, fn] : d.autarky->funcs) EXPECT_LE(essential_vars(fn).size(), std::size_t(k));
    }
  }
}

TEST(AkTest, A2IsCompleteForSmallDependencies) {
  // With |D(y)| <= 2, every function is A2, so A2 finds an autarky iff one exists.
  AutarkySystemConfig cfg;
  for (std::uint64_t s = 0; s < 150; ++s) {
    const Formula f = fixtures::tiny(s);
    const bool exists = !enumerate_autarkies(f, f.prefix.existentials().size()).empty();
    EXPECT_EQ(find_ak_autarky(f, 2, cfg).autarky.has_value(), exists) << print_dqdimacs(f);
  }
}

TEST(EkTest, WorkedE2) {
  AutarkySystemConfig cfg;
  const auto d = find_ek_autarky(fixtures::worked(), 2, cfg);
  ASSERT_TRUE(d.autarky);
  EXPECT_TRUE(is_autarky(fixtures::worked(), *d.autarky));
  for (const auto& [y, fn] : d.autarky->funcs) EXPECT_TRUE(y == Var(5) || y == Var(6));
  EXPECT_FALSE(find_ek_autarky(fixtures::worked_kernel(), 2, cfg).autarky);
}

TEST(EkTest, PairsAgreeWithOracle) {
  // E2 finds something iff an autarky on at most two variables exists.
  AutarkySystemConfig cfg;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const Formula f = fixtures::tiny(s);
    const auto d = find_ek_autarky(f, 2, cfg);
    EXPECT_EQ(d.autarky.has_value(), !enumerate_autarkies(f, 2).empty()) << print_dqdimacs(f);
    if (d.autarky) EXPECT_LE(d.autarky->funcs.size(), 2u);
  }
}

TEST(EkTest, SingleExistentialSameAsE1) {
  AutarkySystemConfig cfg;
  const Formula f = fixtures::parse("p cnf 3 3\na 1 2 0\ne 3 0\n3 1 0\n-3 2 0\n3 -1 -2 0\n");
  EXPECT_EQ(find_ek_autarky(f, 2, cfg).autarky, find_ek_autarky(f, 1, cfg).autarky);
}

TEST(EkTest, TableBoundSkipsPairs) {
  AutarkySystemConfig cfg;
  cfg.e2_table_bound = 1;
  // Coupled pair only: y1 -> x, y2 -> -x is the only autarky.
  const Formula f = fixtures::parse("p cnf 3 3\na 1 0\ne 2 3 0\n2 3 0\n-2 -3 0\n-2 1 -3 0\n");
  const auto d = find_ek_autarky(f, 2, cfg);
  EXPECT_TRUE(d.incomplete);
  EXPECT_FALSE(d.warnings.empty());
}

TEST(WitnessTest, WorkedFirstClause) {
  const auto ws = clause_witnesses(fixtures::worked(), 0, 1);
  ASSERT_EQ(ws.size(), 2u);
  std::vector<std::string> got;
  for (const auto& w : ws) got.push_back(w.choices.at(0).fn.to_string());
  EXPECT_NE(std::find(got.begin(), got.end(), "1"), got.end());
  EXPECT_NE(std::find(got.begin(), got.end(), "-1"), got.end());
}

TEST(WitnessTest, UniversallyTautological) {
  const Formula f = fixtures::parse("p cnf 2 1\na 1 0\ne 2 0\n1 -1 2 0\n");
  const auto ws = clause_witnesses(f, 0, 1);
  ASSERT_EQ(ws.size(), 1u);
  EXPECT_EQ(ws[0].kind, WitnessKind::AlreadyTautological);
}

TEST(WitnessTest, PairWitness) {
  const Formula f = fixtures::parse("p cnf 3 1\na 1 0\ne 2 3 0\nd 2 1 0\nd 3 1 0\n2 3 0\n");
  const auto ws = clause_witnesses(f, 0, 1);
  bool found = false;
  for (const auto& w : ws) {
    if (w.kind != WitnessKind::ComplementBetweenSubstitutions) continue;
    found = true;
    EXPECT_TRUE(substituted_tautology(f, 0, w.as_autarky()));
  }
  EXPECT_TRUE(found);
}

TEST(WitnessTest, EveryWitnessIsATautology) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Formula f = fixtures::tiny(s);
    for (const auto& [ci, ws] : compile_tautology_witnesses(f, 1))
      for (const auto& w : ws)
        if (w.kind != WitnessKind::AlreadyTautological) EXPECT_TRUE(substituted_tautology(f, ci, w.as_autarky()));
  }
}
