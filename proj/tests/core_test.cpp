#include "dqprep/boolfunc.hpp"
#include "dqprep/core.hpp"
#include "dqprep/dqdimacs.hpp"
#include "fixtures.hpp"

#include <gtest/gtest.h>

using namespace dqprep;

TEST(LitTest, DimacsRoundTrip) {
  for (int v : {1, -1, 7, -42}) EXPECT_EQ(Lit::from_dimacs(v).to_dimacs(), v);
  const Lit l = Lit::from_dimacs(-3);
  EXPECT_EQ(l.var(), Var(3));
  EXPECT_TRUE(l.negated());
  EXPECT_EQ((~l).to_dimacs(), 3);
}

TEST(ClauseTest, SortedAndDeduplicated) {
  const Clause c{3, -1, 3, 2};
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[0].to_dimacs(), -1);
  EXPECT_TRUE(c.contains(Lit::from_dimacs(2)));
  EXPECT_FALSE(c.contains(Lit::from_dimacs(-2)));
  EXPECT_TRUE(c.contains_var(Var(3)));
  EXPECT_FALSE(c.is_tautological());
  EXPECT_TRUE((Clause{1, -1}).is_tautological());
}

TEST(PrefixTest, DependencySets) {
  const Formula f = fixtures::worked();
  EXPECT_EQ(f.prefix.universals().size(), 3u);
  EXPECT_EQ(f.prefix.deps(Var(4)), (std::vector<Var>{Var(1), Var(2)}));
  EXPECT_EQ(f.prefix.deps(Var(6)), (std::vector<Var>{Var(1)}));
  EXPECT_TRUE(f.prefix.depends_on(Var(5), Var(3)));
  EXPECT_FALSE(f.prefix.depends_on(Var(6), Var(2)));
}

TEST(ValidateTest, WorkedIsValid) {
  const auto r = validate(fixtures::worked());
  EXPECT_TRUE(r.ok()) << r.to_string();
  EXPECT_EQ(r.n_clauses, 5u);
  EXPECT_EQ(r.width_histogram.at(2), 3u);
  EXPECT_EQ(r.width_histogram.at(3), 2u);
}

TEST(ValidateTest, UnquantifiedLiteralFails) {
  Formula f = fixtures::worked();
  f.n_declared = 7;
  f.matrix.push_back(Clause{7, 4});
  EXPECT_FALSE(validate(f).ok());
}

TEST(DigestTest, IgnoresComments) {
  Formula f = fixtures::worked();
  const auto d = content_digest(f);
  f.comments.push_back("hello");
  EXPECT_EQ(content_digest(f), d);
  f.matrix.pop_back();
  EXPECT_NE(content_digest(f), d);
  EXPECT_EQ(d.size(), 64u);
}

TEST(DigestTest, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(BoolFuncTest, ConstantsAndLiterals) {
  const auto t = BoolFunc::constant(true);
  const auto z = BoolFunc::constant(false);
  std::vector<std::uint8_t> vals(4, 0);
  EXPECT_TRUE(t.eval(vals));
  EXPECT_FALSE(z.eval(vals));
  const auto nx = BoolFunc::literal(Lit::from_dimacs(-2));
  EXPECT_TRUE(nx.eval(vals));
  vals[2] = 1;
  EXPECT_FALSE(nx.eval(vals));
  EXPECT_EQ(essential_vars(nx), (std::vector<Var>{Var(2)}));
}

TEST(BoolFuncTest, TableRoundTrip) {
  // xor over (1, 3)
  const auto f = BoolFunc::from_table({Var(1), Var(3)}, {false, true, true, false});
  EXPECT_EQ(f.truth_table(), (std::vector<bool>{false, true, true, false}));
  EXPECT_EQ(essential_vars(f).size(), 2u);
  const auto g = BoolFunc::from_cover({Var(1), Var(3)}, {{Lit::from_dimacs(1), Lit::from_dimacs(-3)},
                                                          {Lit::from_dimacs(-1), Lit::from_dimacs(3)}});
  EXPECT_TRUE(equivalent(f, g));
  EXPECT_TRUE(equivalent(f.negated().negated(), f));
  EXPECT_FALSE(equivalent(f.negated(), f));
}

TEST(BoolFuncTest, InessentialDomainVariable) {
  const auto f = BoolFunc::from_cover({Var(1), Var(2)}, {{Lit::from_dimacs(1)}});
  EXPECT_EQ(essential_vars(f), (std::vector<Var>{Var(1)}));
}

TEST(BoolFuncTest, CubeOutsideDomainRejected) {
  EXPECT_THROW(BoolFunc::from_cover({Var(1)}, {{Lit::from_dimacs(2)}}), std::invalid_argument);
}
