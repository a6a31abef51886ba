#include "dqprep/process.hpp"
#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace dqprep;

namespace {

ProcessResult run(const std::string& args) { return run_shell(std::string(DQPREP_BIN) + " " + args, 60); }

class CliTest : public ::testing::Test {
protected:
  void SetUp() override {
    dir = std::filesystem::temp_directory_path() /
          ("dqprep_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
           ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(dir);
    write("worked.dqdimacs", fixtures::kWorked);
  }
  void TearDown() override { std::filesystem::remove_all(dir); }

  std::string write(const std::string& name, const std::string& text) {
    const auto p = (dir / name).string();
    std::ofstream(p) << text;
    return p;
  }
  std::string path(const std::string& name) const { return shell_quote((dir / name).string()); }

  std::filesystem::path dir;
};

} // namespace

TEST_F(CliTest, Validate) {
  EXPECT_EQ(run("validate " + path("worked.dqdimacs")).exit_code, 0);
  write("bad.dqdimacs", "p cnf 2 1\na 1 0\ne 2 0\nd 2 3 0\n1 0\n");
  const auto r = run("validate " + path("bad.dqdimacs"));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.err.find("line 4"), std::string::npos) << r.err;
  EXPECT_EQ(run("validate " + path("missing.dqdimacs")).exit_code, 2);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run("").exit_code, 2);
  EXPECT_EQ(run("frobnicate").exit_code, 2);
  EXPECT_EQ(run("reduce --no-such-flag x").exit_code, 2);
  EXPECT_EQ(run("reduce -s e1,z9 " + path("worked.dqdimacs")).exit_code, 2);
}

TEST_F(CliTest, ReduceAndCheck) {
  const auto r = run("reduce " + path("worked.dqdimacs") + " -o " + path("k.dqdimacs") + " --emit-cert " +
                     path("c.txt") + " --stats");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(r.err.find("E1"), std::string::npos) << r.err;
  std::ifstream in(dir / "k.dqdimacs");
  const std::string kernel((std::istreambuf_iterator<char>(in)), {});
  EXPECT_EQ(fixtures::parse(kernel), fixtures::worked_kernel());
  EXPECT_EQ(run("check-cert " + path("worked.dqdimacs") + " " + path("k.dqdimacs") + " " + path("c.txt")).exit_code, 0);
  EXPECT_EQ(run("check-cert " + path("k.dqdimacs") + " " + path("k.dqdimacs") + " " + path("c.txt")).exit_code, 1);
}

TEST_F(CliTest, ReduceToStdout) {
  const auto r = run("reduce -s a0,a1 " + path("worked.dqdimacs"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(fixtures::parse(r.out), fixtures::worked_kernel());
}

TEST_F(CliTest, Solve) {
  EXPECT_EQ(run("solve " + path("worked.dqdimacs")).exit_code, 20);
  write("sat.dqdimacs", "p cnf 2 1\na 1 0\ne 2 0\n1 2 0\n");
  const auto r = run("solve " + path("sat.dqdimacs"));
  EXPECT_EQ(r.exit_code, 10);
  EXPECT_NE(r.out.find("s SATISFIABLE"), std::string::npos);
  EXPECT_EQ(run("solve --max-candidates 1 " + path("worked.dqdimacs")).exit_code, 30);
}

TEST_F(CliTest, Symmetry) {
  const auto none = run("symmetry --detect " + path("worked.dqdimacs"));
  EXPECT_EQ(none.exit_code, 0);
  EXPECT_NE(none.out.find("c no generators found"), std::string::npos);
  write("sx.dqdimacs", "p cnf 3 2\na 1 0\ne 2 3 0\nd 2 1 0\nd 3 1 0\n2 1 0\n3 1 0\n");
  EXPECT_EQ(run("symmetry --detect " + path("sx.dqdimacs")).out, "( 2 3 ) ( -2 -3 )\n");
  const auto br = run("symmetry --break " + path("sx.dqdimacs"));
  ASSERT_EQ(br.exit_code, 0);
  EXPECT_EQ(fixtures::parse(br.out).matrix.size(), 3u);
  EXPECT_NE(run("symmetry --break --mode relaxed " + path("sx.dqdimacs")).exit_code, 0);
}

TEST_F(CliTest, Sat) {
  write("c.cnf", "p cnf 2 2\n1 2 0\n-1 0\n");
  const auto r = run("sat " + path("c.cnf"));
  EXPECT_EQ(r.exit_code, 10);
  EXPECT_NE(r.out.find("v -1 2 0"), std::string::npos) << r.out;
  write("u.cnf", "p cnf 1 2\n1 0\n-1 0\n");
  EXPECT_EQ(run("sat " + path("u.cnf")).exit_code, 20);
}

TEST_F(CliTest, FuzzDeterministic) {
  const auto a = run("fuzz --seed 7 --na 3 --ne 2 -m 6");
  const auto b = run("fuzz --seed 7 --na 3 --ne 2 -m 6");
  ASSERT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(fixtures::parse(a.out).matrix.size(), 6u);
  EXPECT_EQ(run("fuzz --na 1 --ne 1 -k 3").exit_code, 2);
}

TEST_F(CliTest, FuzzCampaign) {
  const auto ok = run("fuzz -n 10 --oracle-check --target " + shell_quote(std::string(DQPREP_BIN) + " solve {file}"));
  EXPECT_EQ(ok.exit_code, 0) << ok.out << ok.err;
  const auto bad = run("fuzz -n 5 --out-dir " + path("fails") + " --target " + shell_quote("kill -SEGV $$ #"));
  EXPECT_EQ(bad.exit_code, 1);
  EXPECT_EQ(std::distance(std::filesystem::directory_iterator(dir / "fails"), {}), 5);
}

TEST_F(CliTest, Sweep) {
  const auto r = run("sweep --ratios 0,2 --samples 10 --seed 3");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(r.out, run("sweep --ratios 0,2 --samples 10 --seed 3").out);
}

TEST_F(CliTest, Ddmin) {
  const auto r = run("ddmin " + path("worked.dqdimacs") + " --mode clauses --grep UNSAT --cmd " +
                     shell_quote(std::string(DQPREP_BIN) + " solve {file}") + " -o " + path("min.dqdimacs"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  std::ifstream in(dir / "min.dqdimacs");
  const std::string text((std::istreambuf_iterator<char>(in)), {});
  EXPECT_EQ(fixtures::parse(text).matrix.size(), 2u);
  EXPECT_NE(run("ddmin " + path("worked.dqdimacs") + " --grep NOPE --cmd " +
                shell_quote(std::string(DQPREP_BIN) + " solve {file}"))
                .exit_code,
            0);
}
