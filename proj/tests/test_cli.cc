#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.h"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "zipfsketch");
  std::ostringstream out, err;
  const int code = zipfsketch::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST(Cli, GenZipfToStdout) {
  const auto r = run({"gen-zipf", "--n", "4", "--alpha", "1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "1,0.5,0.333333333,0.25\n");
}

TEST(Cli, GenZipfToFileCarriesMetadata) {
  const auto path = std::filesystem::temp_directory_path() / "zipfsketch_cli_gen.csv";
  const auto r = run({"gen-zipf", "--n", "3", "--alpha", "2", "--out", path.string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(slurp(path), "# alpha=2\n# n=3\n1,0.25,0.111111111\n");
  std::filesystem::remove(path);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  const auto r = run({"gen-zipf", "--n", "abc"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  EXPECT_EQ(run({"gen-zipf", "--n", "0"}).code, 2);
  EXPECT_EQ(run({"sweep", "--algorithm", "CS", "--k", "2", "--trials", "1", "--budgets", "100"})
                .code,
            2);
  EXPECT_EQ(run({"sweep", "--metric", "l2"}).code, 2);
  EXPECT_EQ(run({"sweep", "--oracle", "noisy:3"}).code, 2);
  EXPECT_EQ(run({"sweep", "--budgets", "5:1:1"}).code, 2);
}

TEST(Cli, HelpExitsZero) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("table5"), std::string::npos);
}

TEST(Cli, SweepCsv) {
  const auto r = run({"sweep", "--n", "500", "--algorithm", "LCM", "--budgets", "100,200",
                      "--trials", "3", "--seed", "7"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("# seed=7"), std::string::npos);
  EXPECT_NE(r.out.find("# oracle=perfect"), std::string::npos);
  EXPECT_NE(r.out.find("\nLCM,1,200,20,160,"), std::string::npos);
}

TEST(Cli, SweepSvgAndJson) {
  const auto svg = run({"sweep", "--n", "500", "--budgets", "100,200", "--trials", "2",
                        "--format", "svg"});
  ASSERT_EQ(svg.code, 0) << svg.err;
  EXPECT_NE(svg.out.find("</svg>"), std::string::npos);
  const auto json = run({"sweep", "--n", "500", "--budgets", "100", "--trials", "2",
                         "--format", "json"});
  ASSERT_EQ(json.code, 0);
  EXPECT_NE(json.out.find("\"seed\": \"42\""), std::string::npos);
}

TEST(Cli, Table5Wide) {
  const auto r = run({"table5", "--n", "1000", "--budgets", "300:500:100", "--trials", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("B,CM k=1,CM k=2,L-CM,CS k=1,CS k=3,L-CS\n"), std::string::npos);
  EXPECT_NE(r.out.find("\n500,"), std::string::npos);
  EXPECT_NE(r.out.find("# metric=raw"), std::string::npos);
}

TEST(Cli, FitFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "zipfsketch_cli_fit.csv";
  ASSERT_EQ(run({"sweep", "--n", "2000", "--algorithm", "CM", "--budgets", "100:400:100",
                 "--trials", "4", "--out", path.string()})
                .code,
            0);
  const auto r = run({"fit", "--in", path.string(), "--algorithm", "CM", "--predictor", "cm"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("algorithm,k,predictor,points,slope"), std::string::npos);
  EXPECT_NE(r.out.find("\nCM,1,"), std::string::npos);
  const auto too_few = run({"fit", "--in", path.string(), "--algorithm", "CS"});
  EXPECT_EQ(too_few.code, 2);
  std::filesystem::remove(path);
  EXPECT_EQ(run({"fit", "--in", "/nonexistent/report.csv"}).code, 1);
}

TEST(Cli, LookupAndNoisy) {
  const auto l = run({"lookup", "--n", "1000", "--T", "10", "--C", "5,20", "--trials", "5"});
  ASSERT_EQ(l.code, 0) << l.err;
  EXPECT_NE(l.out.find("\n20,"), std::string::npos);
  const auto n = run({"noisy", "--n", "1000", "--budgets", "300", "--trials", "3",
                      "--deltas", "0,1"});
  ASSERT_EQ(n.code, 0) << n.err;
  EXPECT_NE(n.out.find("noisy:1"), std::string::npos);
}

TEST(Cli, ExactCheck) {
  const auto r = run({"exact-check", "--trials", "3000"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("OK 96/96"), std::string::npos);
}

TEST(Cli, BudgetParsing) {
  using zipfsketch::cli::parse_budgets;
  EXPECT_EQ(parse_budgets("1000:1400:200"), (std::vector<std::size_t>{1000, 1200, 1400}));
  EXPECT_EQ(parse_budgets("5, 7"), (std::vector<std::size_t>{5, 7}));
  EXPECT_THROW(parse_budgets("1:2"), std::invalid_argument);
  EXPECT_THROW(parse_budgets("-4"), std::invalid_argument);
  EXPECT_THROW(parse_budgets(""), std::invalid_argument);
  EXPECT_THROW(zipfsketch::cli::parse_number_list("0.1,x"), std::invalid_argument);
}
