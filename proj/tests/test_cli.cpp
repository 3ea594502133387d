#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "quakerules/cli.hpp"

using namespace quakerules;
namespace fs = std::filesystem;

namespace {

const std::string kFixtures = std::string(QUAKERULES_SOURCE_DIR) + "/tests/fixtures";
const std::string kCatalog = kFixtures + "/synthetic_catalog.csv";

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("quakerules_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) const {
    const auto path = dir_ / name;
    std::ofstream(path, std::ios::binary) << text;
    return path.string();
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, GoldenReportAtDefaults) {
  const auto r = run({"mine", "--input", kCatalog});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out, slurp(kFixtures + "/golden_report.csv"));
  EXPECT_NE(r.err.find("skipped 1 malformed line"), std::string::npos);
}

TEST_F(CliTest, OutputFileMatchesStdout) {
  const auto path = (dir_ / "report.csv").string();
  ASSERT_EQ(run({"mine", "--input", kCatalog, "--out", path}).code, kExitOk);
  EXPECT_EQ(slurp(path), slurp(kFixtures + "/golden_report.csv"));
}

TEST_F(CliTest, TopKOneKeepsMostConfidentRule) {
  const auto r = run({"mine", "--input", kCatalog, "--top-k", "1", "--title", ""});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = parse_rule_table_csv(r.out);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].confidence, 1.0);
}

TEST_F(CliTest, DeterministicAcrossRunsAndThreads) {
  const auto a = run({"mine", "--input", kCatalog});
  const auto b = run({"mine", "--input", kCatalog, "--threads", "4"});
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, run({"mine", "--input", kCatalog}).out);
}

TEST_F(CliTest, MarkdownOutput) {
  const auto r = run({"mine", "--input", kCatalog, "--out-format", "markdown"});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out.rfind("### synthetic_catalog\n\n| Antecedent |", 0), 0u);
}

TEST_F(CliTest, StatsRowForFixture) {
  const auto r = run({"stats", "--input", kCatalog});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out, "label;n_all;n_within_borders;n_ml_ge_threshold;max_ml\nsynthetic_catalog;43;40;37;4.9\n");
}

TEST_F(CliTest, StatsOneRowPerInputInOrder) {
  const std::string row = "2019-01-01,00:00:00,38.0,30.0,5.0,,3.0,,VAN\n";
  std::vector<std::string> args{"stats"};
  for (const auto* year : {"2015", "2016", "2017", "2018", "2019"}) {
    args.push_back("--input");
    args.push_back(write(std::string(year) + ".csv", row));
  }
  const auto r = run(args);
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out,
            "label;n_all;n_within_borders;n_ml_ge_threshold;max_ml\n"
            "2015;1;1;1;3.0\n2016;1;1;1;3.0\n2017;1;1;1;3.0\n2018;1;1;1;3.0\n2019;1;1;1;3.0\n");
}

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(run({"mine"}).code, kExitUsage);
  EXPECT_EQ(run({"mine", "--input", (dir_ / "missing.csv").string()}).code, kExitUsage);
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"mine", "--input", kCatalog, "--from", "2019-13-01"}).code, kExitUsage);
  EXPECT_EQ(run({"mine", "--input", kCatalog, "--from", "2019-03-10", "--to", "2019-03-01"}).code, kExitUsage);
  EXPECT_EQ(run({"mine", "--input", kCatalog, "--min-support", "0"}).code, kExitUsage);
  EXPECT_EQ(run({"mine", "--input", kCatalog, "--format", "xml"}).code, kExitUsage);
  EXPECT_EQ(run({"mine", "--input", kCatalog, "--regions", write("empty.txt", "# nothing\n")}).code, kExitUsage);
  EXPECT_EQ(run({"mine", "--help"}).code, kExitOk);
}

TEST_F(CliTest, DataErrorsExitTwo) {
  EXPECT_EQ(run({"mine", "--input", write("empty.csv", "")}).code, kExitData);
  const auto only_noise = write("noise.csv", "date,time,lat,lon,depth_km,md,ml,mw,location\n"
                                             "2019-01-01,00:00:00,38.0,30.0,5.0,,1.0,,VAN\n");
  const auto r = run({"mine", "--input", only_noise});
  EXPECT_EQ(r.code, kExitData);
  EXPECT_NE(r.err.find("no events left"), std::string::npos);
  EXPECT_EQ(run({"mine", "--input", kCatalog, "--from", "2020-01-01"}).code, kExitData);
}

TEST_F(CliTest, DumpsBasketsAndItemsets) {
  const auto baskets = (dir_ / "baskets.txt").string(), itemsets = (dir_ / "itemsets.tsv").string();
  ASSERT_EQ(run({"mine", "--input", kCatalog, "--dump-baskets", baskets, "--dump-itemsets", itemsets}).code,
            kExitOk);
  const auto b = slurp(baskets);
  EXPECT_EQ(b.rfind("2019-03-01: ", 0), 0u);
  EXPECT_EQ(std::count(b.begin(), b.end(), '\n'), 12);
  EXPECT_NE(slurp(itemsets).find("MARMARA DENIZI\t"), std::string::npos);
}

TEST_F(CliTest, KoeriInputMatchesCanonical) {
  const auto koeri = write("k.txt",
                           "2019.03.01 01:07:13.45 39.9000 32.8000 6.0 2.1 2.3 -.- POLATLI (ANKARA) \xC4\xB0lksel\n"
                           "2019.03.01 06:18:30.00 37.8100 29.0900 7.0 -.- 2.8 -.- BOZKURT (DENIZLI) \xC4\xB0lksel\n");
  const auto csv = write("k.csv",
                         "date,time,lat,lon,depth_km,md,ml,mw,location\n"
                         "2019-03-01,01:07:13,39.9,32.8,6.0,2.1,2.3,,POLATLI (ANKARA)\n"
                         "2019-03-01,06:18:30,37.81,29.09,7.0,,2.8,,BOZKURT (DENIZLI)\n");
  const auto a = run({"mine", "--input", koeri, "--format", "koeri-text", "--title", "t"});
  const auto b = run({"mine", "--input", csv, "--title", "t"});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(parse_rule_table_csv(a.out).size(), 2u);
}
