#include "cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <map>
#include <sstream>

#include "fixtures.hpp"
#include "hiercut/formats.hpp"

namespace fs = std::filesystem;

namespace hiercut {
namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::map<std::string, std::string> parse_report(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto tab = line.find('\t');
    if (tab != std::string::npos) kv[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return kv;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("hiercut_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    write_file(path("t6.tsv"), testing::kT6Document);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, ValidateReportsShape) {
  const auto r = run_cli({"validate", "--tree", path("t6.tsv")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "7 nodes, 4 leaves, 3 internal\nmax depth 3\n");
}

TEST_F(CliTest, SampleCutsAtZeroDropoutIsLeafSet) {
  const auto r = run_cli({"sample-cuts", "--tree", path("t6.tsv"), "--beta", "0", "--count", "1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "# beta=0 seed=0\nn3\tn4\tn5\tn6\n");

  const auto all = run_cli({"sample-cuts", "--tree", path("t6.tsv"), "--beta", "1", "--count", "3"});
  EXPECT_EQ(all.out, "# beta=1 seed=0\nn1\tn6\nn1\tn6\nn1\tn6\n");
}

TEST_F(CliTest, ErrorsAreSingleMachineLines) {
  auto r = run_cli({"validate", "--tree", path("missing.tsv")});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.err.rfind("E:io:", 0), 0u) << r.err;
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);

  write_file(path("bad.tsv"), "a\t-\nb\t-\n");
  r = run_cli({"validate", "--tree", path("bad.tsv")});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.err.rfind("E:multiple_roots:", 0), 0u) << r.err;

  r = run_cli({"validate"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.err.rfind("E:usage:", 0), 0u);

  r = run_cli({});
  EXPECT_EQ(r.code, 2);

  r = run_cli({"sample-cuts", "--tree", path("t6.tsv"), "--beta", "2"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.err.rfind("E:invalid_argument:", 0), 0u) << r.err;
}

TEST_F(CliTest, TrainThenEvalWithZeroDropout) {
  ASSERT_EQ(run_cli({"gen-synth", "--out", path("fx"), "--leaves", "6", "--depth", "2", "--dim", "8",
                     "--per-leaf", "5", "--test-per-leaf", "5", "--seed", "3"}).code,
            0);
  const auto fx = [&](const char* f) { return path("fx") + "/" + f; };
  const auto tr = run_cli({"train", "--tree", fx("tree.tsv"), "--emb", fx("emb.tsv"), "--samples",
                           fx("train.tsv"), "--out", path("p.tsv"), "--lambda", "0", "--beta", "0",
                           "--epochs", "3", "--batch-size", "10"});
  ASSERT_EQ(tr.code, 0) << tr.err;
  EXPECT_NE(tr.out.find("iterations\t9\n"), std::string::npos);
  EXPECT_TRUE(fs::exists(path("p.tsv.log.tsv")));

  const auto ev = run_cli({"eval", "--tree", fx("tree.tsv"), "--emb", fx("emb.tsv"), "--samples",
                           fx("test.tsv"), "--params", path("p.tsv"), "--betas", "0", "--T", "1",
                           "--out", path("r.tsv")});
  ASSERT_EQ(ev.code, 0) << ev.err;
  const auto kv = parse_report(ev.out);
  EXPECT_EQ(kv.at("mta"), kv.at("leaf_acc"));
  EXPECT_EQ(read_file(path("r.tsv")), ev.out);
  EXPECT_TRUE(fs::exists(path("r.tsv.cuts.tsv")));
}

TEST_F(CliTest, RepeatedRunsAreByteIdentical) {
  ASSERT_EQ(run_cli({"gen-synth", "--out", path("a"), "--leaves", "4", "--depth", "2", "--dim", "6",
                     "--per-leaf", "4", "--test-per-leaf", "4", "--seed", "5"}).code,
            0);
  ASSERT_EQ(run_cli({"gen-synth", "--out", path("b"), "--leaves", "4", "--depth", "2", "--dim", "6",
                     "--per-leaf", "4", "--test-per-leaf", "4", "--seed", "5"}).code,
            0);
  for (const char* f : {"tree.tsv", "emb.tsv", "train.tsv", "test.tsv"}) {
    EXPECT_EQ(read_file(path("a") + "/" + f), read_file(path("b") + "/" + f)) << f;
  }
  EXPECT_NE(read_file(path("a") + "/train.tsv").find("seed=5"), std::string::npos);

  for (const char* name : {"p1.tsv", "p2.tsv"}) {
    ASSERT_EQ(run_cli({"train", "--tree", path("a/tree.tsv"), "--emb", path("a/emb.tsv"), "--samples",
                       path("a/train.tsv"), "--out", path(name), "--epochs", "4", "--seed", "8"}).code,
              0);
  }
  EXPECT_EQ(read_file(path("p1.tsv")), read_file(path("p2.tsv")));
  EXPECT_EQ(read_file(path("p1.tsv.log.tsv")), read_file(path("p2.tsv.log.tsv")));
  EXPECT_NE(read_file(path("p1.tsv.log.tsv")).find("seed=8"), std::string::npos);

  std::vector<std::string> reports;
  for (int k = 0; k < 2; ++k) {
    const auto ev = run_cli({"eval", "--tree", path("a/tree.tsv"), "--emb", path("a/emb.tsv"), "--samples",
                             path("a/test.tsv"), "--params", path("p1.tsv"), "--seed", "4"});
    ASSERT_EQ(ev.code, 0);
    reports.push_back(ev.out);
  }
  EXPECT_EQ(reports[0], reports[1]);
  EXPECT_EQ(parse_report(reports[0]).at("seed"), "4");
}

TEST_F(CliTest, EvalWithoutParamsUsesIdentityPrompt) {
  ASSERT_EQ(run_cli({"gen-synth", "--out", path("z"), "--leaves", "4", "--depth", "2", "--dim", "8",
                     "--noise", "0", "--per-leaf", "2", "--test-per-leaf", "3"}).code,
            0);
  const auto ev = run_cli({"eval", "--tree", path("z/tree.tsv"), "--emb", path("z/emb.tsv"), "--samples",
                           path("z/test.tsv")});
  ASSERT_EQ(ev.code, 0) << ev.err;
  const auto kv = parse_report(ev.out);
  EXPECT_EQ(kv.at("leaf_acc"), "1");
  EXPECT_EQ(kv.at("hca"), "1");
  EXPECT_EQ(kv.at("mta"), "1");
}

TEST_F(CliTest, GenSynthRejectsSmallDimension) {
  const auto r = run_cli({"gen-synth", "--out", path("q"), "--leaves", "10", "--dim", "4"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.err.rfind("E:invalid_argument:", 0), 0u) << r.err;
}

}  // namespace
}  // namespace hiercut
