// Copyright 2026 The gfk-analogy Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "gfk/analogy_dataset.hpp"
#include "gfk/embedding_store.hpp"
#include "gtest/gtest.h"

namespace gfk {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

std::size_t count_prefix(const std::vector<std::string>& lines, const std::string& prefix) {
  std::size_t n = 0;
  for (const auto& l : lines) n += l.rfind(prefix, 0) == 0;
  return n;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("gfk_cli_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return cli::run(args, out_, err_);
  }

  // Small synthetic benchmark shared by the eval-style tests.
  void synth(const std::string& seed = "7") {
    ASSERT_EQ(run({"synth", "--n-relations", "2", "--pairs-per-relation", "10", "--dim", "16",
                   "--head-rank", "3", "--seed", seed, "--out-embeddings", path("emb.txt"),
                   "--out-questions", path("q.txt")}),
              0)
        << err_.str();
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(CliTest, BuildPpmiWritesEmbeddings) {
  {
    std::ofstream c(path("toy.txt"));
    for (int i = 0; i < 50; ++i) c << "the cat sat on the mat while the dog ran\n";
  }
  ASSERT_EQ(run({"build-ppmi", "--corpus", path("toy.txt"), "--window", "2", "--positional",
                 "false", "--min-count", "0", "--dim", "5", "--out", path("emb.txt")}),
            0)
      << err_.str();
  const auto table = load_text_embeddings(path("emb.txt"), false);
  EXPECT_EQ(table.dim(), 5);
  EXPECT_GT(table.size(), 0);
  EXPECT_NE(out_.str().find("vocab=8"), std::string::npos);
  EXPECT_EQ(run({"build-ppmi", "--corpus", path("toy.txt"), "--preset", "win5-pos", "--min-count",
                 "0", "--dim", "4", "--out", path("emb2.txt")}),
            0)
      << err_.str();
}

TEST_F(CliTest, BuildPpmiMissingCorpusExitsTwo) {
  EXPECT_EQ(run({"build-ppmi", "--corpus", path("absent.txt"), "--out", path("e.txt")}), 2);
  EXPECT_NE(err_.str().find("absent.txt"), std::string::npos);
}

TEST_F(CliTest, EvalAllMeasuresGivesFourBlocks) {
  synth();
  ASSERT_EQ(run({"eval", "--embeddings", path("emb.txt"), "--questions", path("q.txt"),
                 "--measure", "all", "--subspace-dim", "3", "--epsilon", "0.001", "--out",
                 path("report.csv")}),
            0)
      << err_.str();
  const auto csv = lines_of(slurp(path("report.csv")));
  ASSERT_GE(csv.size(), 2u);
  EXPECT_EQ(csv[0].rfind("# command=eval", 0), 0u);
  EXPECT_NE(csv[0].find("epsilon=0.001"), std::string::npos);
  EXPECT_NE(csv[0].find("subspace_dim=3"), std::string::npos);
  EXPECT_EQ(csv[1], "relation,n,measure,accuracy,avg_rank");
  EXPECT_EQ(count_prefix(csv, "micro,"), 4u);
  EXPECT_EQ(csv.size(), 2u + 4u * 3u);
  const auto summary = lines_of(out_.str());
  EXPECT_EQ(count_prefix(summary, "# CosADD "), 1u);
  EXPECT_EQ(count_prefix(summary, "# GFKCosMUL "), 1u);
}

TEST_F(CliTest, EvalSingleMeasureToStdout) {
  synth();
  ASSERT_EQ(run({"eval", "--embeddings", path("emb.txt"), "--questions", path("q.txt"),
                 "--measure", "gfkcosmul", "--subspace-dim", "3"}),
            0)
      << err_.str();
  const auto lines = lines_of(out_.str());
  EXPECT_EQ(count_prefix(lines, "micro,"), 1u);
  EXPECT_EQ(count_prefix(lines, "micro,180,GFKCosMUL,"), 1u);
  EXPECT_EQ(count_prefix(lines, "relation-"), 2u);
}

TEST_F(CliTest, EvalMarksMeasuresWithNothingEvaluated) {
  synth();
  // d = 12 exceeds every category pool.
  ASSERT_EQ(run({"eval", "--embeddings", path("emb.txt"), "--questions", path("q.txt"),
                 "--subspace-dim", "12"}),
            0)
      << err_.str();
  const auto lines = lines_of(out_.str());
  EXPECT_EQ(count_prefix(lines, "micro,0,GFKCosADD,NA,NA"), 1u);
  EXPECT_EQ(count_prefix(lines, "micro,180,CosADD,"), 1u);
  EXPECT_NE(err_.str().find("relation-0"), std::string::npos);
}

TEST_F(CliTest, EvalHoldoutFlagSwitchesProtocol) {
  synth();
  std::vector<std::string> micro;
  for (const std::string h : {"none", "answer", "question"}) {
    ASSERT_EQ(run({"eval", "--embeddings", path("emb.txt"), "--questions", path("q.txt"),
                   "--measure", "gfkcosadd", "--subspace-dim", "3", "--holdout", h}),
              0)
        << err_.str();
    const auto lines = lines_of(out_.str());
    EXPECT_NE(lines[0].find("holdout=" + h), std::string::npos);
  }
  EXPECT_EQ(run({"eval", "--embeddings", path("emb.txt"), "--questions", path("q.txt"),
                 "--holdout", "sometimes"}),
            2);
}

TEST_F(CliTest, EvalUsageErrors) {
  synth();
  EXPECT_EQ(run({"eval", "--embeddings", path("emb.txt"), "--questions", path("q.txt"),
                 "--epsilon", "0"}),
            2);
  EXPECT_EQ(run({"eval", "--embeddings", path("emb.txt")}), 2);
  EXPECT_EQ(run({"eval", "--embeddings", path("nope.txt"), "--questions", path("q.txt")}), 2);
  EXPECT_EQ(run({"eval", "--embeddings", path("emb.txt"), "--questions", path("q.txt"),
                 "--measure", "cosine"}),
            2);
  EXPECT_EQ(run({"frobnicate"}), 2);
}

TEST_F(CliTest, AnglesCsvAndUnknownRelation) {
  synth();
  ASSERT_EQ(run({"angles", "--embeddings", path("emb.txt"), "--questions", path("q.txt"),
                 "--relation", "relation-0", "--pairs", "AX,AB", "--dims", "1:5", "--out",
                 path("angles.csv"), "--kernel-dump", path("kernel.txt")}),
            0)
      << err_.str();
  const auto csv = lines_of(slurp(path("angles.csv")));
  EXPECT_EQ(csv[1], "pair,subspace_dim,angle_index,theta_degrees");
  std::size_t rows = 0;
  for (std::size_t i = 2; i < csv.size(); ++i) {
    std::stringstream ss(csv[i]);
    std::string pair, d, k, deg;
    std::getline(ss, pair, ',');
    std::getline(ss, d, ',');
    std::getline(ss, k, ',');
    std::getline(ss, deg, ',');
    EXPECT_TRUE(pair == "AX" || pair == "AB");
    const double v = std::stod(deg);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 90.0);
    ++rows;
  }
  EXPECT_EQ(rows, 2u * (1 + 2 + 3 + 4 + 5));
  EXPECT_EQ(count_prefix(lines_of(slurp(path("kernel.txt"))), "# kernel"), 5u);

  EXPECT_EQ(run({"angles", "--embeddings", path("emb.txt"), "--questions", path("q.txt"),
                 "--relation", "family"}),
            1);
  EXPECT_NE(err_.str().find("relation-0, relation-1"), std::string::npos);
}

TEST_F(CliTest, SweepRows) {
  synth();
  ASSERT_EQ(run({"sweep", "--embeddings", path("emb.txt"), "--questions", path("q.txt"), "--dims",
                 "2,3,16"}),
            0)
      << err_.str();
  const auto lines = lines_of(out_.str());
  EXPECT_EQ(lines[1], "d,measure,accuracy");
  EXPECT_EQ(count_prefix(lines, "2,"), 4u);
  EXPECT_EQ(count_prefix(lines, "3,"), 4u);
  EXPECT_EQ(count_prefix(lines, "16,GFKCosADD,NA"), 1u);
  EXPECT_EQ(count_prefix(lines, "16,CosADD,NA"), 0u);
}

TEST_F(CliTest, SynthIsReproducible) {
  synth();
  const std::string e1 = slurp(path("emb.txt"));
  const std::string q1 = slurp(path("q.txt"));
  synth();
  EXPECT_EQ(slurp(path("emb.txt")), e1);
  EXPECT_EQ(slurp(path("q.txt")), q1);
  synth("8");
  EXPECT_NE(slurp(path("emb.txt")), e1);
  const auto ds = parse_google(fs::path(path("q.txt")));
  EXPECT_EQ(ds.question_count(), 2u * 10u * 9u);
}

TEST_F(CliTest, SynthRejectsInvalidFlags) {
  EXPECT_EQ(run({"synth", "--noise", "-1", "--out-embeddings", path("e.txt"), "--out-questions",
                 path("q.txt")}),
            2);
  EXPECT_EQ(run({"synth", "--dim", "10", "--head-rank", "6", "--out-embeddings", path("e.txt"),
                 "--out-questions", path("q.txt")}),
            2);
  EXPECT_EQ(run({"synth", "--min-angle", "1.0", "--max-angle", "0.5", "--out-embeddings",
                 path("e.txt"), "--out-questions", path("q.txt")}),
            2);
}

TEST(ParseDims, Forms) {
  EXPECT_EQ(cli::parse_dims("20:100:20"), (std::vector<Index>{20, 40, 60, 80, 100}));
  EXPECT_EQ(cli::parse_dims("1:3"), (std::vector<Index>{1, 2, 3}));
  EXPECT_EQ(cli::parse_dims("5,2,9"), (std::vector<Index>{5, 2, 9}));
  EXPECT_THROW(cli::parse_dims("a:b"), Error);
  EXPECT_THROW(cli::parse_dims("5:1"), Error);
}

TEST(Binary, ExitStatusOfInstalledTool) {
  const std::string bin = GFK_CLI_PATH;
  const int ok = std::system((bin + " --help > /dev/null 2>&1").c_str());
  EXPECT_EQ(WEXITSTATUS(ok), 0);
  const int bad = std::system((bin + " build-ppmi --corpus /nonexistent/c.txt --out /tmp/x.txt"
                                     " > /dev/null 2>&1")
                                  .c_str());
  EXPECT_EQ(WEXITSTATUS(bad), 2);
}

}  // namespace
}  // namespace gfk
