// Copyright 2026 The tagdiff Authors
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

#include "cli.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "support/fixtures.hpp"

namespace tagdiff::cli {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::initializer_list<std::string> args) {
  std::vector<std::string> storage = {"tagdiff"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : storage) argv.push_back(s.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("tagdiff_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
    fixture_ = (dir_ / "w.tsv").string();
    write_triple_file(fixture_, testing::fixture_w());
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
  std::string fixture_;
};

TEST_F(CliTest, StatsOnFixture) {
  const auto r = invoke({"stats", fixture_});
  EXPECT_EQ(r.code, kOk);
  EXPECT_EQ(r.out,
            "users: 2\nitems: 3\ntags: 2\nrelations: 4\ntag_assignments: 5\n"
            "rejected_lines: 0\ncollapsed_duplicates: 0\n");
}

TEST_F(CliTest, StatsOnEmptyFile) {
  std::ofstream(path("empty.tsv")).close();
  const auto r = invoke({"stats", path("empty.tsv")});
  EXPECT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("users: 0\n"), std::string::npos);
  EXPECT_NE(r.out.find("tag_assignments: 0\n"), std::string::npos);
}

TEST_F(CliTest, StatsReportsRejectedLines) {
  std::ofstream(path("bad.tsv")) << "# header\na\tb\tc\nbroken line\n";
  const auto r = invoke({"stats", path("bad.tsv")});
  EXPECT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("rejected_lines: 1\n"), std::string::npos);
  EXPECT_NE(r.err.find(":3: expected 3 tab-separated fields"), std::string::npos);
}

TEST_F(CliTest, MissingFileIsIoError) {
  const auto r = invoke({"stats", path("nope.tsv")});
  EXPECT_EQ(r.code, kIo);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, RecommendWorkedExample) {
  const auto r = invoke({"recommend", "--data", fixture_, "--user", "u1", "--algorithm",
                         "tagweighted", "-L", "10", "--no-filter"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_EQ(r.out, "1\ti3\t0.150000\n");

  const auto b = invoke({"recommend", "-d", fixture_, "-u", "u1", "-a", "baseline", "--no-filter"});
  EXPECT_EQ(b.out, "1\ti3\t0.250000\n");
}

TEST_F(CliTest, RecommendUnknownUser) {
  const auto r = invoke({"recommend", "--data", fixture_, "--user", "nobody", "--no-filter"});
  EXPECT_EQ(r.code, kUnknownUser);
}

TEST_F(CliTest, RecommendUserWithEverything) {
  write_triple_file(path("full.tsv"), std::vector<Triple>{
      {"a", "x", "t"}, {"a", "y", "t"}, {"b", "x", "s"}, {"b", "y", "r"}});
  const auto r = invoke({"recommend", "--data", path("full.tsv"), "--user", "a"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_EQ(r.out, "");
}

TEST_F(CliTest, RecommendFilteringCanEmptyTheDataset) {
  write_triple_file(path("sparse.tsv"), std::vector<Triple>{{"a", "x", "t"}, {"b", "y", "t"}});
  EXPECT_EQ(invoke({"recommend", "--data", path("sparse.tsv"), "--user", "a"}).code,
            kEmptyAfterFilter);
}

TEST_F(CliTest, RecommendFilteredFixtureDropsLonelyItems) {
  // After filtering only i2 remains and u1 already holds it.
  const auto r = invoke({"recommend", "--data", fixture_, "--user", "u1"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_EQ(r.out, "");
}

TEST_F(CliTest, SynthIsDeterministic) {
  ASSERT_EQ(invoke({"synth", "--seed", "7", "-o", path("a.tsv")}).code, kOk);
  ASSERT_EQ(invoke({"synth", "--seed", "7", "-o", path("b.tsv")}).code, kOk);
  EXPECT_EQ(slurp(path("a.tsv")), slurp(path("b.tsv")));

  SynthSpec spec;
  spec.seed = 7;
  const auto parsed = read_triple_file(path("a.tsv"));
  EXPECT_TRUE(parsed.rejected.empty());
  EXPECT_EQ(parsed.triples, generate_synthetic(spec));
}

TEST_F(CliTest, SynthMinimalSpec) {
  const auto r = invoke({"synth", "--users", "2", "--items", "2", "--tags", "1", "--mean-items", "1",
                         "-o", path("min.tsv")});
  ASSERT_EQ(r.code, kOk);
  const auto parsed = read_triple_file(path("min.tsv"));
  EXPECT_TRUE(parsed.rejected.empty());
  EXPECT_FALSE(parsed.triples.empty());
}

TEST_F(CliTest, SynthUnsatisfiableSpec) {
  EXPECT_EQ(invoke({"synth", "--items", "1"}).code, kUsage);
}

TEST_F(CliTest, EvaluateSingleAlgorithm) {
  ASSERT_EQ(invoke({"synth", "--users", "40", "--items", "60", "--tags", "8", "--mean-items", "8",
                    "-o", path("s.tsv")}).code, kOk);
  const auto r = invoke({"evaluate", "--data", path("s.tsv"), "--algorithm", "tagweighted",
                         "--runs", "2", "-o", path("out.csv")});
  ASSERT_EQ(r.code, kOk) << r.err;
  std::istringstream csv(slurp(path("out.csv")));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "algorithm,L,precision,recall,f1,runs");
  std::size_t rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    EXPECT_EQ(line.rfind("tagweighted,", 0), 0u);
    EXPECT_EQ(line.substr(line.size() - 2), ",2");
  }
  EXPECT_EQ(rows, 10u);

  const auto again = invoke({"evaluate", "--data", path("s.tsv"), "--algorithm", "tagweighted",
                             "--runs", "2"});
  EXPECT_EQ(again.out, slurp(path("out.csv")));
}

TEST_F(CliTest, EvaluateEmptyAfterFilter) {
  EXPECT_EQ(invoke({"evaluate", "--data", fixture_ + ".missing"}).code, kIo);
  write_triple_file(path("sparse.tsv"), std::vector<Triple>{{"a", "x", "t"}, {"b", "y", "t"}});
  EXPECT_EQ(invoke({"evaluate", "--data", path("sparse.tsv")}).code, kEmptyAfterFilter);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(invoke({}).code, kUsage);
  EXPECT_EQ(invoke({"evaluate"}).code, kUsage);
  EXPECT_EQ(invoke({"evaluate", "--data", fixture_, "--algorithm", "magic"}).code, kUsage);
  EXPECT_EQ(invoke({"evaluate", "--data", fixture_, "--runs", "0"}).code, kUsage);
  EXPECT_EQ(invoke({"evaluate", "--data", fixture_, "--train-fraction", "1"}).code, kUsage);
  EXPECT_EQ(invoke({"recommend", "--data", fixture_}).code, kUsage);
  EXPECT_EQ(invoke({"--help"}).code, kOk);
}

int exit_status(const std::string& command) {
  const int raw = std::system((command + " >/dev/null 2>&1").c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

TEST_F(CliTest, BinaryExitCodes) {
  const std::string bin = TAGDIFF_BINARY;
  EXPECT_EQ(exit_status(bin + " stats " + fixture_), kOk);
  EXPECT_EQ(exit_status(bin + " stats " + path("missing.tsv")), kIo);
  EXPECT_EQ(exit_status(bin + " bogus"), kUsage);
  EXPECT_EQ(exit_status(bin + " recommend --no-filter -d " + fixture_ + " -u ghost"), kUnknownUser);
}

}  // namespace
}  // namespace tagdiff::cli
