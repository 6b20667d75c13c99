// Copyright 2026 The Peierls Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// End-to-end checks of the command-line tool.

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;

struct Run {
  int code = -1;
  std::string out;
};

Run Invoke(const std::string& args) {
  const std::string cmd = std::string(PEIERLS_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string Sample(const std::string& name) { return std::string(PEIERLS_SAMPLES) + "/" + name; }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("peierls-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    setenv("PEIERLS_CACHE_DIR", (dir_ / "cache").c_str(), 1);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Write(const std::string& name, const std::string& text) {
    const auto p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  fs::path dir_;
};

const std::string kGm = "--shift " + Sample("gm.json") + " --potential " + Sample("neg.json");

TEST_F(CliTest, OptimizeGoldenMean) {
  const auto r = Invoke("optimize " + kGm);
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["m"], 0.0);
  EXPECT_EQ(j["cycle"].dump(), "[[0]]");
}

TEST_F(CliTest, BarrierCsvGoldenMean) {
  const auto r = Invoke("barrier " + kGm + " --format csv");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "vertex_word,barrier_value\n0,0.0\n1,0.0\n");
}

TEST_F(CliTest, BarrierJsonHasBoundsAndCutoffs) {
  const auto r = Invoke("barrier " + kGm);
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j.contains("bounds"));
  EXPECT_EQ(j["cutoffs"].size(), 2u);
}

TEST_F(CliTest, BarrierCsvRoundTripsThroughVerify) {
  const std::string csv = (dir_ / "b.csv").string();
  const std::string renewal = "--shift " + Sample("renewal_2i.json") + " --potential " +
                              Sample("minus_x0.json") + " --max-letter 12";
  ASSERT_EQ(Invoke("barrier " + renewal + " --format csv --out " + csv).code, 0);
  const auto r = Invoke("subaction verify " + renewal + " --values " + csv + " --assert");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["is_subaction"]);
  EXPECT_TRUE(j["is_calibrated"]);
  EXPECT_TRUE(j["supp_in_contact"]);
}

TEST_F(CliTest, VerifyAssertFailsOnViolation) {
  const std::string bad = Write("bad.csv", "vertex_word,value\n0,0.0\n1,5.0\n");
  EXPECT_EQ(Invoke("subaction verify " + kGm + " --values " + bad).code, 0);
  EXPECT_EQ(Invoke("subaction verify " + kGm + " --values " + bad + " --assert").code, 1);
}

TEST_F(CliTest, CompareUpToConstant) {
  const std::string a = Write("a.csv", "vertex_word,value\n0,0.0\n1,0.0\n");
  const std::string b = Write("b.csv", "vertex_word,value\n0,3.0\n1,3.0\n");
  const auto r = Invoke("subaction compare " + kGm + " --values " + b + " --against " + a + " --assert");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["constant"], 3.0);
}

TEST_F(CliTest, DemoRenewal) {
  const auto r = Invoke("demo renewal --a 2 --b 0 --stages 6,12,24 --scan-to 23");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["m"], 0.0);
  EXPECT_EQ(j["verdicts"]["bp"], "REFUTED");
  EXPECT_EQ(j["verdicts"]["boundedness"], "DIVERGENT");
  EXPECT_NE(j["conclusion"].get<std::string>().find("no bounded calibrated subaction"), std::string::npos);
  for (const auto& f : j["probe"]["floors"]) {
    const int l = f["letter"];
    if (l % 2 == 1) {
      EXPECT_EQ(f["floor"], -(l + 1.0));
    }
  }
}

TEST_F(CliTest, ConvergeWritesCsv) {
  const std::string csv = (dir_ / "family.csv").string();
  const auto r = Invoke("converge --shift " + Sample("renewal_2i.json") + " --potential " +
                        Sample("minus_x0.json") + " --stages 6,12 --letters 1,3 --scan-to 11 --csv " + csv);
  ASSERT_EQ(r.code, 0);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "stage,vertex_word,barrier_value");
}

TEST_F(CliTest, InputErrorsExitTwo) {
  EXPECT_EQ(Invoke("optimize --shift " + Sample("missing.json") + " --potential " + Sample("neg.json")).code, 2);
  EXPECT_EQ(Invoke("optimize --shift " + Sample("renewal_2i.json") + " --potential " + Sample("neg.json")).code, 2);
  EXPECT_EQ(Invoke("optimize --shift " + Sample("neg.json") + " --potential " + Sample("neg.json")).code, 2);
  EXPECT_EQ(Invoke("optimize " + kGm + " --stages 1,2").code, 2);
  EXPECT_EQ(Invoke("barrier " + kGm + " --format xml").code, 2);
  EXPECT_EQ(Invoke("converge " + kGm + " --stages 2,1").code, 2);
  EXPECT_EQ(Invoke("frobnicate").code, 2);
  const std::string oracle = Write("oracle.json", R"({"kind":"oracle"})");
  EXPECT_EQ(Invoke("shift check --shift " + oracle).code, 2);
}

TEST_F(CliTest, ShiftCheck) {
  const auto r = Invoke("shift check --shift " + Sample("renewal_i_plus_1.json"));
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["bp"]["status"], "SATISFIED");
  EXPECT_EQ(j["bi"]["status"], "REFUTED");
}

TEST_F(CliTest, RepeatedRunsAreByteIdentical) {
  const std::vector<std::string> commands{"demo renewal --stages 6,12,24 --scan-to 23",
                                          "barrier " + kGm, "optimize " + kGm};
  for (const auto& args : commands) {
    const auto first = Invoke(args), second = Invoke(args);
    EXPECT_EQ(first.code, 0) << args;
    EXPECT_EQ(first.out, second.out) << args;
  }
  const std::string demo = "demo renewal --stages 6,12,24 --scan-to 23";
  EXPECT_EQ(Invoke(demo).out, Invoke(demo + " --no-cache").out);
}

}  // namespace
