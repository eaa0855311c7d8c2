#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

// Runs the CLI with stderr discarded; arguments are pasted verbatim.
CliRun cli(const std::string& args) {
  const std::string cmd = std::string(RCSP_CLI) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string sample(const char* name) { return std::string(RCSP_SAMPLES) + "/" + name; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
  return n;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(::testing::TempDir()) /
           ("rcsp_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const char* name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, PlanTrivial) {
  const CliRun r = cli("plan " + sample("trivial.json"));
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("method"), "straight_line");
  EXPECT_DOUBLE_EQ(j.at("total_length").get<double>(), 2.0);
}

TEST_F(Cli, PlanChord) {
  const CliRun r = cli("plan " + sample("chord.json"));
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("method"), "refined");
  EXPECT_NEAR(j.at("total_length").get<double>(), 4.0, 1e-6);
  EXPECT_GE(j.at("graph_solution").at("total_length").get<double>(), 4.0 - 1e-9);
  EXPECT_EQ(j.at("waypoints").size(), 4u);
}

TEST_F(Cli, PlanInfeasibleExitsTwo) { EXPECT_EQ(cli("plan " + sample("isolated.json")).code, 2); }

TEST_F(Cli, InputErrorsExitOne) {
  std::ofstream(path("bad.json")) << "{\"start\": [0,0]";
  EXPECT_EQ(cli("plan " + path("bad.json")).code, 1);
  std::ofstream(path("neg.json")) << R"({"start":[0,0],"end":[1,0],"budget":-1})";
  EXPECT_EQ(cli("plan " + path("neg.json")).code, 1);
  EXPECT_EQ(cli("plan " + path("missing.json")).code, 1);
  EXPECT_EQ(cli("frobnicate").code, 1);
}

TEST_F(Cli, PlanWritesFilesDeterministically) {
  ASSERT_EQ(cli("plan " + sample("chord.json") + " -o " + path("a.json") + " --svg " + path("a.svg") +
                " --dump-graph " + path("g.json"))
                .code,
            0);
  ASSERT_EQ(cli("plan " + sample("chord.json") + " -o " + path("b.json") + " --svg " + path("b.svg")).code, 0);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  EXPECT_EQ(slurp(path("a.svg")), slurp(path("b.svg")));
  const auto g = nlohmann::json::parse(slurp(path("g.json")));
  EXPECT_GT(g.at("nodes").size(), 2u);
}

TEST_F(Cli, CompareTable) {
  const CliRun r = cli("compare " + sample("chord.json") + " --deltas 2,4");
  ASSERT_EQ(r.code, 0);
  std::istringstream in(r.out);
  std::string header, row2, row4;
  std::getline(in, header);
  std::getline(in, row2);
  std::getline(in, row4);
  EXPECT_EQ(header, "delta,nodes,graph_len,refined_len,ms");
  const auto field = [](const std::string& row, int idx) {
    std::istringstream s(row);
    std::string f;
    for (int i = 0; i <= idx; ++i) std::getline(s, f, ',');
    return std::stod(f);
  };
  EXPECT_LE(field(row4, 2), field(row2, 2));
  EXPECT_LE(field(row2, 3), field(row2, 2) + 1e-6);
  EXPECT_LE(field(row4, 3), field(row4, 2) + 1e-6);
  EXPECT_NEAR(field(row2, 3), field(row4, 3), 1e-6);

  const CliRun md = cli("compare " + sample("chord.json") + " --deltas 2 --markdown");
  EXPECT_EQ(md.code, 0);
  EXPECT_EQ(md.out.rfind("| delta |", 0), 0u);
}

TEST_F(Cli, CompareEmptyDeltasIsUsageError) { EXPECT_EQ(cli("compare " + sample("chord.json")).code, 1); }

TEST_F(Cli, Verify) {
  const CliRun r = cli("verify " + sample("chord.json"));
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("same_sequence,true"), std::string::npos);
  EXPECT_EQ(cli("verify " + sample("isolated.json")).code, 2);
}

TEST_F(Cli, GenerateDeterministic) {
  const CliRun a = cli("generate -m 15 --bounds 0,0,18,14 --budget 3 --seed 1");
  const CliRun b = cli("generate -m 15 --bounds 0,0,18,14 --budget 3 --seed 1");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(nlohmann::json::parse(a.out).at("polytopes").size(), 15u);

  std::ofstream(path("g.json")) << a.out;
  const int code = cli("plan " + path("g.json")).code;
  EXPECT_TRUE(code == 0 || code == 2);
}

TEST_F(Cli, GenerateEmpty) {
  const CliRun r = cli("generate -m 0 -o " + path("empty.json"));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(cli("plan " + path("empty.json")).code, 2);
}

TEST_F(Cli, RenderPolygonsAndDeterminism) {
  ASSERT_EQ(cli("generate -m 15 --seed 2 -o " + path("s.json")).code, 0);
  const int code = cli("plan " + path("s.json") + " -o " + path("sol.json")).code;
  ASSERT_EQ(code, 0);
  const CliRun a = cli("render " + path("s.json") + " " + path("sol.json"));
  const CliRun b = cli("render " + path("s.json") + " " + path("sol.json"));
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(count(a.out, "<polygon "), 15u);
  EXPECT_EQ(count(a.out, "<polyline "), 2u);
  EXPECT_EQ(a.out.rfind("<?xml", 0), 0u);
  EXPECT_NE(a.out.find("</svg>"), std::string::npos);
}

TEST_F(Cli, RenderNoRegions) {
  std::ofstream(path("t.json")) << R"({"start":[0,0],"end":[2,0],"budget":3})";
  ASSERT_EQ(cli("plan " + path("t.json") + " -o " + path("t_sol.json")).code, 0);
  const CliRun r = cli("render " + path("t.json") + " " + path("t_sol.json"));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(count(r.out, "<polygon "), 0u);
  EXPECT_EQ(count(r.out, "<circle "), 2u);
  EXPECT_EQ(count(r.out, "<line "), 1u);
  EXPECT_EQ(count(r.out, "<polyline "), 0u);
}
