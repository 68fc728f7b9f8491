#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace srgraph::cli {
namespace {

namespace fs = std::filesystem;

const std::string kData = SRGRAPH_DATA_DIR;

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("srgraph_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& contents) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << contents;
    return p.string();
  }
  std::string slurp(const std::string& name) {
    std::ifstream in(dir_ / name);
    return {std::istreambuf_iterator<char>(in), {}};
  }

  fs::path dir_;
};

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(call({}).code, kUsage);
  EXPECT_EQ(call({"frobnicate"}).code, kUsage);
  EXPECT_EQ(call({"count", "--spec", "/no/such/spec.json"}).code, kUsage);
  EXPECT_EQ(call({"verify", "nonsense"}).code, kUsage);
  const std::string header_only = file("empty.csv", "x1,y\n");
  EXPECT_EQ(call({"solve", "--spec", kData + "/specs/tiny.json", "--data", header_only}).code, kUsage);
  EXPECT_EQ(call({"solve", "--spec", kData + "/specs/tiny.json"}).code, kUsage);
}

TEST_F(CliTest, Help) {
  const Invocation r = call({"--help"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("solve"), std::string::npos);
}

TEST_F(CliTest, BuildTinyDot) {
  const Invocation r = call({"build", "--spec", kData + "/specs/tiny.json"});
  ASSERT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("v0 -> v1;"), std::string::npos);
  EXPECT_NE(r.out.find("v1 -> v2;"), std::string::npos);
  const std::string json_path = (dir_ / "g.json").string();
  EXPECT_EQ(call({"build", "--spec", kData + "/specs/tiny.json", "--json", json_path}).code, kOk);
  EXPECT_NE(slurp("g.json").find("\"vertices\""), std::string::npos);
}

TEST_F(CliTest, Count) {
  const Invocation r = call({"count", "--spec", kData + "/specs/tiny.json"});
  ASSERT_EQ(r.code, kOk);
  EXPECT_EQ(r.out, "arborescences: 2\nexpressions: 2\n");
}

TEST_F(CliTest, SolveSr) {
  std::string csv = "x1,x2,y\n";
  for (int i = 0; i < 12; ++i) {
    const double a = 0.3 * i - 1.5, b = 0.7 - 0.2 * i;
    std::ostringstream row;
    row.precision(17);
    row << a << ',' << b << ',' << std::sin(a * b) << '\n';
    csv += row.str();
  }
  const std::string data = file("d.csv", csv);
  const std::string report = (dir_ / "r.json").string();
  const Invocation r = call({"solve", "--spec", kData + "/specs/default_l2_d2.json", "--data", data,
                      "--epsilon", "1e-6", "--report", report});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("sin(x1 * x2)"), std::string::npos);
  EXPECT_NE(slurp("r.json").find("\"found\": true"), std::string::npos);
}

TEST_F(CliTest, SolveSrNotFound) {
  const std::string data = file("d.csv", "x1,y\n1,5\n2,-7\n3,40\n");
  const Invocation r = call({"solve", "--spec", kData + "/specs/tiny.json", "--data", data});
  EXPECT_EQ(r.code, kNotFound);
}

TEST_F(CliTest, GraphCommands) {
  const std::string g = kData + "/graphs/small_directed.txt";
  Invocation r = call({"solve", "--graph", g});
  ASSERT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("weight: 5"), std::string::npos);
  EXPECT_EQ(call({"decide", "--graph", g, "--epsilon", "5"}).code, kOk);
  EXPECT_EQ(call({"decide", "--graph", g, "--epsilon", "4"}).code, kNotFound);
  EXPECT_EQ(call({"decide", "--graph", g, "--epsilon", "4", "--at-most"}).code, kNotFound);
  r = call({"bisect", "--graph", g, "--hi", "20"});
  ASSERT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("minimum: 5"), std::string::npos);
  EXPECT_EQ(call({"decide", "--graph", kData + "/graphs/edge.txt", "--epsilon", "3"}).code, kUsage);
}

TEST_F(CliTest, ReduceIsByteStable) {
  const std::string out1 = (dir_ / "a.txt").string();
  const std::string out2 = (dir_ / "b.txt").string();
  ASSERT_EQ(call({"reduce", "--mode", "dcstp-to-dcsap", "--graph", kData + "/graphs/edge.txt", "--out", out1}).code, kOk);
  ASSERT_EQ(call({"reduce", "--mode", "dcstp-to-dcsap", "--graph", kData + "/graphs/edge.txt", "--out", out2}).code, kOk);
  EXPECT_EQ(slurp("a.txt"), slurp("b.txt"));
  EXPECT_EQ(slurp("a.txt"), "directed 2 2\n0 1 3\n1 0 3\nterminals 2 0 1\nroot 0\ndegrees 0\n");
  const Invocation solved = call({"solve", "--graph", out1});
  EXPECT_NE(solved.out.find("weight: 3"), std::string::npos);
}

TEST_F(CliTest, VerifySuite) {
  const Invocation r = call({"verify", "bisection", "--seed", "3"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("\"passed\": true"), std::string::npos);
}

}  // namespace
}  // namespace srgraph::cli
