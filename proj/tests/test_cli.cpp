#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "divstab/cli.hpp"
#include "divstab/io.hpp"
#include "json.hpp"
#include "test_support.hpp"

using namespace divstab;
using divstab::testing::fixture;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("divstab_cli_" + name)).string();
}

}  // namespace

TEST(Cli, SolveTriangle) {
  const CliRun r = run({"solve", fixture("triangle.json")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["mode"], "exact");
  EXPECT_EQ(doc["values"]["ab"], "3/2");
  EXPECT_EQ(doc["values"]["bc"], "3/2");
  EXPECT_EQ(doc["values"]["ca"], "3/2");
  EXPECT_EQ(doc["instance_sha256"], instance_sha256(divstab::testing::load_fixture("triangle.json")));
}

TEST(Cli, SolveIsDeterministic) {
  for (const char* name : {"triangle.json", "star.json", "two_firms.json", "hyperedge.json"}) {
    const CliRun a = run({"solve", fixture(name)});
    const CliRun b = run({"solve", fixture(name)});
    EXPECT_EQ(a.code, kExitOk);
    EXPECT_EQ(a.out, b.out);
  }
}

TEST(Cli, SolveWritesTraceAndOutputFile) {
  const std::string out = temp_path("two_firms_out.json");
  const std::string trace = temp_path("two_firms_trace.json");
  const CliRun r = run({"solve", fixture("two_firms.json"), "-o", out, "--trace", trace});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  const auto doc = nlohmann::json::parse(read_file(out));
  EXPECT_EQ(doc["values"]["e1"], "3/2");
  const auto t = nlohmann::json::parse(read_file(trace));
  EXPECT_EQ(t["iterations"], 2);
  EXPECT_EQ(t["class_histogram"]["positive"], 1);
  EXPECT_EQ(t["class_histogram"]["terminal"], 1);
  EXPECT_TRUE(t["xi"].is_array());
}

TEST(Cli, SolveFloatMode) {
  const CliRun r = run({"solve", fixture("star.json"), "--mode", "float"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["mode"], "float");
  EXPECT_EQ(run({"solve", fixture("star.json"), "--mode", "float", "--tol", "0"}).code, kExitUsage);
}

TEST(Cli, InvalidInstanceExitsTwoWithViolations) {
  const CliRun r = run({"solve", fixture("invalid.json")});
  EXPECT_EQ(r.code, kExitInvalidInstance);
  const auto diag = nlohmann::json::parse(r.err.substr(0, r.err.find('\n')));
  EXPECT_EQ(diag["exit"], 2);
  EXPECT_GE(diag["violations"].size(), 3u);
}

TEST(Cli, MalformedJsonAndUsageExitOne) {
  EXPECT_EQ(run({"solve", fixture("not_json.json")}).code, kExitUsage);
  EXPECT_EQ(run({"solve"}).code, kExitUsage);
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run({"solve", fixture("star.json"), "--mode", "fuzzy"}).code, kExitUsage);
}

TEST(Cli, CheckReportsBlockingEdge) {
  const CliRun bad = run({"check", fixture("single_edge.json"), fixture("zero_assignment.json")});
  EXPECT_EQ(bad.code, kExitUnstable);
  const auto report = nlohmann::json::parse(bad.out);
  EXPECT_FALSE(report["stable"]);
  ASSERT_EQ(report["blocking_edges"].size(), 1u);
  EXPECT_EQ(report["blocking_edges"][0]["edge"], "e");

  const CliRun good = run({"check", fixture("single_edge.json"), fixture("stable_assignment.json")});
  EXPECT_EQ(good.code, kExitOk) << good.err;
  EXPECT_TRUE(nlohmann::json::parse(good.out)["stable"]);
}

TEST(Cli, CheckAcceptsSolverOutput) {
  const std::string out = temp_path("triangle_solution.json");
  ASSERT_EQ(run({"solve", fixture("triangle.json"), "-o", out}).code, kExitOk);
  EXPECT_EQ(run({"check", fixture("triangle.json"), out}).code, kExitOk);
  // The assignment names the triangle by hash, so another instance is refused.
  EXPECT_EQ(run({"check", fixture("star.json"), out}).code, kExitUsage);
}

TEST(Cli, CheckFloatAssignment) {
  const std::string out = temp_path("star_float.json");
  ASSERT_EQ(run({"solve", fixture("star.json"), "--mode", "float", "-o", out}).code, kExitOk);
  EXPECT_EQ(run({"check", fixture("star.json"), out}).code, kExitOk);
}

TEST(Cli, GenIsDeterministicAndValid) {
  const CliRun a = run({"gen", "--kind", "graph", "--vertices", "6", "--density", "0.5", "--denominator", "4",
                     "--seed", "17"});
  const CliRun b = run({"gen", "--kind", "graph", "--vertices", "6", "--density", "0.5", "--denominator", "4",
                     "--seed", "17"});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  const Instance inst = parse_instance(a.out);
  EXPECT_EQ(inst.kind(), Kind::graph);
  EXPECT_EQ(inst.num_vertices(), 6u);
  EXPECT_EQ(run({"gen", "--density", "2"}).code, kExitUsage);
}

TEST(Cli, CompareAgrees) {
  const CliRun r = run({"compare", fixture("triangle.json"), fixture("star.json"), fixture("hyperedge.json"),
                     "--jobs", "2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    EXPECT_EQ(nlohmann::json::parse(line)["verdict"], "AGREE");
    ++count;
  }
  EXPECT_EQ(count, 3);
}

TEST(Cli, Enumerate) {
  const CliRun r = run({"enumerate", fixture("triangle.json"), "--step", "1/2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["count"], 1);
  EXPECT_EQ(doc["stable"][0]["ab"], "3/2");
  EXPECT_EQ(run({"enumerate", fixture("triangle.json"), "--step", "zero"}).code, kExitUsage);
}
