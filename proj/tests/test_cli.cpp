#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "biduct/json_io.hpp"

using biduct::json;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(BIDUCT_CLI) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {-1, ""};
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string spec(const std::string& name) { return std::string(BIDUCT_SPEC_DIR) + "/" + name; }
std::string data(const std::string& name) { return std::string(BIDUCT_TEST_DATA) + "/" + name; }

json payload(const std::string& text) {
  auto j = json::parse(text);
  j.erase("sidecar");
  return j;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kSmall = " --budget-restarts 4 --budget-iters 200 --ancilla-levels 2";

}  // namespace

TEST(Cli, ValidateGoodSpec) {
  const auto r = run("validate --spec " + spec("identity-qubit.json"));
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_TRUE(j["valid"].get<bool>());
  EXPECT_EQ(j["eb_verdict"], "NOT_EB");
}

TEST(Cli, ValidateReportsInvariantViolation) {
  const auto r = run("validate --spec " + data("incomplete-kraus.json"));
  ASSERT_EQ(r.code, 1);
  const auto j = json::parse(r.out);
  EXPECT_FALSE(j["valid"].get<bool>());
  EXPECT_GT(j["deviation"].get<double>(), 0.1);
  const auto pmf = json::parse(run("validate --spec " + data("bad-pmf.json")).out);
  EXPECT_NEAR(pmf["deviation"].get<double>(), 0.1, 1e-12);
}

TEST(Cli, InputErrorsExitTwo) {
  EXPECT_EQ(run("validate --spec " + data("malformed.json")).code, 2);
  EXPECT_EQ(run("validate --spec " + data("wrong-shape.json")).code, 2);
  EXPECT_EQ(run("validate").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("capacity --spec " + spec("swap.json")).code, 2);  // no seed
  EXPECT_EQ(run("capacity --spec " + spec("swap.json") + " --seed 1 --direction up").code, 2);
  EXPECT_EQ(run("region --spec " + spec("swap.json") + " --kind shannon-inner --seed 1").code, 2);
  EXPECT_EQ(run("region --spec " + spec("bmc.json") + " --kind inner --seed 1 --format xml").code, 2);
  EXPECT_EQ(run("suite lemma-star").code, 2);
  EXPECT_EQ(run("suite warp --seed 1").code, 2);
}

TEST(Cli, CapacityOfIdentityQubit) {
  const auto r = run("capacity --spec " + spec("identity-qubit.json") + " --seed 3" + kSmall);
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j["one_way_capacity"]["best_value"].get<double>(), 2.0, 1e-3);
  EXPECT_NEAR(j["bsst_capacity"]["best_value"].get<double>(), 2.0, 1e-6);
  EXPECT_LE(j["gap"].get<double>(), 1e-2);
  EXPECT_FALSE(j["one_way_capacity"].contains("certificate"));
  EXPECT_TRUE(j.contains("sidecar"));
}

TEST(Cli, RegionJsonAndCsv) {
  const auto dir = std::filesystem::temp_directory_path() / "biduct_cli_test";
  std::filesystem::create_directories(dir);
  const auto out = dir / "bmc.json";
  const auto r = run("region --spec " + spec("bmc.json") + " --kind shannon-inner --seed 2 --out " + out.string());
  ASSERT_EQ(r.code, 0);
  const auto summary = json::parse(r.out);
  EXPECT_NEAR(summary["diagonal_rate"].get<double>(), 0.6169, 1e-3);
  const auto region = json::parse(slurp(out));
  EXPECT_EQ(region["kind"], "shannon-inner");
  EXPECT_FALSE(region["heuristic"].get<bool>());
  EXPECT_EQ(region["lambdas"].size(), 11u);

  const auto csv = run("region --spec " + spec("bmc.json") + " --kind shannon-outer --seed 2 --format csv");
  ASSERT_EQ(csv.code, 0);
  EXPECT_EQ(csv.out.substr(0, 12), "r_fwd,r_bwd\n");
  std::filesystem::remove_all(dir);
}

TEST(Cli, SuiteDeterministicPayload) {
  const std::string args = "suite lemma-star --seed 11 --instances 25";
  const auto a = run(args), b = run(args + " --threads 1");
  ASSERT_EQ(a.code, 0);
  ASSERT_EQ(b.code, 0);
  EXPECT_EQ(payload(a.out).dump(), payload(b.out).dump());
  EXPECT_TRUE(json::parse(a.out)["summary"]["ok"].get<bool>());
}

TEST(Cli, SuiteConfigFile) {
  const auto cfg = std::filesystem::temp_directory_path() / "biduct_suite_cfg.json";
  std::ofstream(cfg) << R"({"seed": 4, "instances": 6, "dims": [2]})";
  const auto r = run("suite ssa --config " + cfg.string());
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["config"]["seed"], 4);
  EXPECT_EQ(j["instances"].size(), 6u);
  std::filesystem::remove(cfg);
}
