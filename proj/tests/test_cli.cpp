#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "cli.hpp"
#include <nlohmann/json.hpp>

namespace harment {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> fields(const std::string& row) {
  std::vector<std::string> out;
  std::istringstream in(row);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  return out;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("harment_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write_spec(const std::string& name, const std::string& body) {
    const auto p = dir_ / name;
    std::ofstream(p) << body;
    return p.string();
  }

  fs::path dir_;
};

TEST_F(CliTest, ClassifyEtaChains) {
  auto r = run({"classify", "--eta", "1.2", "--n", "64"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["kind"], "Regular");

  r = run({"classify", "--eta", "0.6", "--n", "64"});
  EXPECT_EQ(r.code, 0);
  const auto doc = json::parse(r.out);
  EXPECT_EQ(doc["kind"], "Singular");
  EXPECT_EQ(doc["widom_coefficient"], 0.5);
}

TEST_F(CliTest, ClassifyOnSiteOnlyFile) {
  const auto path = write_spec("v0.json",
                               R"({"dimension":1,"extents":[16],"coefficients":[{"lag":[0],"value":2}]})");
  const auto r = run({"classify", "--spec", path});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["kind"], "Regular");
}

TEST_F(CliTest, SpecErrorsExitWithTwo) {
  EXPECT_EQ(run({"classify", "--eta", "1.0", "--n", "64"}).code, 2);
  const auto asym = write_spec("asym.json", R"({"dimension":1,"extents":[8],"coefficients":
      [{"lag":[0],"value":3},{"lag":[1],"value":1},{"lag":[-1],"value":0.5}]})");
  const auto r = run({"classify", "--spec", asym});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("NotSymmetric"), std::string::npos);
  EXPECT_EQ(run({"classify"}).code, 2);
  EXPECT_EQ(run({"classify", "--eta", "1.2", "--n", "64", "--spec", asym}).code, 2);
  EXPECT_EQ(run({"classify", "--eta", "1.2"}).code, 2);
  EXPECT_EQ(run({"nonsense"}).code, 2);
  EXPECT_EQ(run({"report", "--eta", "1.2", "--n", "64", "--n1", "64"}).code, 2);
  EXPECT_EQ(run({"classify", "--eta", "1.2", "--n", "64", "--tol-override", "bogus=1"}).code, 2);
  EXPECT_EQ(run({"classify", "--eta", "1.2", "--n", "64", "--tol-override", "root"}).code, 2);
}

TEST_F(CliTest, NumericalFailureExitsWithThree) {
  const auto r = run({"report", "--eta", "0.6", "--n", "128", "--n1", "40", "--tol-override",
                      "identity_agreement=1e-300"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("NumericalIntegrity"), std::string::npos);
}

TEST_F(CliTest, IoFailureExitsWithFour) {
  const auto blocker = dir_ / "file";
  std::ofstream(blocker) << "x";
  EXPECT_EQ(run({"report", "--eta", "1.2", "--n", "64", "--n1", "8", "--out", (blocker / "sub").string()}).code,
            4);
  EXPECT_EQ(run({"classify", "--spec", (dir_ / "missing.json").string()}).code, 4);
}

TEST_F(CliTest, ReportRowsHonourBoundsAndComplement) {
  const auto a = lines(run({"report", "--eta", "1.2", "--n", "128", "--n1", "32"}).out);
  const auto b = lines(run({"report", "--eta", "1.2", "--n", "128", "--n1", "96"}).out);
  ASSERT_EQ(a.size(), 3u);
  EXPECT_EQ(a[0].rfind("# harment 1.0.0 config=", 0), 0u);
  EXPECT_EQ(a[1], "N,N1,S,I,lower,upper,xi,decay_class");
  const auto fa = fields(a[2]), fb = fields(b[2]);
  const double s = std::stod(fa[2]), i = std::stod(fa[3]), upper = std::stod(fa[5]);
  EXPECT_LE(i, s);
  EXPECT_LE(s, upper);
  EXPECT_NEAR(s, std::stod(fb[2]), 1e-8);
  EXPECT_EQ(fa[7], "Exponential");
}

TEST_F(CliTest, ReportUncoupledFileHasZeroEntropy) {
  const auto path = write_spec("uncoupled.json",
                               R"({"dimension":1,"extents":[32],"coefficients":[{"lag":[0],"value":2}]})");
  const auto r = run({"report", "--spec", path, "--n1", "10"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NEAR(std::stod(fields(lines(r.out)[2])[2]), 0.0, 1e-12);
}

TEST_F(CliTest, ReportJsonAndFiles) {
  const auto r = run({"report", "--eta", "1.2", "--n", "64", "--n1", "16", "--json", "--out",
                      (dir_ / "rep").string()});
  EXPECT_EQ(r.code, 0);
  const auto doc = json::parse(r.out);
  EXPECT_EQ(doc["mu_spectrum"].size(), 16u);
  EXPECT_TRUE(doc["szego_lower_bound"].is_number());
  EXPECT_TRUE(fs::exists(dir_ / "rep" / "report.csv"));
  EXPECT_EQ(read_file(dir_ / "rep" / "report.json"), r.out);
}

TEST_F(CliTest, TwoDimensionalReport) {
  const auto path = write_spec("grid.json", R"({"dimension":2,"extents":[8,8],"coefficients":
      [{"lag":[0,0],"value":5},{"lag":[1,0],"value":-1},{"lag":[0,1],"value":-1}]})");
  const auto r = run({"report", "--spec", path, "--n1", "3x2"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(fields(lines(r.out)[2])[0], "8x8");
  EXPECT_EQ(fields(lines(r.out)[2])[1], "3x2");
}

TEST_F(CliTest, KernelCsv) {
  const auto r = run({"kernel", "--eta", "1.2", "--n", "16"});
  EXPECT_EQ(r.code, 0);
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 18u);
  EXPECT_EQ(l[1], "lag,sqrt_value,inv_sqrt_value");
}

TEST_F(CliTest, SweepIsDeterministicAcrossThreadCaps) {
  const std::vector<std::string> args{"sweep", "--eta", "0.6", "--sizes", "33:65:8"};
  setenv("HARM_ENT_THREADS", "1", 1);
  const auto a = run(args);
  setenv("HARM_ENT_THREADS", "4", 1);
  const auto b = run(args);
  unsetenv("HARM_ENT_THREADS");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const auto l = lines(a.out);
  ASSERT_EQ(l.size(), 2u + 5u);
  EXPECT_EQ(l[1], "sweep_id,N,N1,eta_or_spec_hash,S,I,lower,upper");
  const auto f = fields(l[2]);
  EXPECT_EQ(f[1], "33");
  EXPECT_EQ(f[2], "16");
  EXPECT_EQ(f[3], "0.6");
}

TEST_F(CliTest, SweepWritesFitCompanion) {
  const auto spec = write_spec("chain.json", R"({"dimension":1,"extents":[16],"coefficients":
      [{"lag":[0],"value":4},{"lag":[1],"value":-1}]})");
  const auto out = dir_ / "sw";
  const auto r = run({"sweep", "--spec", spec, "--n", "128", "--sizes", "4:32:4", "--out", out.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto fits = json::parse(read_file(out / "sweep_fit.json"));
  EXPECT_EQ(fits["partition"], "fixed_ring_vary_block");
  EXPECT_EQ(fits["entropy_saturation"]["model"], "Saturation");
  const auto csv = lines(read_file(out / "sweep.csv"));
  ASSERT_EQ(csv.size(), 2u + 8u);
  EXPECT_EQ(fields(csv[2])[3].size(), 16u);  // spec hash label
}

TEST_F(CliTest, SweepSkipsResonantSizes) {
  // η = cos(2π/8) puts a zero mode on the grid whenever 8 divides N.
  const auto r = run({"sweep", "--eta", "0.70710678118654757", "--sizes", "16:25:1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("skipping N=16"), std::string::npos);
  EXPECT_NE(r.err.find("skipping N=24"), std::string::npos);
  EXPECT_EQ(lines(r.out).size(), 2u + 8u);
  EXPECT_EQ(run({"sweep", "--eta", "0.6", "--sizes", "9:3"}).code, 2);
}

TEST_F(CliTest, Fig1TruncatedDomainKeepsFlagsAndIsReproducible) {
  const auto out1 = dir_ / "a", out2 = dir_ / "b";
  const auto r = run({"fig1", "--sizes", "2:64", "--out", out1.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 4u);
  EXPECT_NE(l[0].find("eta=0.2 increasing=true saturated=false"), std::string::npos);
  EXPECT_NE(l[1].find("eta=0.6 increasing=true saturated=false"), std::string::npos);
  EXPECT_NE(l[2].find("eta=1.2 increasing=false saturated=true"), std::string::npos);
  EXPECT_NE(l[3].find("eta=1.6 increasing=false saturated=true"), std::string::npos);
  for (const char* name : {"fig1_eta_0.2.csv", "fig1_eta_0.6.csv", "fig1_eta_1.2.csv",
                           "fig1_eta_1.6.csv", "fig1.svg", "fig1_fit.json"}) {
    EXPECT_TRUE(fs::exists(out1 / name)) << name;
  }
  EXPECT_EQ(lines(read_file(out1 / "fig1_eta_0.6.csv")).size(), 2u + 63u);

  EXPECT_EQ(run({"fig1", "--sizes", "2:64", "--out", out2.string()}).code, 0);
  for (const auto& entry : fs::directory_iterator(out1)) {
    EXPECT_EQ(read_file(entry.path()), read_file(out2 / entry.path().filename()))
        << entry.path().filename();
  }
}

}  // namespace
}  // namespace harment
