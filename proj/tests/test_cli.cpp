#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "pinchlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = pinchlab::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

pinchlab::Json strip_volatile(pinchlab::Json j) {
  j.erase("timestamp");
  j.erase("runtime_seconds");
  return j;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, UsageErrorsExitWithTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"list-examples", "--bogus"}).code, 2);
  EXPECT_EQ(run({"check"}).code, 2);
  EXPECT_EQ(run({"check", "--example", "torus"}).code, 2);
  EXPECT_EQ(run({"check", "--example", "sphere", "--param", "n"}).code, 2);
  EXPECT_EQ(run({"check", "--example", "sphere", "--format", "xml"}).code, 2);
  EXPECT_EQ(run({"check", "--example", "sphere", "--param", "n=5", "--cert", "isotropic"}).code, 2);
  EXPECT_EQ(run({"check", "--example", "veronese", "--cert", "prop-ell"}).code, 2);
  EXPECT_EQ(run({"check", "--example", "veronese", "--cert", "star,warp"}).code, 2);
  EXPECT_EQ(run({"spectrum", "--example", "sphere", "--param", "n=5"}).code, 2);
  EXPECT_EQ(run({"check", "--example", "veronese", "--restarts", "0"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, ListExamples) {
  const Result text = run({"list-examples"});
  EXPECT_EQ(text.code, 0);
  EXPECT_NE(text.out.find("cp2-s7"), std::string::npos);
  const Result json = run({"list-examples", "--json"});
  const auto j = pinchlab::Json::parse(json.out);
  ASSERT_EQ(j.size(), 5u);
  EXPECT_EQ(j[4]["name"], "cp2-s7");
  EXPECT_EQ(j[0]["params"][0]["name"], "n");
}

TEST(Cli, CheckExitCodes) {
  const Result ok = run({"check", "--example", "veronese", "--cert", "star", "--samples", "4", "--restarts", "8"});
  EXPECT_EQ(ok.code, 0) << ok.err;
  const auto j = pinchlab::Json::parse(ok.out);
  EXPECT_EQ(j["overall_pass"], true);
  EXPECT_NEAR(j["certificates"][0]["worst_margin"].get<double>(), 1.0 / 15.0, 1e-6);

  const Result bad = run({"check", "--example", "sphere", "--param", "n=9", "--cert", "star", "--samples", "2"});
  EXPECT_EQ(bad.code, 1);
  EXPECT_EQ(pinchlab::Json::parse(bad.out)["certificates"][0]["status"], "fail");
  EXPECT_NE(bad.err.find("violation"), std::string::npos);
}

TEST(Cli, CsvAndOutputFile) {
  const std::string path = ::testing::TempDir() + "pinchlab_cli_test.csv";
  const Result r = run({"check", "--example", "ellipsoid", "--cert", "star,prop-ell", "--samples", "3", "--format", "csv",
                        "--out", path});
  EXPECT_EQ(r.code, 0) << r.out;
  const std::string csv = slurp(path);
  EXPECT_EQ(csv.rfind("id,u_1,u_2,u_3,u_4,K_min", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_NE(r.out.find("prop-ell: pass"), std::string::npos);
  std::remove(path.c_str());
}

TEST(Cli, SpectrumOfRoundSphere) {
  const Result r = run({"spectrum", "--example", "sphere", "--samples", "3", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "id,mu_sd_1,mu_sd_2,mu_sd_3,mu_asd_1,mu_asd_2,mu_asd_3,min");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    std::istringstream cells(line);
    std::string cell;
    std::getline(cells, cell, ',');
    while (std::getline(cells, cell, ',')) EXPECT_NEAR(std::stod(cell), 4.0, 1e-5);
  }
  EXPECT_EQ(rows, 3);
}

TEST(Cli, OracleReportsDominance) {
  const Result r = run({"oracle", "--example", "veronese", "--samples", "2", "--restarts", "4", "--oracle-samples", "300"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = pinchlab::Json::parse(r.out);
  EXPECT_EQ(j["dominance_violations"], 0);
  EXPECT_EQ(j["rows"].size(), 2u * 3u);
}

TEST(Cli, RepeatedRunsAreIdenticalUpToTimestamps) {
  const std::vector<std::string> args{"check", "--example", "cp2-s7", "--seed", "42", "--samples", "2",
                                      "--cert", "star,isotropic,bochner"};
  const Result a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(strip_volatile(pinchlab::Json::parse(a.out)).dump(), strip_volatile(pinchlab::Json::parse(b.out)).dump());
}

#ifdef PINCHLAB_CLI_PATH
TEST(Cli, InstalledBinaryExitCode) {
  const std::string cmd = std::string(PINCHLAB_CLI_PATH) + " list-examples --bogus >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  ASSERT_NE(status, -1);
  EXPECT_EQ(WEXITSTATUS(status), 2);
}
#endif
