#include "forchheimer/cli.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fc = forchheimer::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run_binary(const std::string& args, const fs::path& stderr_path) {
  const std::string command =
      std::string("\"") + FORCHHEIMER_CLI_PATH + "\" " + args + " 2> \"" + stderr_path.string() + "\"";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "forchheimer_cli_test";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(CommandLine, Defaults) {
  fc::CommandLine cmd;
  const fc::RunOptions options = cmd.parse(std::vector<std::string>{});
  EXPECT_EQ(options.law_text, "1:0,1:1");
  EXPECT_EQ(options.meshes, (std::vector<int>{4, 8, 16, 32, 64, 128, 256}));
  EXPECT_FALSE(options.study.dt_policy.fixed.has_value());
  EXPECT_EQ(options.study.dt_policy.cap, 1e-2);
  EXPECT_EQ(options.study.t_final, 1.0);
  EXPECT_EQ(options.study.picard_tol, 1e-6);
  EXPECT_EQ(options.study.picard_max, 50);
  EXPECT_EQ(options.format, fc::ReportFormat::markdown);
  EXPECT_EQ(options.study.linear_solver, forchheimer::LinearSolverKind::condensed);
  EXPECT_TRUE(options.out.empty());
}

TEST(CommandLine, ExplicitValues) {
  fc::CommandLine cmd;
  const fc::RunOptions options = cmd.parse({"--law", "1:0,2:1", "--mesh", "4,8", "--dt", "0.001", "--tol",
                                      "1e-8", "--T", "0.5", "--max-picard", "7", "--format", "csv",
                                      "--out", "r.csv", "--linear-solver", "monolithic"});
  EXPECT_EQ(options.law.coefficients(), (std::vector<double>{1.0, 2.0}));
  EXPECT_EQ(options.law.exponents(), (std::vector<double>{0.0, 1.0}));
  EXPECT_EQ(options.meshes, (std::vector<int>{4, 8}));
  ASSERT_TRUE(options.study.dt_policy.fixed.has_value());
  EXPECT_EQ(*options.study.dt_policy.fixed, 0.001);
  EXPECT_EQ(options.study.picard_tol, 1e-8);
  EXPECT_EQ(options.study.t_final, 0.5);
  EXPECT_EQ(options.study.picard_max, 7);
  EXPECT_EQ(options.format, fc::ReportFormat::csv);
  EXPECT_EQ(options.out, "r.csv");
  EXPECT_EQ(options.study.linear_solver, forchheimer::LinearSolverKind::monolithic);
}

TEST(CommandLine, ConfigFile) {
  const fs::path cfg = scratch_dir() / "study.ini";
  {
    std::ofstream out(cfg);
    out << "law=\"1:0,3:1\"\nT=0.25\nformat=csv\n";
  }
  fc::CommandLine cmd;
  const fc::RunOptions options = cmd.parse({"--config", cfg.string(), "--mesh", "2,4"});
  EXPECT_EQ(options.law.coefficients(), (std::vector<double>{1.0, 3.0}));
  EXPECT_EQ(options.study.t_final, 0.25);
  EXPECT_EQ(options.format, fc::ReportFormat::csv);
  EXPECT_EQ(options.meshes, (std::vector<int>{2, 4}));
}

TEST(CommandLine, MalformedValuesAreUsageErrors) {
  const std::vector<std::vector<std::string>> usage = {
      {"--law", "1:0,1"},         {"--law", "0:0"},       {"--law", "1:1,1:0"}, {"--mesh", "8,4"},
      {"--mesh", "0,4"},          {"--dt", "fast"},       {"--dt", "-1"},      {"--dt", "0.1x"},
      {"--T", "0"},               {"--tol", "-1e-6"},     {"--max-picard", "0"}, {"--dt-cap", "0"},
  };
  for (const auto& args : usage) {
    fc::CommandLine cmd;
    EXPECT_THROW(cmd.parse(args), fc::UsageError) << args[0] << ' ' << args[1];
  }
  const std::vector<std::vector<std::string>> syntax = {
      {"--format", "xml"}, {"--mesh", "a,b"}, {"--unknown"}, {"--tol", "abc"}, {"--linear-solver", "cg"},
  };
  for (const auto& args : syntax) {
    fc::CommandLine cmd;
    try {
      cmd.parse(args);
      ADD_FAILURE() << "accepted " << args[0];
    } catch (const CLI::ParseError& e) {
      std::ostringstream out, err;
      EXPECT_EQ(cmd.exit(e, out, err), fc::kUsage);
    }
  }
}

TEST(Run, WritesCsvReport) {
  fc::CommandLine cmd;
  const fc::RunOptions options = cmd.parse({"--mesh", "2,4", "--T", "0.1", "--dt", "0.02", "--format", "csv"});
  std::ostringstream out, log;
  ASSERT_EQ(fc::run(options, out, log), fc::kSuccess);
  EXPECT_EQ(out.str().rfind(std::string(forchheimer::kCsvHeader) + "\n", 0), 0u);
  EXPECT_NE(log.str().find("final rates"), std::string::npos);
  EXPECT_NE(log.str().find("n=4"), std::string::npos);
}

TEST(Run, UnwritableOutputIsIoError) {
  fc::CommandLine cmd;
  const fc::RunOptions options = cmd.parse({"--mesh", "2", "--T", "0.1", "--out", "/nonexistent-dir/report.csv"});
  std::ostringstream out, log;
  EXPECT_EQ(fc::run(options, out, log), fc::kIo);
  EXPECT_NE(log.str().find("cannot open"), std::string::npos);
}

TEST(Run, PicardCapIsNumericalError) {
  fc::CommandLine cmd;
  const fc::RunOptions options = cmd.parse({"--mesh", "4", "--T", "0.1", "--max-picard", "1"});
  std::ostringstream out, log;
  EXPECT_EQ(fc::run(options, out, log), fc::kNumerical);
  EXPECT_NE(log.str().find("did not converge"), std::string::npos);
  EXPECT_NE(log.str().find("residual"), std::string::npos);
  EXPECT_TRUE(out.str().empty());
}

TEST(Binary, ExitCodesAndDeterministicOutput) {
  const fs::path dir = scratch_dir();
  const fs::path err = dir / "stderr.txt";
  const std::string study = "--mesh 2,4 --T 0.1 --dt 0.02 --format csv";

  ASSERT_EQ(run_binary(study + " --out \"" + (dir / "a.csv").string() + "\"", err), 0);
  ASSERT_EQ(run_binary(study + " --out \"" + (dir / "b.csv").string() + "\"", err), 0);
  const std::string a = slurp(dir / "a.csv");
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, slurp(dir / "b.csv"));

  EXPECT_EQ(run_binary("--help > /dev/null", err), 0);
  EXPECT_EQ(run_binary("--law bogus", err), fc::kUsage);
  EXPECT_NE(slurp(err).find("--law"), std::string::npos);
  EXPECT_EQ(run_binary("--format xml", err), fc::kUsage);
  EXPECT_EQ(run_binary("--mesh 2 --T 0.1 --out /nonexistent-dir/x.csv", err), fc::kIo);
  EXPECT_EQ(run_binary("--mesh 4 --T 0.1 --max-picard 1 > /dev/null", err), fc::kNumerical);
  EXPECT_NE(slurp(err).find("residual"), std::string::npos);
}
