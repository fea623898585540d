#include "arp_cli/commands.hpp"
#include "arp_cli/run_config.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

namespace fs = std::filesystem;
using namespace arp::cli;

namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "arp");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    static std::atomic<int> counter{0};
    dir_ = fs::temp_directory_path() /
           ("arp_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write_config(const std::string& name, const std::string& body) {
    const fs::path path = dir_ / name;
    std::ofstream(path) << body << "[output]\ndirectory = out_" << fs::path(name).stem().string() << "\n";
    return path.string();
  }
  fs::path output(const std::string& name) const { return dir_ / ("out_" + fs::path(name).stem().string()); }

  fs::path dir_;
};

const char* kQuadratic = "[problem]\nname = quadratic\n[algorithm]\np = 2\nr = 3\nepsilon = 1e-8\n";

}  // namespace

TEST(CliList, Table) {
  const auto r = cli({"list-problems"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("quadratic"), std::string::npos);
  EXPECT_NE(r.out.find("rosenbrock-"), std::string::npos);
  EXPECT_NE(r.out.find("holder-power("), std::string::npos);
  EXPECT_NE(r.out.find("f_low"), std::string::npos);
}

TEST(CliList, JsonMatchesTable) {
  const auto r = cli({"list-problems", "--json"});
  ASSERT_EQ(r.code, 0);
  const auto rows = nlohmann::json::parse(r.out);
  ASSERT_EQ(rows.size(), arp::list_corpus().size());
  for (const auto& row : rows) {
    for (const char* key : {"name", "n", "p_max", "beta", "L", "f_low"}) EXPECT_TRUE(row.contains(key)) << key;
  }
}

TEST(CliList, UnknownFlagIsUsageError) {
  const auto r = cli({"list-problems", "--bogus"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("list-problems"), std::string::npos);
  EXPECT_EQ(cli({}).code, kExitUsage);
  EXPECT_EQ(cli({"frobnicate"}).code, kExitUsage);
}

TEST_F(CliTest, SolveQuadraticAndVerify) {
  const auto config = write_config("quad.ini", kQuadratic);
  const auto r = cli({"solve", config});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("Converged"), std::string::npos);
  const auto summary = read_file(output("quad.ini") / "summary.csv");
  EXPECT_NE(summary.find(",Converged,"), std::string::npos) << summary;
  const auto v = cli({"verify", (output("quad.ini") / "trace.jsonl").string()});
  EXPECT_EQ(v.code, 0) << v.out;
  EXPECT_EQ(v.out.find("FAIL"), std::string::npos);
  EXPECT_NE(v.out.find("PASS I10"), std::string::npos);
}

TEST_F(CliTest, SummaryIsByteIdenticalAcrossRuns) {
  const auto config = write_config("ros.ini", "[problem]\nname = rosenbrock-2\n[algorithm]\np = 2\nr = 3\n");
  ASSERT_EQ(cli({"solve", config}).code, 0);
  const auto first = read_file(output("ros.ini") / "summary.csv");
  const auto first_trace = read_file(output("ros.ini") / "trace.jsonl");
  ASSERT_EQ(cli({"solve", config}).code, 0);
  EXPECT_EQ(read_file(output("ros.ini") / "summary.csv"), first);
  EXPECT_EQ(read_file(output("ros.ini") / "trace.jsonl"), first_trace);
}

TEST_F(CliTest, InvalidParametersNameTheConstraint) {
  auto r = cli({"solve", write_config("eta.ini", std::string(kQuadratic) + "eta2 = 1\n")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("eta2"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("eta2 < 1"), std::string::npos) << r.err;
  r = cli({"solve", write_config("alpha.ini", std::string(kQuadratic) + "alpha = 0.5\n")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("(0, 1/3]"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("alpha.ini:"), std::string::npos) << r.err;
}

TEST_F(CliTest, UnknownKeyReportsLine) {
  const auto r = cli({"solve", write_config("key.ini", "[problem]\nname = quadratic\n[algorithm]\nrr = 3\n")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("key.ini:4"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("rr"), std::string::npos) << r.err;
}

TEST_F(CliTest, MissingConfigFile) {
  EXPECT_EQ(cli({"solve", (dir_ / "absent.ini").string()}).code, kExitUsage);
}

TEST_F(CliTest, SweepGridTooShort) {
  const auto r = cli({"sweep", write_config("short.ini", std::string(kQuadratic) + "[sweep]\ngrid = 1e-2 1e-3 1e-4\n")});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("4"), std::string::npos) << r.err;
}

TEST_F(CliTest, SweepRequiresSection) {
  EXPECT_EQ(cli({"sweep", write_config("nosweep.ini", kQuadratic)}).code, kExitUsage);
}

TEST_F(CliTest, RosenbrockSweep) {
  const auto config = write_config("rsweep.ini",
                                   "[problem]\nname = rosenbrock\nn = 2\n[start]\npoint = -1.2 1\n"
                                   "[algorithm]\np = 2\nr = 3\n[sweep]\nstart = 1e-2\nratio = 10\ncount = 5\n");
  const auto r = cli({"sweep", "-j", "2", config});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(read_file(output("rsweep.ini") / "sweep_summary.json"));
  EXPECT_LE(j["fitted_slope"].get<double>(), 1.8);
  EXPECT_DOUBLE_EQ(j["theoretical_exponent"].get<double>(), 1.5);
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_TRUE(fs::exists(output("rsweep.ini") / "sweep.csv"));
  int traces = 0;
  for (const auto& entry : fs::directory_iterator(output("rsweep.ini") / "traces")) {
    EXPECT_EQ(cli({"verify", entry.path().string()}).code, 0) << entry.path();
    ++traces;
  }
  EXPECT_EQ(traces, 5);
}

TEST_F(CliTest, HolderPowerSweepRegime) {
  const auto config = write_config("hsweep.ini",
                                   "[problem]\nname = holder-power\nq = 2.5\n"
                                   "[algorithm]\np = 2\nr = 3\n[sweep]\ngrid = 1e-1 1e-2 1e-3 1e-4\n");
  const auto r = cli({"sweep", config});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("AboveHolder"), std::string::npos);
  const auto j = nlohmann::json::parse(read_file(output("hsweep.ini") / "sweep_summary.json"));
  EXPECT_EQ(j["regime"], "AboveHolder");
  EXPECT_NEAR(j["theoretical_exponent"].get<double>(), 2.5 / 1.5, 1e-12);
}

TEST_F(CliTest, VerifyDetectsTamperedSigma) {
  ASSERT_EQ(cli({"solve", write_config("t.ini", kQuadratic)}).code, 0);
  std::istringstream in(read_file(output("t.ini") / "trace.jsonl"));
  std::string line, text;
  int n = 0;
  while (std::getline(in, line)) {
    if (n == 2) {
      auto j = nlohmann::json::parse(line);
      j["sigma"] = j["sigma"].get<double>() * 3.0;
      line = j.dump();
    }
    text += line + "\n";
    ++n;
  }
  ASSERT_GE(n, 3);
  const fs::path tampered = dir_ / "tampered.jsonl";
  std::ofstream(tampered) << text;
  const auto r = cli({"verify", tampered.string()});
  EXPECT_EQ(r.code, kExitInvariantFailure);
  EXPECT_NE(r.out.find("FAIL I6"), std::string::npos) << r.out;
}

TEST_F(CliTest, VerifyRejectsEmptyFile) {
  const fs::path empty = dir_ / "empty.jsonl";
  std::ofstream(empty).flush();
  const auto r = cli({"verify", empty.string()});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, IterationLimitExitCode) {
  const auto r = cli({"solve", write_config("lim.ini",
                                            "[problem]\nname = rosenbrock-2\n[algorithm]\np = 1\nr = 2\n"
                                            "max_outer_iterations = 3\n")});
  EXPECT_EQ(r.code, kExitIterationLimit);
  EXPECT_TRUE(fs::exists(output("lim.ini") / "trace.jsonl"));
}

TEST_F(CliTest, SubsolverFailureExitCode) {
  const auto r = cli({"solve", write_config("sub.ini",
                                            "[problem]\nname = rosenbrock-2\n[algorithm]\np = 2\nr = 3\n"
                                            "theta = 1e-12\n[subsolver]\nmax_inner_iterations = 1\n")});
  EXPECT_EQ(r.code, kExitSubsolverFailure);
}

TEST(RunConfig, ParsesAllSections) {
  std::istringstream in(
      "# comment\n[problem]\nname = rosenbrock\nn = 3\n[set]\ntype = box\nlower = -2\nupper = 2 3 4\n"
      "[start]\npoint = 0.5\n[algorithm]\np = 3\nr = 4\nepsilon = 1e-5\ngamma2 = 6\n"
      "[subsolver]\ntrial_steplength = warm-start\narmijo_constant = 1e-3\n[sweep]\ncount = 6\n"
      "[output]\ndirectory = /tmp/x\n");
  const auto c = parse_run_config(in, "inline.ini");
  EXPECT_EQ(c.entry.dimension(), 3);
  EXPECT_EQ(c.set.kind(), "box");
  EXPECT_EQ(c.start, arp::Vector::Constant(3, 0.5));
  EXPECT_EQ(c.solve.p, 3);
  EXPECT_DOUBLE_EQ(c.solve.theta, 50.0);
  EXPECT_DOUBLE_EQ(c.solve.sigma0, 0.5);
  EXPECT_EQ(c.solve.gamma2, 6.0);
  EXPECT_EQ(c.solve.subsolver.trial_steplength, arp::TrialSteplength::WarmStart);
  ASSERT_TRUE(c.sweep);
  EXPECT_EQ(c.sweep->epsilons().size(), 6u);
  EXPECT_EQ(c.output_directory, "/tmp/x");
}

TEST(RunConfig, FactorialScalingCanBeDisabled) {
  std::istringstream in("[problem]\nname = quartic-valley\n[algorithm]\np = 3\nr = 4\nscale_by_factorial = false\n");
  const auto c = parse_run_config(in, "inline.ini");
  EXPECT_EQ(c.solve.theta, 100.0);
  EXPECT_EQ(c.solve.sigma0, 1.0);
}

TEST(RunConfig, DuplicateKeyAndUnknownSection) {
  std::istringstream dup("[problem]\nname = quadratic\nname = quadratic\n");
  EXPECT_THROW(parse_run_config(dup, "d.ini"), ConfigError);
  std::istringstream section("[problem]\nname = quadratic\n[nope]\n");
  EXPECT_THROW(parse_run_config(section, "s.ini"), ConfigError);
  std::istringstream infeasible("[problem]\nname = quadratic\n[set]\ntype = ball\nradius = 0.1\n[start]\npoint = 5\n");
  EXPECT_THROW(parse_run_config(infeasible, "f.ini"), ConfigError);
}
