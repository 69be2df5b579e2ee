#include "qutrit/harness.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

using namespace qutrit;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

std::size_t line_count(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

class HarnessTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("qutrit_harness_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  ScenarioConfig small(const std::string& sub) const {
    ScenarioConfig c = preset("5.1");
    c.N = 50;
    c.gpm.max_iters = 5;
    c.output_dir = (dir_ / sub).string();
    return c;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(HarnessTest, OptimizeWritesAllFiles) {
  std::ostringstream log;
  const OptimizeOutcome out = cmd_optimize(small("run"), log);
  EXPECT_EQ(out.exit_code, kExitNotConverged);
  const fs::path d = dir_ / "run";
  EXPECT_EQ(first_line(d / "history.csv"), "iteration,objective,cauchy_problems");
  EXPECT_EQ(line_count(d / "history.csv"), 6u);
  EXPECT_EQ(first_line(d / "controls.csv"), "t,u,n1,n2");
  EXPECT_EQ(line_count(d / "controls.csv"), 51u);
  EXPECT_EQ(first_line(d / "dynamics.csv"),
            "t,x1,x2,x3,x4,x5,x6,x7,x8,x9,rho11,rho22,rho33,entropy,purity,renyi,hs_distance_sq");
  EXPECT_EQ(line_count(d / "dynamics.csv"), 52u);
  const std::string report = slurp(d / "report.txt");
  EXPECT_NE(report.find("converged: false"), std::string::npos);
  EXPECT_NE(report.find("complexity: 9"), std::string::npos);
  EXPECT_TRUE(fs::exists(d / "config.txt"));
  EXPECT_NE(log.str().find("NOT converged"), std::string::npos);
}

TEST_F(HarnessTest, UnreachableToleranceWithOneIterate) {
  ScenarioConfig c = small("one");
  c.gpm.max_iters = 1;
  c.gpm.eps_stop = 0.0;
  std::ostringstream log;
  const OptimizeOutcome out = cmd_optimize(c, log);
  EXPECT_EQ(out.exit_code, kExitNotConverged);
  EXPECT_EQ(line_count(dir_ / "one" / "history.csv"), 2u);
}

TEST_F(HarnessTest, ConvergedRunExitsZero) {
  ScenarioConfig c = small("inf");
  c.gpm.eps_stop = std::numeric_limits<double>::infinity();
  std::ostringstream log;
  EXPECT_EQ(cmd_optimize(c, log).exit_code, kExitOk);
}

TEST_F(HarnessTest, OutputsAreDeterministic) {
  std::ostringstream log;
  cmd_optimize(small("a"), log);
  cmd_optimize(small("b"), log);
  for (const char* f : {"history.csv", "controls.csv", "dynamics.csv"}) {
    EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
  }
}

TEST_F(HarnessTest, SavedConfigReproducesRun) {
  std::ostringstream log;
  cmd_optimize(small("a"), log);
  ScenarioConfig again = load_config((dir_ / "a" / "config.txt").string());
  again.output_dir = (dir_ / "b").string();
  cmd_optimize(again, log);
  EXPECT_EQ(slurp(dir_ / "a" / "history.csv"), slurp(dir_ / "b" / "history.csv"));
}

TEST_F(HarnessTest, SimulateWritesDynamics) {
  std::ostringstream log;
  EXPECT_EQ(cmd_simulate(small("sim"), log), kExitOk);
  EXPECT_EQ(line_count(dir_ / "sim" / "dynamics.csv"), 52u);
  EXPECT_FALSE(fs::exists(dir_ / "sim" / "history.csv"));
}

TEST_F(HarnessTest, SingleBetaSweepMatchesOptimize) {
  ScenarioConfig c = small("sweep");
  c.gpm.max_iters = 20000;
  c.gpm.eps_stop = 1e-2;
  c.method = Method::GPM2;
  std::ostringstream log;
  const SweepResult s = cmd_sweep_beta(c, {1.0}, {0.5}, 1, true, log);
  ASSERT_EQ(s.points.size(), 1u);
  c.gpm.beta = 0.5;
  c.output_dir = (dir_ / "opt").string();
  const OptimizeOutcome o = cmd_optimize(c, log);
  ASSERT_TRUE(s.points[0].complexity.has_value());
  EXPECT_EQ(*s.points[0].complexity, o.report.cauchy_problems);
  EXPECT_EQ(first_line(dir_ / "sweep" / "sweep.csv"), "alpha,beta,complexity");
  EXPECT_TRUE(fs::exists(dir_ / "sweep" / "sweep_fit.txt"));
}

TEST_F(HarnessTest, SweepRecordsNonConvergenceAsMissing) {
  ScenarioConfig c = small("miss");
  c.gpm.max_iters = 2;
  c.gpm.eps_stop = 0.0;
  std::ostringstream log;
  const SweepResult s = cmd_sweep_beta(c, {1.0, 5.0}, {0.2, 0.4}, 2, true, log);
  ASSERT_EQ(s.points.size(), 4u);
  for (const SweepPoint& p : s.points) EXPECT_FALSE(p.complexity.has_value());
  ASSERT_EQ(s.fits.size(), 2u);
  EXPECT_EQ(s.fits[0].second.points, 0u);
  std::ifstream in(dir_ / "miss" / "sweep.csv");
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(row, "1,0.20000000000000001,");
}

TEST_F(HarnessTest, SweepIsIndependentOfThreadCount) {
  ScenarioConfig c = small("t");
  c.gpm.max_iters = 20000;
  c.gpm.eps_stop = 1e-2;
  std::ostringstream log;
  const SweepResult a = cmd_sweep_beta(c, {1.0, 5.0}, {0.3, 0.6}, 1, false, log);
  const SweepResult b = cmd_sweep_beta(c, {1.0, 5.0}, {0.3, 0.6}, 3, false, log);
  ASSERT_EQ(a.points.size(), b.points.size());
  for (std::size_t k = 0; k < a.points.size(); ++k) {
    EXPECT_EQ(a.points[k].alpha, b.points[k].alpha);
    EXPECT_EQ(a.points[k].beta, b.points[k].beta);
    EXPECT_EQ(a.points[k].complexity, b.points[k].complexity);
  }
}

TEST(FitLine, ExactLine) {
  const LinearFit f = fit_line({0.1, 0.2, 0.3, 0.4}, {10.0, 8.0, 6.0, 4.0});
  EXPECT_NEAR(f.slope, -20.0, 1e-12);
  EXPECT_NEAR(f.intercept, 12.0, 1e-12);
  EXPECT_EQ(f.points, 4u);
}

TEST(Validate, FreshBuildPassesAndCorruptionIsCaught) {
  std::ostringstream log;
  for (const ValidationCheck& c : cmd_validate({}, log)) EXPECT_TRUE(c.passed) << c.name << " " << c.observed;
  ValidateOptions bad;
  bad.corrupt_generator = true;
  bool oracle_failed = false;
  for (const ValidationCheck& c : cmd_validate(bad, log)) {
    if (c.name == "realified_vs_complex_oracle") oracle_failed = !c.passed;
  }
  EXPECT_TRUE(oracle_failed);
  EXPECT_NE(log.str().find("[FAIL] realified_vs_complex_oracle"), std::string::npos);
}
