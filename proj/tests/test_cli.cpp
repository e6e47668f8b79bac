#include <gtest/gtest.h>

#include <maxplus/basis.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "maxplus_cli/bench.hpp"
#include "maxplus_cli/commands.hpp"
#include "test_support.hpp"

using namespace maxplus;
using namespace maxplus::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("maxplus_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream is(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(is, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "maxplus");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST(CliMetric, FixtureBundleValue) {
  const fs::path out = scratch("metric");
  GlobalOptions g;
  g.out = out.string();
  MetricOptions o;
  o.instance = testing_support::fixture("three_basis.bset");
  o.solvers = {"bundle"};
  EXPECT_EQ(cmd_metric(g, o), kOk);
  const auto rows = read_csv(out / "metric.csv");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0][0], "solver");
  EXPECT_NEAR(std::stod(rows[1][2]), std::numbers::sqrt2, 1e-6);
}

TEST(CliMetric, TwoSolversTwoRows) {
  const fs::path out = scratch("metric2");
  EXPECT_EQ(run({"--out", out.string(), "metric", "--instance", testing_support::fixture("three_basis.bset"),
                 "--solver", "bundle", "--solver", "dual"}),
            kOk);
  const auto rows = read_csv(out / "metric.csv");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1][0], "bundle");
  EXPECT_EQ(rows[2][0], "dual");
  for (std::size_t r = 1; r < 3; ++r) EXPECT_LE(std::stod(rows[r][4]), 1e-5);
}

TEST(CliMetric, MissingFileIsUsageError) {
  const fs::path out = scratch("missing");
  EXPECT_EQ(run({"--out", out.string(), "metric", "--instance", "/nonexistent/x.bset"}), kUsage);
  EXPECT_FALSE(fs::exists(out));
}

TEST(CliMetric, IndexOutOfRangeIsUsageError) {
  const fs::path out = scratch("range");
  EXPECT_EQ(run({"--out", out.string(), "metric", "--instance", testing_support::fixture("three_basis.bset"),
                 "--j", "3"}),
            kUsage);
  EXPECT_FALSE(fs::exists(out));
}

TEST(CliMetric, SyntheticFromConfig) {
  const fs::path out = scratch("synthetic");
  fs::create_directories(out);
  {
    std::ofstream cfg(out / "m.cfg");
    cfg << "# synthetic instance\ninstance = synthetic\nn = 2\nm = 5\nsolver = dual\n";
  }
  EXPECT_EQ(run({"--config", (out / "m.cfg").string(), "--seed", "4", "--out", out.string(), "metric"}), kOk);
  EXPECT_EQ(read_csv(out / "metric.csv")[1][0], "dual");
}

TEST(CliArgs, UsageErrors) {
  EXPECT_EQ(run({}), kUsage);
  EXPECT_EQ(run({"nonsense"}), kUsage);
  EXPECT_EQ(run({"--seed", "abc", "verify"}), kUsage);
  EXPECT_EQ(run({"--config", "/nonexistent.cfg", "propagate"}), kUsage);
  const fs::path out = scratch("badcfg");
  fs::create_directories(out);
  {
    std::ofstream cfg(out / "bad.cfg");
    cfg << "budget 16\n";
  }
  EXPECT_EQ(run({"--config", (out / "bad.cfg").string(), "--out", out.string(), "propagate"}), kUsage);
  EXPECT_EQ(run({"--out", out.string(), "propagate", "--mode", "sideways"}), kUsage);
}

TEST(CliPropagate, BudgetAndUnlimited) {
  const fs::path a = scratch("prop16"), b = scratch("propinf");
  EXPECT_EQ(run({"--out", a.string(), "propagate", "--budget", "16"}), kOk);
  EXPECT_LE(load_basis_set((a / "final.bset").string()).size(), 16u);
  EXPECT_TRUE(fs::exists(a / "steps.csv"));
  EXPECT_TRUE(fs::exists(a / "report.json"));
  EXPECT_EQ(run({"--out", b.string(), "propagate", "--budget", "unlimited", "--steps", "3"}), kOk);
  EXPECT_EQ(load_basis_set((b / "final.bset").string()).size(), 64u);
}

TEST(CliBench, RowsAndDeterminism) {
  const fs::path a = scratch("bench_a"), b = scratch("bench_b");
  for (const auto& dir : {a, b}) {
    EXPECT_EQ(run({"--out", dir.string(), "--seed", "9", "bench", "--m", "20,40", "--reps", "2", "--svg"}), kOk);
  }
  const auto ra = read_csv(a / "bench.csv"), rb = read_csv(b / "bench.csv");
  ASSERT_EQ(ra.size(), 1u + 2 * 2 * 2);
  EXPECT_EQ(ra[0], (std::vector<std::string>{"m", "rep", "solver", "value", "time_s", "K0_or_iters", "gap", "flagged"}));
  ASSERT_EQ(ra.size(), rb.size());
  for (std::size_t r = 1; r < ra.size(); ++r) {
    for (std::size_t c = 0; c < ra[r].size(); ++c) {
      if (c != 4) EXPECT_EQ(ra[r][c], rb[r][c]);
    }
    EXPECT_LE(std::stod(ra[r][6]), 1e-5);
  }
  for (std::size_t r = 1; r < ra.size(); r += 2) {
    EXPECT_NEAR(std::stod(ra[r][3]), std::stod(ra[r + 1][3]), 1e-5);
  }
  for (const char* f : {"bench_summary.csv", "bench_summary.json", "time_vs_m.csv", "k0_vs_m.csv", "time_vs_m.svg",
                        "k0_vs_m.svg"}) {
    EXPECT_TRUE(fs::exists(a / f)) << f;
  }
}

TEST(CliBench, SlopeAndMedian) {
  EXPECT_NEAR(loglog_slope({1.0, 10.0, 100.0}, {3.0, 30.0, 300.0}), 1.0, 1e-12);
  EXPECT_NEAR(loglog_slope({2.0, 4.0, 8.0}, {5.0, 5.0, 5.0}), 0.0, 1e-12);
  EXPECT_NEAR(loglog_slope({1.0, 2.0}, {1.0, 4.0}), 2.0, 1e-12);
  EXPECT_THROW(loglog_slope({1.0}, {1.0}), std::invalid_argument);
  EXPECT_DOUBLE_EQ(median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_DOUBLE_EQ(median({4.0, 1.0, 2.0, 3.0}), 2.5);
}

TEST(CliVerify, QuickPassesAndTamperedFails) {
  const fs::path a = scratch("verify"), b = scratch("verify_tampered");
  EXPECT_EQ(run({"--out", a.string(), "--quick", "verify"}), kOk);
  EXPECT_FALSE(fs::exists(a / "dumps"));
  EXPECT_EQ(run({"--out", b.string(), "--quick", "verify", "--tol", "0"}), kAccuracy);
  ASSERT_TRUE(fs::exists(b / "dumps"));
  EXPECT_FALSE(fs::is_empty(b / "dumps"));
}
