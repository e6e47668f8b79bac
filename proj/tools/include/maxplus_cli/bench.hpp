#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <maxplus/bundle.hpp>
#include <maxplus/metric.hpp>

namespace maxplus::cli {

struct BenchConfig {
  std::vector<std::size_t> sweep{100, 200, 400, 800, 1600, 3200};
  int reps = 5;
  std::size_t n = 4;
  unsigned long long seed = 1;
  BundleParams bundle;
  DualParams dual = [] {
    DualParams d;
    d.method = DualMethod::kInteriorPoint;
    return d;
  }();
  double agreement_tol = 1e-5;
};

struct BenchRow {
  std::size_t m = 0;
  int rep = 0;
  std::string solver;
  double value = 0.0;
  double time_s = 0.0;
  long long k0_or_iters = 0;
  double gap = 0.0;
  bool converged = false;
  bool flagged = false;
};

struct BenchSummaryRow {
  std::size_t m = 0;
  std::string solver;
  double median_time_s = 0.0;
  double median_iters = 0.0;
};

struct BenchSummary {
  std::vector<BenchSummaryRow> rows;
  double slope_bundle = 0.0;  // log-log slope of median time vs m
  double slope_dual = 0.0;
  double k0_ratio = 0.0;      // median K0 at the largest m over the smallest
};

/// Instance with m cuts for candidate 0: m + 1 Haar bases.
MetricInstance bench_instance(std::size_t n, std::size_t m, int rep, unsigned long long seed);

/// Rows in (m, rep, solver) order; time is measured around the solver call only.
std::vector<BenchRow> run_bench(const BenchConfig& cfg);
BenchSummary summarize_bench(const std::vector<BenchRow>& rows);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);
double median(std::vector<double> v);

void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows);
void write_summary_csv(std::ostream& os, const BenchSummary& s);
/// Figure data: m against median time (time_vs_m) or median iterations (k0_vs_m).
void write_figure_csv(std::ostream& os, const BenchSummary& s, bool iterations);
/// Minimal log-log line chart of the same data.
void write_figure_svg(std::ostream& os, const BenchSummary& s, bool iterations);

}  // namespace maxplus::cli
