#include "maxplus_cli/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

#include <maxplus/oracle.hpp>

namespace maxplus::cli {

namespace {

using Clock = std::chrono::steady_clock;

const char* const kSolvers[] = {"bundle", "dual"};

}  // namespace

MetricInstance bench_instance(std::size_t n, std::size_t m, int rep, unsigned long long seed) {
  const unsigned long long s = seed * 1000003ULL + static_cast<unsigned long long>(m) * 131ULL +
                               static_cast<unsigned long long>(rep);
  return make_instance(random_instance(n, m + 1, s), 0);
}

std::vector<BenchRow> run_bench(const BenchConfig& cfg) {
  if (cfg.sweep.empty()) throw std::invalid_argument("bench: empty m sweep");
  if (cfg.reps < 1) throw std::invalid_argument("bench: reps must be positive");
  std::vector<BenchRow> rows;
  for (std::size_t m : cfg.sweep) {
    if (m < 1) throw std::invalid_argument("bench: m must be positive");
    for (int rep = 0; rep < cfg.reps; ++rep) {
      const MetricInstance inst = bench_instance(cfg.n, m, rep, cfg.seed);

      BenchRow b{m, rep, "bundle"};
      auto t0 = Clock::now();
      const BundleReport br = bundle_solve(inst, cfg.bundle);
      b.time_s = std::chrono::duration<double>(Clock::now() - t0).count();
      b.value = br.result.value;
      b.k0_or_iters = br.result.iterations;
      b.gap = br.result.gap;
      b.converged = br.result.status == MetricStatus::kConverged;

      BenchRow d{m, rep, "dual"};
      t0 = Clock::now();
      const DualResult dr = solve_dual(inst, cfg.dual);
      d.time_s = std::chrono::duration<double>(Clock::now() - t0).count();
      d.value = dr.primal;
      d.k0_or_iters = dr.iterations;
      d.gap = std::max(0.0, dr.bound - dr.primal);
      d.converged = dr.converged;

      const bool agree = std::abs(b.value - d.value) <= cfg.agreement_tol;
      b.flagged = !b.converged || !agree;
      d.flagged = !d.converged || !agree;
      rows.push_back(b);
      rows.push_back(d);
    }
  }
  return rows;
}

double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median: empty sample");
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need two or more points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("loglog_slope: nonpositive data");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw std::invalid_argument("loglog_slope: degenerate x");
  return sxy / sxx;
}

BenchSummary summarize_bench(const std::vector<BenchRow>& rows) {
  std::map<std::pair<std::string, std::size_t>, std::pair<std::vector<double>, std::vector<double>>> groups;
  for (const auto& r : rows) {
    auto& g = groups[{r.solver, r.m}];
    g.first.push_back(r.time_s);
    g.second.push_back(static_cast<double>(r.k0_or_iters));
  }
  BenchSummary s;
  for (const char* solver : kSolvers) {
    std::vector<double> ms, times, iters;
    for (const auto& [key, g] : groups) {
      if (key.first != solver) continue;
      BenchSummaryRow row{key.second, key.first, median(g.first), median(g.second)};
      s.rows.push_back(row);
      ms.push_back(static_cast<double>(key.second));
      times.push_back(std::max(row.median_time_s, 1e-9));
      iters.push_back(row.median_iters);
    }
    if (ms.size() < 2) continue;
    const double slope = loglog_slope(ms, times);
    if (std::string(solver) == "bundle") {
      s.slope_bundle = slope;
      s.k0_ratio = iters.back() / iters.front();
    } else {
      s.slope_dual = slope;
    }
  }
  return s;
}

void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows) {
  os << "m,rep,solver,value,time_s,K0_or_iters,gap,flagged\n";
  for (const auto& r : rows) {
    os << r.m << ',' << r.rep << ',' << r.solver << ',' << format_double(r.value) << ',' << r.time_s << ','
       << r.k0_or_iters << ',' << format_double(r.gap) << ',' << (r.flagged ? 1 : 0) << '\n';
  }
}

void write_summary_csv(std::ostream& os, const BenchSummary& s) {
  os << "m,solver,median_time_s,median_K0_or_iters\n";
  for (const auto& r : s.rows) {
    os << r.m << ',' << r.solver << ',' << r.median_time_s << ',' << r.median_iters << '\n';
  }
}

void write_figure_csv(std::ostream& os, const BenchSummary& s, bool iterations) {
  os << "m,bundle,dual\n";
  std::map<std::size_t, std::pair<double, double>> byM;
  for (const auto& r : s.rows) {
    const double v = iterations ? r.median_iters : r.median_time_s;
    (r.solver == "bundle" ? byM[r.m].first : byM[r.m].second) = v;
  }
  for (const auto& [m, v] : byM) os << m << ',' << v.first << ',' << v.second << '\n';
}

void write_figure_svg(std::ostream& os, const BenchSummary& s, bool iterations) {
  const double W = 480, H = 320, pad = 50;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& r : s.rows) {
    const double y = std::max(iterations ? r.median_iters : r.median_time_s, 1e-9);
    xmin = std::min(xmin, std::log10(static_cast<double>(r.m)));
    xmax = std::max(xmax, std::log10(static_cast<double>(r.m)));
    ymin = std::min(ymin, std::log10(y));
    ymax = std::max(ymax, std::log10(y));
  }
  if (s.rows.empty()) xmin = ymin = 0.0, xmax = ymax = 1.0;
  if (xmax - xmin < 1e-12) xmax = xmin + 1.0;
  if (ymax - ymin < 1e-12) ymax = ymin + 1.0;
  auto px = [&](double lx) { return pad + (lx - xmin) / (xmax - xmin) * (W - 2 * pad); };
  auto py = [&](double ly) { return H - pad - (ly - ymin) / (ymax - ymin) * (H - 2 * pad); };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"" << pad << "\" y1=\"" << H - pad << "\" x2=\"" << W - pad << "\" y2=\"" << H - pad
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\"" << H - pad
     << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">m (log scale)</text>\n";
  os << "<text x=\"14\" y=\"" << H / 2 << "\" transform=\"rotate(-90 14 " << H / 2
     << ")\" text-anchor=\"middle\">" << (iterations ? "median iterations" : "median time [s]")
     << " (log scale)</text>\n";
  const char* colors[] = {"#1f77b4", "#d62728"};
  int c = 0;
  for (const char* solver : kSolvers) {
    os << "<polyline fill=\"none\" stroke=\"" << colors[c] << "\" stroke-width=\"2\" points=\"";
    for (const auto& r : s.rows) {
      if (r.solver != solver) continue;
      const double y = std::max(iterations ? r.median_iters : r.median_time_s, 1e-9);
      os << px(std::log10(static_cast<double>(r.m))) << ',' << py(std::log10(y)) << ' ';
    }
    os << "\"/>\n";
    os << "<text x=\"" << W - pad - 60 << "\" y=\"" << pad + 16 * c << "\" fill=\"" << colors[c] << "\">" << solver
       << "</text>\n";
    ++c;
  }
  os << "</svg>\n";
}

}  // namespace maxplus::cli
