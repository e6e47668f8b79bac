#include "maxplus/pruning.hpp"

#include <algorithm>
#include <cmath>
#include <atomic>
#include <chrono>
#include <limits>
#include <numeric>
#include <ostream>
#include <thread>

#include "maxplus/oracle.hpp"

namespace maxplus {

PruneMode parse_prune_mode(const std::string& s) {
  if (s == "keep-top-k" || s == "top-k") return PruneMode::kTopK;
  if (s == "drop-negative") return PruneMode::kDropNegative;
  if (s == "both") return PruneMode::kBoth;
  throw std::invalid_argument("unknown prune mode '" + s + "'");
}

MetricSolver parse_metric_solver(const std::string& s) {
  if (s == "bundle") return MetricSolver::kBundle;
  if (s == "dual" || s == "dual-only") return MetricSolver::kDualOnly;
  if (s == "oracle") return MetricSolver::kOracle;
  throw std::invalid_argument("unknown metric solver '" + s + "'");
}

std::string to_string(PruneMode m) {
  switch (m) {
    case PruneMode::kTopK: return "keep-top-k";
    case PruneMode::kDropNegative: return "drop-negative";
    case PruneMode::kBoth: return "both";
  }
  return "unknown";
}

std::string to_string(MetricSolver s) {
  switch (s) {
    case MetricSolver::kBundle: return "bundle";
    case MetricSolver::kDualOnly: return "dual";
    case MetricSolver::kOracle: return "oracle";
  }
  return "unknown";
}

MetricResult importance_metric(const BasisSet& S, std::size_t j, const PruningConfig& config) {
  const MetricInstance inst = make_instance(S, j);
  const auto start = std::chrono::steady_clock::now();
  MetricResult res;
  switch (config.solver) {
    case MetricSolver::kBundle: {
      res = bundle_solve(inst, config.bundle).result;
      break;
    }
    case MetricSolver::kDualOnly: {
      const DualResult dr = solve_dual(inst, config.dual);
      res.value = dr.primal;
      res.optimizer = dr.primal_point;
      res.dual_bound = dr.bound;
      res.iterations = dr.iterations;
      res.cuts = static_cast<std::size_t>((dr.alpha.array() > 0.0).count());
      res.solver = "dual";
      res.status = dr.converged ? MetricStatus::kConverged : MetricStatus::kIterationCap;
      break;
    }
    case MetricSolver::kOracle: {
      const BruteForceResult bf =
          brute_force_unitary(inst, config.oracle.grid_per_axis, config.oracle.refine_iters);
      res.value = bf.value;
      res.optimizer = bf.maximizer;
      res.dual_bound = bf.value + bf.resolution;
      res.iterations = static_cast<int>(std::min<long long>(bf.evaluations, std::numeric_limits<int>::max()));
      res.solver = "oracle";
      break;
    }
  }
  res.j = j;
  res.gap = std::max(0.0, res.dual_bound - res.value);
  res.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (res.status == MetricStatus::kConverged && config.solver != MetricSolver::kOracle &&
      res.gap > config.gap_tol) {
    res.status = MetricStatus::kInfeasibleAccuracy;
  }
  return res;
}

std::vector<MetricResult> compute_metrics(const BasisSet& S, const PruningConfig& config) {
  std::vector<MetricResult> out(S.size());
  if (S.size() == 1) {
    out[0].value = std::numeric_limits<double>::infinity();
    out[0].dual_bound = out[0].value;
    out[0].solver = "singleton";
    return out;
  }
  auto work = [&](std::size_t j) {
    try {
      out[j] = importance_metric(S, j, config);
    } catch (const std::exception&) {
      MetricResult failed;
      failed.j = j;
      failed.value = std::numeric_limits<double>::infinity();
      failed.dual_bound = failed.value;
      failed.status = MetricStatus::kInfeasibleAccuracy;
      failed.solver = to_string(config.solver);
      out[j] = failed;
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(S.size())));
  if (threads == 1) {
    for (std::size_t j = 0; j < S.size(); ++j) work(j);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t j = next++; j < S.size(); j = next++) work(j);
    });
  }
  pool.clear();
  return out;
}

std::pair<BasisSet, PruneReport> prune(const BasisSet& S, const std::vector<MetricResult>& metrics,
                                       const PruningConfig& config) {
  if (metrics.size() != S.size()) throw std::invalid_argument("prune: one metric per basis required");
  const bool drop = config.mode != PruneMode::kTopK;
  const bool topk = config.mode != PruneMode::kDropNegative;
  std::vector<std::size_t> candidates;
  PruneReport report;
  for (std::size_t i = 0; i < S.size(); ++i) {
    const MetricResult& r = metrics[i];
    const bool failed = r.status == MetricStatus::kInfeasibleAccuracy && !std::isfinite(r.value);
    if (drop && !failed && r.dual_bound < -config.safety_margin) {
      report.removed.push_back(i);
      report.removed_metrics.push_back(r.value);
    } else {
      candidates.push_back(i);
    }
  }
  if (candidates.empty()) {
    // Cannot happen for exact metrics (the pointwise minimiser is never
    // strictly dominated); keep the best basis if numerical noise says otherwise.
    std::size_t best = 0;
    for (std::size_t i = 1; i < S.size(); ++i) {
      if (metrics[i].value > metrics[best].value) best = i;
    }
    candidates.push_back(best);
    report.removed.erase(std::find(report.removed.begin(), report.removed.end(), best));
  }

  if (topk && config.budget > 0 && candidates.size() > config.budget) {
    std::vector<std::size_t> order = candidates;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return metrics[a].value > metrics[b].value;
    });
    std::vector<std::size_t> keep(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(config.budget));
    for (auto it = order.begin() + static_cast<std::ptrdiff_t>(config.budget); it != order.end(); ++it) {
      report.removed.push_back(*it);
      report.removed_metrics.push_back(metrics[*it].value);
    }
    std::sort(keep.begin(), keep.end());
    candidates = std::move(keep);
  }
  report.kept = candidates;
  return {S.subset(candidates), std::move(report)};
}

void write_metrics_csv(std::ostream& os, const std::vector<MetricResult>& metrics, bool header) {
  if (header) os << "j,value,dual_bound,gap,iterations,wall_time_s,status\n";
  for (const auto& r : metrics) {
    os << r.j << ',' << format_double(r.value) << ',' << format_double(r.dual_bound) << ','
       << format_double(r.gap) << ',' << r.iterations << ',' << r.wall_time_s << ','
       << to_string(r.status) << '\n';
  }
}

}  // namespace maxplus
