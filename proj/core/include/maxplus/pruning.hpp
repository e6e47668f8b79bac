#pragma once

// Importance metrics for every basis of a set and the pruning operator.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "maxplus/basis.hpp"
#include "maxplus/bundle.hpp"
#include "maxplus/metric.hpp"

namespace maxplus {

enum class PruneMode { kTopK, kDropNegative, kBoth };
enum class MetricSolver { kBundle, kDualOnly, kOracle };

PruneMode parse_prune_mode(const std::string& s);
MetricSolver parse_metric_solver(const std::string& s);
std::string to_string(PruneMode m);
std::string to_string(MetricSolver s);

struct OracleParams {
  int grid_per_axis = 24;
  int refine_iters = 4000;
};

struct PruningConfig {
  PruneMode mode = PruneMode::kTopK;
  std::size_t budget = 16;  // 0 = unlimited
  MetricSolver solver = MetricSolver::kBundle;
  BundleParams bundle;
  DualParams dual = [] {
    DualParams d;
    d.method = DualMethod::kInteriorPoint;
    return d;
  }();
  OracleParams oracle;
  double safety_margin = defaults::kPruneMargin;
  double gap_tol = defaults::kGapTol;
  unsigned threads = 1;
};

/// delta-bar_j over B(n), certified by a dual bound.
MetricResult importance_metric(const BasisSet& S, std::size_t j, const PruningConfig& config);

/// Metrics of every basis, collected by index. A singleton set yields one
/// +inf metric (always kept). A solver exception marks that basis
/// infeasible-accuracy with value +inf so that it is retained.
std::vector<MetricResult> compute_metrics(const BasisSet& S, const PruningConfig& config);

struct PruneReport {
  std::vector<std::size_t> kept;
  std::vector<std::size_t> removed;
  std::vector<double> removed_metrics;
};

/// drop-negative removes bases whose certified upper bound is below
/// -safety_margin; keep-top-k keeps the k largest values (lower index first
/// on ties); both applies drop-negative, then top-k. Metrics flagged as
/// failed are never dropped by the negativity rule.
std::pair<BasisSet, PruneReport> prune(const BasisSet& S, const std::vector<MetricResult>& metrics,
                                       const PruningConfig& config);

void write_metrics_csv(std::ostream& os, const std::vector<MetricResult>& metrics,
                       bool header = true);

}  // namespace maxplus
