#pragma once

// Importance-metric instances over the relaxed domain B(n), their Lagrangian
// dual (nuclear norm of a convex combination of the cut matrices), and the
// semidefinite membership test for B(n).

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "maxplus/basis.hpp"

namespace maxplus {

/// Data of max_{X in B(n)} min_i <A_i, X> + b_i for one candidate basis j,
/// with A_i = P_i - P_j and b_i = c_i - c_j over i != j (index order).
struct MetricInstance {
  std::size_t n = 0;
  std::size_t j = 0;
  /// Row k holds the real coordinates of A_k (see to_real).
  Eigen::MatrixXd A;
  RVec b;
  /// Original basis index of each row.
  std::vector<std::size_t> source;

  std::size_t size() const noexcept { return static_cast<std::size_t>(b.size()); }
  CMat diff(std::size_t k) const { return from_real(A.row(static_cast<Eigen::Index>(k)).transpose(), n, n); }
  /// max_i ||A_i||_F, the Lipschitz constant of the objective and of every
  /// soft-min smoothing of it.
  double lipschitz() const;
  /// True when every A_i vanishes (the objective is the constant min_i b_i).
  bool degenerate(double tol = 1e-14) const;
};

/// Build the instance from (A_i, b_i) pairs directly.
MetricInstance make_instance_from_diffs(const std::vector<CMat>& A, const std::vector<double>& b);
/// Throws std::invalid_argument for singleton sets.
MetricInstance make_instance(const BasisSet& S, std::size_t j);

enum class MetricStatus { kConverged, kIterationCap, kInfeasibleAccuracy };
std::string to_string(MetricStatus s);

struct MetricResult {
  std::size_t j = 0;
  double value = 0.0;         // certified lower bound on the relaxed metric
  CMat optimizer;             // point in B(n) attaining `value`
  double dual_bound = 0.0;    // upper bound from a simplex multiplier
  double gap = 0.0;           // dual_bound - value
  int iterations = 0;         // K0 for the bundle method
  std::size_t cuts = 0;       // final model size
  double wall_time_s = 0.0;
  MetricStatus status = MetricStatus::kConverged;
  std::string solver;
};

/// Upper bound nuclear_norm(sum alpha_i A_i) + sum alpha_i b_i on the metric.
/// Throws if alpha is not a point of the simplex.
double dual_value(const MetricInstance& inst, const RVec& alpha);

enum class DualMethod {
  kMirrorDescent,
  /// Interior-point solves on a growing set of violated rows, then
  /// mirror-descent polish.
  kInteriorPoint,
};

struct DualParams {
  DualMethod method = DualMethod::kMirrorDescent;
  double tol = defaults::kDualTol;
  int max_iter = defaults::kDualMaxIter;
  /// Optional starting weights (full length, on the simplex).
  std::optional<RVec> warm_start;
  /// Restrict the weights to these rows (all rows when empty).
  std::vector<std::size_t> support;
};

struct DualResult {
  RVec alpha;            // best multiplier found
  double bound = 0.0;    // dual_value(alpha)
  double primal = 0.0;   // best objective at a polar-factor candidate
  CMat primal_point;     // that unitary candidate
  int iterations = 0;
  bool converged = false;
};

/// Minimises dual_value over the simplex by entropic mirror descent. Each
/// iterate's polar factor U V^* is a unitary feasible point, so bound - primal
/// certifies the result without reference to any other solver.
DualResult solve_dual(const MetricInstance& inst, const DualParams& params = {});

/// Minimum eigenvalue of [[I, X], [X^*, I]]; nonnegative iff X in B(n).
double schur_feasibility(const CMat& X);

}  // namespace maxplus
