#pragma once

// Trust-region bundle method for max_{X in B(n)} min_i <A_i, X> + b_i.
//
// Each outer iteration maximises the cutting-plane model restricted to the
// active cut set J_k over B(n) intersected with a Frobenius trust region,
// then takes a serious step (move the center) or a null step (add the cut
// that is active at the trial point).

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <vector>

#include "maxplus/metric.hpp"

namespace maxplus {

struct ObjectiveValue {
  double value;
  std::size_t argmin;
};

/// Exact min over every row, ties to the lowest index.
ObjectiveValue full_objective(const MetricInstance& inst, const CMat& X);
ObjectiveValue full_objective(const MetricInstance& inst, const RVec& x);

/// Soft-min -log(sum_i exp(-beta s_i)) / beta over the given rows; within
/// log(m)/beta below the hard min.
double smoothed_objective(const MetricInstance& inst, const RVec& x, double beta,
                          const std::vector<std::size_t>& rows = {});

/// Active cut set J_k, in insertion order, without duplicates.
class CutModel {
 public:
  explicit CutModel(const MetricInstance& inst);

  /// Returns false when the index is already present.
  bool add(std::size_t row);
  bool contains(std::size_t row) const { return member_[row] != 0; }
  std::size_t size() const noexcept { return active_.size(); }
  bool empty() const noexcept { return active_.empty(); }
  const std::vector<std::size_t>& active() const noexcept { return active_; }
  const MetricInstance& instance() const noexcept { return *inst_; }

  /// min over J_k of the cut values (the model phi_k^CP).
  double value(const RVec& x) const;

  const Eigen::MatrixXd& A() const noexcept { return A_; }
  const RVec& b() const noexcept { return b_; }

 private:
  const MetricInstance* inst_;
  std::vector<std::size_t> active_;
  std::vector<char> member_;
  Eigen::MatrixXd A_;  // rows of the active cuts
  RVec b_;
};

enum class InnerMethod { kBarrier, kSmoothing };

struct InnerParams {
  InnerMethod method = InnerMethod::kBarrier;
  // smoothing
  double beta_start = defaults::kBetaStart;
  double beta_factor = defaults::kBetaFactor;
  double beta_cap = defaults::kBetaCap;
  double grad_tol = defaults::kGradTol;
  int max_inner = defaults::kMaxInner;
  // barrier
  double barrier_gap = defaults::kBarrierGap;
  int max_newton = defaults::kMaxNewton;
};

struct InnerSolution {
  RVec y;                 // trial point (real coordinates)
  double w = 0.0;         // exact model value at y
  double accuracy = 0.0;  // bound on (model optimum - w)
  RVec alpha;             // multipliers on the active cuts (barrier only)
  int iterations = 0;
  bool capped = false;
};

/// Soft-min smoothing of the model, maximised by accelerated projected
/// gradient over B(n) and the trust region (Dykstra projections), with a
/// geometric continuation in beta. `accuracy` = log|J|/beta_final +
/// (final gradient-mapping norm) * mu.
InnerSolution smoothed_model_solve(const CutModel& model, const CMat& center, double mu,
                                   const InnerParams& params = {});

/// Same subproblem solved by an interior-point method: primal-dual on the
/// cut slacks, with the barriers -log det(I - Y Y^*) for B(n) and
/// -log(mu^2 - |y - center|^2) for the trust region. Pass mu = +inf to drop
/// the trust region.
InnerSolution barrier_model_solve(const CutModel& model, const CMat& center, double mu,
                                  const InnerParams& params = {});

struct BundleParams {
  double mu = defaults::kTrustRadius;
  double epsilon = defaults::kBundleEpsilon;
  double gamma = defaults::kDescentGamma;
  int max_outer = defaults::kMaxOuter;
  InnerParams inner;
  /// Also stop once the dual certificate of the current multipliers closes
  /// to within epsilon.
  bool dual_gap_stop = true;
  /// Polish the final certificate with solve_dual on the active cuts.
  DualParams certificate = [] {
    DualParams d;
    d.method = DualMethod::kInteriorPoint;
    return d;
  }();
  double gap_tol = defaults::kGapTol;
  unsigned seed = 0;
  bool record_trace = false;
};

struct BundleTraceRow {
  int k;
  double v;
  double w;
  bool serious;
  std::size_t cuts;
  int inner_iters;
  double time_s;
};

struct BundleReport {
  MetricResult result;
  std::vector<BundleTraceRow> trace;
  std::vector<std::size_t> active;  // final J_k
  RVec alpha;                       // certificate weights over all rows
  int serious_steps = 0;
  int null_steps = 0;
  long long objective_scans = 0;    // full O(m) evaluations
  long long inner_iterations = 0;
  bool stopped_by_dual = false;
};

BundleReport bundle_solve(const MetricInstance& inst, const BundleParams& params = {});

void write_trace_csv(std::ostream& os, const std::vector<BundleTraceRow>& trace);

}  // namespace maxplus
