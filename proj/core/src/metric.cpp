#include "maxplus/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "maxplus/bundle.hpp"
#include "maxplus/detail/barrier.hpp"

namespace maxplus {

double MetricInstance::lipschitz() const {
  if (A.rows() == 0) return 0.0;
  return A.rowwise().norm().maxCoeff();
}

bool MetricInstance::degenerate(double tol) const {
  return A.rows() == 0 || A.cwiseAbs().maxCoeff() <= tol;
}

MetricInstance make_instance_from_diffs(const std::vector<CMat>& A, const std::vector<double>& b) {
  if (A.empty() || A.size() != b.size()) {
    throw std::invalid_argument("make_instance_from_diffs: need matching nonempty lists");
  }
  MetricInstance inst;
  inst.n = static_cast<std::size_t>(A.front().rows());
  const Eigen::Index D = 2 * static_cast<Eigen::Index>(inst.n * inst.n);
  inst.A.resize(static_cast<Eigen::Index>(A.size()), D);
  inst.b.resize(static_cast<Eigen::Index>(b.size()));
  for (std::size_t k = 0; k < A.size(); ++k) {
    require_square(A[k], "make_instance_from_diffs");
    if (static_cast<std::size_t>(A[k].rows()) != inst.n) {
      throw std::invalid_argument("make_instance_from_diffs: dimension mismatch");
    }
    inst.A.row(static_cast<Eigen::Index>(k)) = to_real(A[k]).transpose();
    inst.b(static_cast<Eigen::Index>(k)) = b[k];
    inst.source.push_back(k + 1);
  }
  return inst;
}

MetricInstance make_instance(const BasisSet& S, std::size_t j) {
  if (S.size() < 2) throw std::invalid_argument("make_instance: metric undefined for fewer than two bases");
  if (j >= S.size()) throw std::out_of_range("make_instance: candidate index out of range");
  MetricInstance inst;
  inst.n = S.dim();
  inst.j = j;
  const Eigen::Index D = 2 * static_cast<Eigen::Index>(inst.n * inst.n);
  const Eigen::Index rows = static_cast<Eigen::Index>(S.size() - 1);
  inst.A.resize(rows, D);
  inst.b.resize(rows);
  const RVec pj = to_real(S[j].P);
  Eigen::Index r = 0;
  for (std::size_t i = 0; i < S.size(); ++i) {
    if (i == j) continue;
    inst.A.row(r) = (to_real(S[i].P) - pj).transpose();
    inst.b(r) = S[i].c - S[j].c;
    inst.source.push_back(i);
    ++r;
  }
  return inst;
}

std::string to_string(MetricStatus s) {
  switch (s) {
    case MetricStatus::kConverged: return "converged";
    case MetricStatus::kIterationCap: return "iteration-cap";
    case MetricStatus::kInfeasibleAccuracy: return "infeasible-accuracy";
  }
  return "unknown";
}

namespace {

void require_simplex(const RVec& alpha, std::size_t m) {
  if (static_cast<std::size_t>(alpha.size()) != m) {
    throw std::invalid_argument("dual_value: weight vector length differs from instance size");
  }
  if (m == 0 || alpha.minCoeff() < 0.0 || std::abs(alpha.sum() - 1.0) > 1e-9) {
    throw std::invalid_argument("dual_value: weights must lie on the probability simplex");
  }
}

struct DualPoint {
  double f;         // dual value
  RVec g;           // subgradient over the support
  CMat W;           // polar factor of the combination
};

DualPoint evaluate_dual(const MetricInstance& inst, const Eigen::MatrixXd& A, const RVec& b,
                        const RVec& alpha) {
  const RVec combo = A.transpose() * alpha;
  const CMat M = from_real(combo, static_cast<Eigen::Index>(inst.n), static_cast<Eigen::Index>(inst.n));
  Eigen::JacobiSVD<CMat> solver(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  DualPoint out;
  out.W = solver.matrixU() * solver.matrixV().adjoint();
  out.g = A * to_real(out.W) + b;
  out.f = solver.singularValues().sum() + alpha.dot(b);
  return out;
}

}  // namespace

double dual_value(const MetricInstance& inst, const RVec& alpha) {
  require_simplex(alpha, inst.size());
  const RVec combo = inst.A.transpose() * alpha;
  const auto n = static_cast<Eigen::Index>(inst.n);
  return nuclear_norm(from_real(combo, n, n)) + alpha.dot(inst.b);
}

DualResult solve_dual(const MetricInstance& inst, const DualParams& params) {
  if (!(params.tol > 0.0)) throw std::invalid_argument("solve_dual: tol must be positive");
  const std::size_t m = inst.size();
  if (m == 0) throw std::invalid_argument("solve_dual: empty instance");

  std::vector<std::size_t> support = params.support;
  if (support.empty()) {
    support.resize(m);
    for (std::size_t i = 0; i < m; ++i) support[i] = i;
  }
  const auto k = static_cast<Eigen::Index>(support.size());
  Eigen::MatrixXd A(k, inst.A.cols());
  RVec b(k);
  for (Eigen::Index r = 0; r < k; ++r) {
    A.row(r) = inst.A.row(static_cast<Eigen::Index>(support[static_cast<std::size_t>(r)]));
    b(r) = inst.b(static_cast<Eigen::Index>(support[static_cast<std::size_t>(r)]));
  }
  const bool restricted = support.size() != m;

  RVec alpha = RVec::Constant(k, 1.0 / static_cast<double>(k));
  if (params.warm_start) {
    const RVec& ws = *params.warm_start;
    if (static_cast<std::size_t>(ws.size()) != m) {
      throw std::invalid_argument("solve_dual: warm start length differs from instance size");
    }
    RVec restricted_ws(k);
    for (Eigen::Index r = 0; r < k; ++r) {
      restricted_ws(r) = std::max(0.0, ws(static_cast<Eigen::Index>(support[static_cast<std::size_t>(r)])));
    }
    if (restricted_ws.sum() > 0.0) alpha = restricted_ws / restricted_ws.sum();
  }

  DualResult out;
  out.bound = std::numeric_limits<double>::infinity();
  out.primal = -std::numeric_limits<double>::infinity();
  if (params.method == DualMethod::kInteriorPoint) {
    // Cutting planes: interior-point solves on a growing subset of rows.
    const auto n = static_cast<Eigen::Index>(inst.n);
    const Eigen::Index D = inst.A.cols();
    std::vector<Eigen::Index> rows(static_cast<std::size_t>(k));
    for (Eigen::Index r = 0; r < k; ++r) rows[static_cast<std::size_t>(r)] = r;
    std::stable_sort(rows.begin(), rows.end(), [&](Eigen::Index x, Eigen::Index y) { return b(x) < b(y); });
    const auto seed_count = std::min<std::size_t>(rows.size(), static_cast<std::size_t>(D + 1));
    std::vector<Eigen::Index> work(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(seed_count));
    std::vector<char> in_work(static_cast<std::size_t>(k), 0);
    for (Eigen::Index r : work) in_work[static_cast<std::size_t>(r)] = 1;

    constexpr std::size_t kAddPerRound = 8;
    while (true) {
      const auto w = static_cast<Eigen::Index>(work.size());
      Eigen::MatrixXd Aw(w, D);
      RVec bw(w);
      for (Eigen::Index r = 0; r < w; ++r) {
        Aw.row(r) = A.row(work[static_cast<std::size_t>(r)]);
        bw(r) = b(work[static_cast<std::size_t>(r)]);
      }
      const detail::BarrierResult br = detail::barrier_maximin(
          Aw, bw, n, RVec::Zero(D), std::numeric_limits<double>::infinity(), detail::BarrierSettings{});
      out.iterations += br.newton_steps;
      const RVec values = A * br.y + b;
      out.primal = values.minCoeff();
      out.primal_point = from_real(br.y, n, n);
      alpha.setZero();
      for (Eigen::Index r = 0; r < w; ++r) alpha(work[static_cast<std::size_t>(r)]) = br.alpha(r);

      const double restricted_bound = br.lambda + br.gap_bound;
      std::vector<Eigen::Index> violated;
      for (Eigen::Index r = 0; r < k; ++r) {
        if (!in_work[static_cast<std::size_t>(r)] && values(r) < restricted_bound - params.tol) violated.push_back(r);
      }
      if (violated.empty()) break;
      const auto take = std::min(kAddPerRound, violated.size());
      std::partial_sort(violated.begin(), violated.begin() + static_cast<std::ptrdiff_t>(take), violated.end(),
                        [&](Eigen::Index x, Eigen::Index y) { return values(x) < values(y); });
      for (std::size_t q = 0; q < take; ++q) {
        in_work[static_cast<std::size_t>(violated[q])] = 1;
        work.push_back(violated[q]);
      }
    }
  }
  RVec best_alpha = alpha;
  double theta = 1.0;
  int stall = 0;

  const int base_iterations = out.iterations;
  for (int it = 1; it <= params.max_iter; ++it) {
    out.iterations = base_iterations + it;
    const DualPoint dp = evaluate_dual(inst, A, b, alpha);
    const double lower = dp.g.minCoeff();
    if (lower > out.primal) {
      out.primal = lower;
      out.primal_point = dp.W;
    }
    if (dp.f < out.bound - 1e-15) {
      out.bound = dp.f;
      best_alpha = alpha;
      stall = 0;
    } else if (++stall > 30) {
      theta *= 0.5;
      stall = 0;
      alpha = best_alpha;
      continue;
    }
    if (out.bound - out.primal <= params.tol) {
      out.converged = true;
      break;
    }
    // Polyak-type step towards the best certified lower bound.
    const double mid = 0.5 * (dp.g.maxCoeff() + lower);
    const RVec centred = dp.g.array() - mid;
    const double spread = centred.cwiseAbs().maxCoeff();
    if (!(spread > 0.0) || theta < 1e-12) {
      out.converged = out.bound - out.primal <= params.tol;
      break;
    }
    const double eta = theta * (dp.f - out.primal) / (spread * spread);
    RVec logits = alpha.array().max(1e-300).log() - eta * centred.array();
    logits.array() -= logits.maxCoeff();
    alpha = logits.array().exp();
    alpha /= alpha.sum();
  }

  out.alpha = RVec::Zero(static_cast<Eigen::Index>(m));
  for (Eigen::Index r = 0; r < k; ++r) {
    out.alpha(static_cast<Eigen::Index>(support[static_cast<std::size_t>(r)])) = best_alpha(r);
  }
  if (restricted && out.primal_point.size() > 0) {
    // The restricted lower bound does not bound the full problem; report the
    // exact full objective at the same point instead.
    out.primal = full_objective(inst, out.primal_point).value;
  }
  return out;
}

double schur_feasibility(const CMat& X) {
  require_square(X, "schur_feasibility");
  const Eigen::Index n = X.rows();
  CMat block = CMat::Identity(2 * n, 2 * n);
  block.topRightCorner(n, n) = X;
  block.bottomLeftCorner(n, n) = X.adjoint();
  Eigen::SelfAdjointEigenSolver<CMat> eig(block, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

}  // namespace maxplus
