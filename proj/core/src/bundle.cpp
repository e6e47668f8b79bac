#include "maxplus/bundle.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

#include "maxplus/detail/barrier.hpp"

namespace maxplus {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

ObjectiveValue min_with_index(const RVec& values) {
  ObjectiveValue best{values(0), 0};
  for (Eigen::Index i = 1; i < values.size(); ++i) {
    if (values(i) < best.value) best = {values(i), static_cast<std::size_t>(i)};
  }
  return best;
}

// Soft-min value and its gradient weights; returns -log(sum exp(-beta s))/beta.
double softmin(const RVec& s, double beta, RVec& weights) {
  const double lo = s.minCoeff();
  weights = (-beta * (s.array() - lo)).exp();
  const double total = weights.sum();
  weights /= total;
  return lo - std::log(total) / beta;
}

}  // namespace

ObjectiveValue full_objective(const MetricInstance& inst, const RVec& x) {
  if (inst.size() == 0) throw std::invalid_argument("full_objective: empty instance");
  return min_with_index(inst.A * x + inst.b);
}

ObjectiveValue full_objective(const MetricInstance& inst, const CMat& X) {
  if (static_cast<std::size_t>(X.rows()) != inst.n || X.rows() != X.cols()) {
    throw std::invalid_argument("full_objective: shape mismatch");
  }
  return full_objective(inst, to_real(X));
}

double smoothed_objective(const MetricInstance& inst, const RVec& x, double beta,
                          const std::vector<std::size_t>& rows) {
  if (!(beta > 0.0)) throw std::invalid_argument("smoothed_objective: beta must be positive");
  RVec s;
  if (rows.empty()) {
    s = inst.A * x + inst.b;
  } else {
    s.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const auto r = static_cast<Eigen::Index>(rows[k]);
      s(static_cast<Eigen::Index>(k)) = inst.A.row(r).dot(x) + inst.b(r);
    }
  }
  RVec weights;
  return softmin(s, beta, weights);
}

CutModel::CutModel(const MetricInstance& inst)
    : inst_(&inst), member_(inst.size(), 0), A_(0, inst.A.cols()), b_(0) {}

bool CutModel::add(std::size_t row) {
  if (row >= member_.size()) throw std::out_of_range("CutModel::add: row out of range");
  if (member_[row]) return false;
  member_[row] = 1;
  active_.push_back(row);
  const Eigen::Index k = A_.rows();
  A_.conservativeResize(k + 1, Eigen::NoChange);
  b_.conservativeResize(k + 1);
  A_.row(k) = inst_->A.row(static_cast<Eigen::Index>(row));
  b_(k) = inst_->b(static_cast<Eigen::Index>(row));
  return true;
}

double CutModel::value(const RVec& x) const {
  if (active_.empty()) throw std::logic_error("CutModel::value: empty model");
  return (A_ * x + b_).minCoeff();
}

InnerSolution smoothed_model_solve(const CutModel& model, const CMat& center, double mu,
                                   const InnerParams& params) {
  if (model.empty()) throw std::invalid_argument("smoothed_model_solve: empty model");
  if (!(mu > 0.0)) throw std::invalid_argument("smoothed_model_solve: mu must be positive");
  const Eigen::Index n = center.rows();
  const Eigen::MatrixXd& A = model.A();
  const RVec& b = model.b();
  const double K = A.rowwise().norm().maxCoeff();

  auto project = [&](const RVec& v) {
    return to_real(dykstra_intersect(from_real(v, n, n), center, mu).point);
  };

  InnerSolution out;
  RVec y = project(to_real(center));
  RVec weights;
  double beta = params.beta_start;
  double lipschitz = std::max(1e-12, beta * K * K * 1e-3);
  double mapping_norm = 0.0;

  while (true) {
    RVec z = y;
    double momentum = 1.0;
    double fy = softmin(A * y + b, beta, weights);
    bool stage_done = false;
    for (int it = 0; it < params.max_inner; ++it) {
      ++out.iterations;
      const double fz = softmin(A * z + b, beta, weights);
      const RVec grad = A.transpose() * weights;
      RVec y_next;
      double f_next = 0.0;
      for (int bt = 0; bt < 80; ++bt) {
        y_next = project(z + grad / lipschitz);
        f_next = softmin(A * y_next + b, beta, weights);
        const RVec d = y_next - z;
        if (f_next >= fz + grad.dot(d) - 0.5 * lipschitz * d.squaredNorm() - 1e-15) break;
        lipschitz *= 2.0;
      }
      mapping_norm = lipschitz * (y_next - z).norm();
      if (f_next < fy) {
        // A plain gradient step from y that fails to ascend means y is
        // stationary to working precision.
        if (momentum == 1.0) {
          stage_done = true;
          break;
        }
        // Monotone restart: drop momentum and retry from the last iterate.
        z = y;
        momentum = 1.0;
        continue;
      }
      const double moved = (y_next - y).norm();
      const double next_momentum = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
      z = y_next + ((momentum - 1.0) / next_momentum) * (y_next - y);
      momentum = next_momentum;
      y = y_next;
      fy = f_next;
      lipschitz *= 0.95;
      // The second test catches stages whose mapping tolerance lies below
      // the resolution of double precision at this beta.
      if (mapping_norm <= params.grad_tol || moved <= 1e-15 * (1.0 + y.norm())) {
        stage_done = true;
        break;
      }
    }
    if (!stage_done) out.capped = true;
    if (beta >= params.beta_cap) break;
    const double next = std::min(params.beta_cap, beta * params.beta_factor);
    lipschitz *= next / beta;
    beta = next;
  }

  out.y = y;
  out.w = model.value(y);
  out.accuracy = std::log(static_cast<double>(model.size())) / beta + mapping_norm * mu;
  return out;
}

InnerSolution barrier_model_solve(const CutModel& model, const CMat& center, double mu,
                                  const InnerParams& params) {
  if (model.empty()) throw std::invalid_argument("barrier_model_solve: empty model");
  if (!(mu > 0.0)) throw std::invalid_argument("barrier_model_solve: mu must be positive");
  detail::BarrierSettings settings;
  settings.gap = params.barrier_gap;
  settings.max_newton = params.max_newton;
  const detail::BarrierResult br =
      detail::barrier_maximin(model.A(), model.b(), center.rows(), to_real(center), mu, settings);
  InnerSolution out;
  out.y = br.y;
  out.w = model.value(br.y);
  out.accuracy = br.gap_bound;
  out.alpha = br.alpha;
  out.iterations = br.newton_steps;
  out.capped = br.capped;
  return out;
}

BundleReport bundle_solve(const MetricInstance& inst, const BundleParams& params) {
  if (inst.size() == 0) throw std::invalid_argument("bundle_solve: empty instance");
  if (!(params.mu > 0.0) || !(params.epsilon > 0.0) || !(params.gamma > 0.0 && params.gamma < 1.0)) {
    throw std::invalid_argument("bundle_solve: require mu > 0, epsilon > 0, 0 < gamma < 1");
  }
  const auto start = Clock::now();
  const auto n = static_cast<Eigen::Index>(inst.n);
  const Eigen::Index D = inst.A.cols();
  const auto m = static_cast<Eigen::Index>(inst.size());

  BundleReport report;
  MetricResult& res = report.result;
  res.j = inst.j;
  res.solver = "bundle";

  if (inst.degenerate()) {
    const ObjectiveValue fv = min_with_index(inst.b);
    res.value = fv.value;
    res.optimizer = CMat::Zero(n, n);
    res.dual_bound = fv.value;
    report.alpha = RVec::Zero(m);
    report.alpha(static_cast<Eigen::Index>(fv.argmin)) = 1.0;
    report.active = {fv.argmin};
    res.cuts = 1;
    res.wall_time_s = seconds_since(start);
    return report;
  }

  CutModel model(inst);
  RVec x = RVec::Zero(D);
  ObjectiveValue fx = full_objective(inst, x);
  report.objective_scans = 1;

  double best_bound = std::numeric_limits<double>::infinity();
  RVec best_alpha;
  bool converged = false;
  int k = 0;
  double v = fx.value;

  while (k < params.max_outer) {
    ++k;
    model.add(fx.argmin);
    v = fx.value;
    const CMat center = from_real(x, n, n);
    const InnerSolution inner = params.inner.method == InnerMethod::kBarrier
                                    ? barrier_model_solve(model, center, params.mu, params.inner)
                                    : smoothed_model_solve(model, center, params.mu, params.inner);
    report.inner_iterations += inner.iterations;
    const double w = inner.w;
    const double step = (inner.y - x).norm();

    if (inner.alpha.size() == static_cast<Eigen::Index>(model.size())) {
      RVec alpha = RVec::Zero(m);
      for (std::size_t a = 0; a < model.size(); ++a) {
        alpha(static_cast<Eigen::Index>(model.active()[a])) = inner.alpha(static_cast<Eigen::Index>(a));
      }
      const double bound = dual_value(inst, alpha);
      if (bound < best_bound) {
        best_bound = bound;
        best_alpha = std::move(alpha);
      }
    }

    bool stop = false;
    if (w - v < params.epsilon && step < params.mu) {
      stop = true;
    } else if (params.dual_gap_stop && best_bound - v <= params.epsilon) {
      stop = true;
      report.stopped_by_dual = true;
    }

    bool serious = false;
    if (!stop) {
      const ObjectiveValue fy = full_objective(inst, inner.y);
      ++report.objective_scans;
      if (fy.value - v > params.gamma * (w - v)) {
        x = inner.y;
        fx = fy;
        serious = true;
        ++report.serious_steps;
      } else {
        model.add(fy.argmin);
        ++report.null_steps;
      }
    }
    if (params.record_trace) {
      report.trace.push_back({k, v, w, serious, model.size(), inner.iterations, seconds_since(start)});
    }
    if (stop) {
      converged = true;
      break;
    }
  }
  if (!converged) v = fx.value;

  // Certificate: simplex weights on the final active set.
  DualParams cert = params.certificate;
  cert.support = model.active();
  if (best_alpha.size() == m) cert.warm_start = best_alpha;
  cert.tol = std::min(cert.tol, params.epsilon);
  if (!(best_bound - v <= cert.tol)) {
    const DualResult dr = solve_dual(inst, cert);
    if (dr.bound < best_bound) {
      best_bound = dr.bound;
      best_alpha = dr.alpha;
    }
  }

  res.value = v;
  res.optimizer = from_real(x, n, n);
  res.dual_bound = best_bound;
  res.gap = std::max(0.0, best_bound - v);
  res.iterations = k;
  res.cuts = model.size();
  if (!converged) {
    res.status = MetricStatus::kIterationCap;
  } else if (res.gap > params.gap_tol) {
    res.status = MetricStatus::kInfeasibleAccuracy;
  }
  report.active = model.active();
  report.alpha = best_alpha;
  res.wall_time_s = seconds_since(start);
  return report;
}

void write_trace_csv(std::ostream& os, const std::vector<BundleTraceRow>& trace) {
  os << "k,v_k,w_k,step_type,cuts,inner_iters,time_s\n";
  for (const auto& r : trace) {
    os << r.k << ',' << format_double(r.v) << ',' << format_double(r.w) << ','
       << (r.serious ? "serious" : "null") << ',' << r.cuts << ',' << r.inner_iters << ','
       << r.time_s << '\n';
  }
}

}  // namespace maxplus
