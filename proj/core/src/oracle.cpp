#include "maxplus/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace maxplus {

namespace {

constexpr double kPi = std::numbers::pi;

// Real coordinates of the chart image, in to_real() order.
void chart_coords(std::size_t n, const double* p, double* out) {
  if (n == 1) {
    out[0] = std::cos(p[0]);
    out[1] = std::sin(p[0]);
    return;
  }
  const double phi = p[0], t = p[1], a = p[2], b = p[3];
  const double c = std::cos(t), s = std::sin(t);
  out[0] = c * std::cos(phi + a);
  out[1] = c * std::sin(phi + a);
  out[2] = s * std::cos(phi + b);
  out[3] = s * std::sin(phi + b);
  out[4] = -s * std::cos(phi - b);
  out[5] = -s * std::sin(phi - b);
  out[6] = c * std::cos(phi - a);
  out[7] = c * std::sin(phi - a);
}

class ChartObjective {
 public:
  ChartObjective(const MetricInstance& inst, bool special)
      : inst_(inst), special_(special), D_(static_cast<std::size_t>(inst.A.cols())) {}

  // Parameters exclude phi on the SU(2) sub-chart.
  double operator()(const double* q) {
    ++evaluations;
    std::array<double, 4> p{};
    const double* full = q;
    if (special_ && inst_.n == 2) {
      p = {0.0, q[0], q[1], q[2]};
      full = p.data();
    }
    std::array<double, 8> x{};
    chart_coords(inst_.n, full, x.data());
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index r = 0; r < inst_.A.rows(); ++r) {
      double v = inst_.b(r);
      for (std::size_t k = 0; k < D_; ++k) v += inst_.A(r, static_cast<Eigen::Index>(k)) * x[k];
      best = std::min(best, v);
    }
    return best;
  }

  // Soft-min -log(sum exp(-beta s_i)) / beta at the same point.
  double soft(const double* q, double beta) {
    std::array<double, 4> p{};
    const double* full = q;
    if (special_ && inst_.n == 2) {
      p = {0.0, q[0], q[1], q[2]};
      full = p.data();
    }
    std::array<double, 8> x{};
    chart_coords(inst_.n, full, x.data());
    slack_.resize(static_cast<std::size_t>(inst_.A.rows()));
    double lo = std::numeric_limits<double>::infinity();
    for (Eigen::Index r = 0; r < inst_.A.rows(); ++r) {
      double v = inst_.b(r);
      for (std::size_t k = 0; k < D_; ++k) v += inst_.A(r, static_cast<Eigen::Index>(k)) * x[k];
      slack_[static_cast<std::size_t>(r)] = v;
      lo = std::min(lo, v);
    }
    double sum = 0.0;
    for (double v : slack_) sum += std::exp(-beta * (v - lo));
    return lo - std::log(sum) / beta;
  }

  CMat point(const std::vector<double>& q) const {
    UnitaryChart chart{inst_.n};
    if (special_ && inst_.n == 2) return chart.map({0.0, q[0], q[1], q[2]});
    return chart.map(q);
  }

  long long evaluations = 0;

 private:
  const MetricInstance& inst_;
  bool special_;
  std::size_t D_;
  std::vector<double> slack_;
};

struct Axis {
  double lo;
  double step;
  int count;
};

struct Candidate {
  double value;
  std::vector<double> params;
};

// Grid scan keeping the best `keep` points, then compass/diagonal pattern
// search from each with a halving step.
Candidate search(ChartObjective& f, const std::vector<Axis>& axes, int refine_iters, std::size_t keep) {
  const std::size_t dim = axes.size();
  std::vector<Candidate> top;
  std::vector<int> idx(dim, 0);
  std::vector<double> q(dim);
  while (true) {
    for (std::size_t d = 0; d < dim; ++d) q[d] = axes[d].lo + axes[d].step * idx[d];
    const double v = f(q.data());
    if (top.size() < keep || v > top.back().value) {
      Candidate c{v, q};
      auto pos = std::upper_bound(top.begin(), top.end(), c,
                                  [](const Candidate& a, const Candidate& b) { return a.value > b.value; });
      top.insert(pos, std::move(c));
      if (top.size() > keep) top.pop_back();
    }
    std::size_t d = 0;
    while (d < dim && ++idx[d] == axes[d].count) idx[d++] = 0;
    if (d == dim) break;
  }

  std::vector<std::vector<double>> directions;
  for (std::size_t a = 0; a < dim; ++a) {
    for (double s : {1.0, -1.0}) {
      std::vector<double> e(dim, 0.0);
      e[a] = s;
      directions.push_back(e);
    }
    for (std::size_t b2 = a + 1; b2 < dim; ++b2) {
      for (double sa : {1.0, -1.0}) {
        for (double sb : {1.0, -1.0}) {
          std::vector<double> e(dim, 0.0);
          e[a] = sa;
          e[b2] = sb;
          directions.push_back(e);
        }
      }
    }
  }

  Candidate best = top.front();
  for (const Candidate& start : top) {
    Candidate cur = start;
    std::vector<double> step(dim);
    for (std::size_t d = 0; d < dim; ++d) step[d] = axes[d].step;
    int used = 0;
    while (used < refine_iters) {
      bool improved = false;
      for (const auto& dir : directions) {
        for (std::size_t d = 0; d < dim; ++d) q[d] = cur.params[d] + step[d] * dir[d];
        const double v = f(q.data());
        ++used;
        if (v > cur.value) {
          cur.value = v;
          cur.params = q;
          improved = true;
        }
      }
      if (!improved) {
        double largest = 0.0;
        for (auto& s : step) {
          s *= 0.5;
          largest = std::max(largest, s);
        }
        if (largest < 1e-13) break;
      }
    }
    // Pattern search can stall on a kink of the min; follow the ridge with
    // gradient ascent on the soft-min, sharpening beta as it goes.
    std::vector<double> x = cur.params, g(dim), trial(dim);
    for (double beta = 1e2; beta <= 1e9; beta *= 10.0) {
      double lr = 1.0 / beta;
      for (int it = 0; it < 200; ++it) {
        const double fx = f.soft(x.data(), beta);
        const double hstep = 1e-7;
        for (std::size_t d = 0; d < dim; ++d) {
          trial = x;
          trial[d] += hstep;
          const double up = f.soft(trial.data(), beta);
          trial[d] -= 2.0 * hstep;
          g[d] = (up - f.soft(trial.data(), beta)) / (2.0 * hstep);
        }
        bool moved = false;
        for (int ls = 0; ls < 40; ++ls) {
          for (std::size_t d = 0; d < dim; ++d) trial[d] = x[d] + lr * g[d];
          if (f.soft(trial.data(), beta) > fx) {
            x = trial;
            lr *= 2.0;
            moved = true;
            break;
          }
          lr *= 0.5;
        }
        if (!moved) break;
      }
      const double hard = f(x.data());
      if (hard > cur.value) {
        cur.value = hard;
        cur.params = x;
      }
    }
    if (cur.value > best.value) best = cur;
  }
  return best;
}

}  // namespace

std::size_t UnitaryChart::parameter_count(std::size_t n) {
  if (n == 1) return 1;
  if (n == 2) return 4;
  throw std::invalid_argument("UnitaryChart: only n = 1, 2 are supported");
}

CMat UnitaryChart::map(const std::vector<double>& params) const {
  if (params.size() != parameter_count(n)) throw std::invalid_argument("UnitaryChart: wrong parameter count");
  std::array<double, 8> x{};
  chart_coords(n, params.data(), x.data());
  return from_real(Eigen::Map<const RVec>(x.data(), static_cast<Eigen::Index>(2 * n * n)),
                   static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
}

BruteForceResult brute_force_unitary(const MetricInstance& inst, int grid_per_axis, int refine_iters) {
  if (inst.n > 2 || inst.n == 0) throw std::invalid_argument("brute_force_unitary: unsupported for n > 2");
  if (grid_per_axis < 2) throw std::invalid_argument("brute_force_unitary: grid_per_axis must be >= 2");
  const double K = inst.lipschitz();
  BruteForceResult out;

  if (inst.n == 1) {
    const int g = grid_per_axis;
    ChartObjective f(inst, false);
    const std::vector<Axis> axes{{0.0, 2.0 * kPi / g, g}};
    const Candidate c = search(f, axes, refine_iters, 4);
    out.value = c.value;
    out.maximizer = f.point(c.params);
    out.resolution = K * axes[0].step / 2.0;
    // SU(1) = {1}
    out.su_maximizer = CMat::Identity(1, 1);
    out.su_value = full_objective(inst, out.su_maximizer).value;
    out.evaluations = f.evaluations + 1;
    return out;
  }

  // Even counts on the periodic axes make phi = pi coincide with a grid point
  // of the phi = 0 slice (shifted a, b), so phi in [0, pi) suffices.
  const int g = grid_per_axis + (grid_per_axis % 2);
  const Axis phi{0.0, kPi / g, g};
  const Axis theta{0.0, (kPi / 2.0) / (g - 1), g};
  const Axis alpha{0.0, 2.0 * kPi / g, g};
  const Axis beta = alpha;

  ChartObjective fu(inst, false);
  const Candidate cu = search(fu, {phi, theta, alpha, beta}, refine_iters, 8);
  ChartObjective fs(inst, true);
  const Candidate cs = search(fs, {theta, alpha, beta}, refine_iters, 8);

  out.su_value = cs.value;
  out.su_maximizer = fs.point(cs.params);
  // SU(2) points are unitary, so the U(2) search keeps whichever is higher.
  if (cs.value > cu.value) {
    out.value = cs.value;
    out.maximizer = out.su_maximizer;
  } else {
    out.value = cu.value;
    out.maximizer = fu.point(cu.params);
  }
  out.resolution = K * std::sqrt(2.0) * 0.5 * (phi.step + theta.step + alpha.step + beta.step);
  out.evaluations = fu.evaluations + fs.evaluations;
  return out;
}

CMat unitarize(const CMat& X) { return polar_factor(X); }

CMat integrate_schrodinger(const CMat& H, double t, const CMat& U0, int steps) {
  require_square(H, "integrate_schrodinger");
  require_same_shape(H, U0, "integrate_schrodinger");
  if (!is_hermitian(H)) throw std::invalid_argument("integrate_schrodinger: H is not Hermitian");
  if (steps < 1) throw std::invalid_argument("integrate_schrodinger: steps must be >= 1");
  const CMat iH = Complex(0.0, 1.0) * H;
  const double h = t / steps;
  CMat U = U0;
  for (int s = 0; s < steps; ++s) {
    const CMat k1 = iH * U;
    const CMat k2 = iH * (U + 0.5 * h * k1);
    const CMat k3 = iH * (U + 0.5 * h * k2);
    const CMat k4 = iH * (U + h * k3);
    U += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return U;
}

CMat haar_unitary(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto dim = static_cast<Eigen::Index>(n);
  CMat Z(dim, dim);
  const double scale = 1.0 / std::sqrt(2.0);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      const double re = normal(rng);
      const double im = normal(rng);
      Z(r, c) = scale * Complex(re, im);
    }
  }
  Eigen::HouseholderQR<CMat> qr(Z);
  CMat Q = qr.householderQ();
  const CMat& R = qr.matrixQR();
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double mag = std::abs(R(k, k));
    const Complex phase = mag > 0.0 ? R(k, k) / mag : Complex(1.0, 0.0);
    Q.col(k) *= phase;
  }
  return Q;
}

BasisSet random_instance(std::size_t n, std::size_t m, unsigned long long seed) {
  if (n == 0 || m < 2) throw std::invalid_argument("random_instance: need n >= 1 and m >= 2");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<AffineBasis> bases;
  bases.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    AffineBasis b;
    b.P = haar_unitary(n, rng);
    b.c = uniform(rng);
    bases.push_back(std::move(b));
  }
  return BasisSet(std::move(bases));
}

BasisSet harvest_propagation(GateSynthesisProblem problem, std::size_t step, unsigned long long seed) {
  if (seed != 0) {
    std::mt19937_64 rng(seed);
    problem.target = haar_unitary(problem.n, rng);
  }
  const auto props = build_propagators(problem);
  BasisSet S = terminal_basis(problem);
  for (std::size_t k = 0; k < step; ++k) S = propagate_step(S, props);
  return S;
}

ExactnessReport exactness_check(const BasisSet& S, std::size_t j, const ExactnessParams& params) {
  const MetricInstance inst = make_instance(S, j);
  ExactnessReport rep;

  const BundleReport br = bundle_solve(inst, params.bundle);
  rep.relaxed = br.result.value;
  rep.relaxed_bound = br.result.dual_bound;
  const BruteForceResult bf =
      brute_force_unitary(inst, params.oracle.grid_per_axis, params.oracle.refine_iters);
  rep.unitary = bf.value;
  rep.special_unitary = bf.su_value;
  rep.resolution = bf.resolution;
  // U(n) is inside B(n), so the brute-force value may not exceed the dual bound.
  rep.relaxation_ok = std::abs(rep.relaxed - rep.unitary) <= params.tol + rep.resolution &&
                      rep.unitary <= rep.relaxed_bound + 1e-9 &&
                      rep.special_unitary <= rep.unitary + 1e-12;

  // Smoothed problem over B(n) (the trust region is made inactive), then
  // replace the singular values of its maximiser by ones.
  CutModel all(inst);
  for (std::size_t r = 0; r < inst.size(); ++r) all.add(r);
  InnerParams sp;
  sp.method = InnerMethod::kSmoothing;
  sp.beta_cap = params.smoothing_beta;
  sp.max_inner = 200000;
  sp.grad_tol = 1e-10;
  const double radius = std::sqrt(static_cast<double>(inst.n)) + 1.0;
  const auto n = static_cast<Eigen::Index>(inst.n);
  const InnerSolution smooth = smoothed_model_solve(all, CMat::Zero(n, n), radius, sp);
  const CMat U = unitarize(from_real(smooth.y, n, n));
  rep.smoothed_optimum = smoothed_objective(inst, smooth.y, params.smoothing_beta);
  rep.smoothed_unitarized = smoothed_objective(inst, to_real(U), params.smoothing_beta);
  rep.unitarization_ok = std::abs(rep.smoothed_unitarized - rep.smoothed_optimum) <= params.unitarize_tol;

  rep.passed = rep.relaxation_ok && rep.unitarization_ok;
  if (!rep.passed) {
    std::ostringstream os;
    os << "# exactness counterexample, candidate j = " << j << '\n';
    write_basis_set(os, S);
    os << "relaxed " << format_double(rep.relaxed) << '\n'
       << "relaxed_bound " << format_double(rep.relaxed_bound) << '\n'
       << "unitary " << format_double(rep.unitary) << '\n'
       << "special_unitary " << format_double(rep.special_unitary) << '\n'
       << "resolution " << format_double(rep.resolution) << '\n'
       << "tolerance " << format_double(params.tol) << '\n'
       << "smoothed_optimum " << format_double(rep.smoothed_optimum) << '\n'
       << "smoothed_unitarized " << format_double(rep.smoothed_unitarized) << '\n';
    rep.dump = os.str();
  }
  return rep;
}

}  // namespace maxplus
