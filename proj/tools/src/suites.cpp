#include "maxplus_cli/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include <maxplus/oracle.hpp>

#include "maxplus_cli/bench.hpp"

namespace maxplus::cli {

namespace {

using Clock = std::chrono::steady_clock;

double threshold(const SuiteOptions& opt, double normal) { return opt.tol ? *opt.tol : normal; }

CMat gaussian_matrix(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  CMat G(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < n; ++k) G(i, k) = Complex(nd(rng), nd(rng));
  return G;
}

CMat random_hermitian(Eigen::Index n, std::mt19937_64& rng) {
  const CMat G = gaussian_matrix(n, rng);
  return 0.5 * (G + G.adjoint());
}

// Uniform radius in [0, 1] along a Gaussian direction, in spectral norm.
CMat random_contraction(Eigen::Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  const CMat G = gaussian_matrix(n, rng);
  return G * (ud(rng) / spectral_norm(G));
}

RVec random_simplex(Eigen::Index m, std::mt19937_64& rng) {
  std::exponential_distribution<double> ed(1.0);
  RVec a(m);
  for (Eigen::Index i = 0; i < m; ++i) a(i) = ed(rng);
  return a / a.sum();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

SuiteResult timed(const std::string& name, const std::function<void(SuiteResult&)>& body) {
  SuiteResult r;
  r.name = name;
  const auto start = Clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

}  // namespace

SuiteResult suite_exactness(const SuiteOptions& opt) {
  return timed("exactness", [&](SuiteResult& r) {
    const int count = opt.quick ? 10 : 50;
    ExactnessParams params;
    if (opt.tol) {
      params.tol = *opt.tol;
      params.unitarize_tol = *opt.tol;
    }
    int ok = 0;
    double worst = 0.0;
    for (int i = 0; i < count; ++i) {
      const std::size_t n = 1 + static_cast<std::size_t>(i % 2);
      const std::size_t m = 2 + static_cast<std::size_t>((i / 2) % 7);
      const BasisSet S = random_instance(n, m, opt.seed * 7919ULL + static_cast<unsigned long long>(i));
      const ExactnessReport rep = exactness_check(S, 0, params);
      worst = std::max(worst, std::abs(rep.relaxed - rep.unitary));
      if (rep.passed) {
        ++ok;
      } else {
        r.dumps.push_back(rep.dump);
      }
    }
    r.passed = ok == count;
    r.detail = std::to_string(ok) + "/" + std::to_string(count) + " instances, max |relaxed - U(n)| = " + fmt(worst);
  });
}

SuiteResult suite_solver_agreement(const SuiteOptions& opt) {
  return timed("solver_agreement", [&](SuiteResult& r) {
    const int count = opt.quick ? 6 : 30;
    const std::size_t sizes[] = {100, 400, 1600};
    const double tol = threshold(opt, 1e-5);
    DualParams dp;
    dp.method = DualMethod::kInteriorPoint;
    int converged = 0, agree = 0;
    double worst = 0.0;
    for (int i = 0; i < count; ++i) {
      const std::size_t m = sizes[i % 3];
      const MetricInstance inst = bench_instance(4, m, i, opt.seed);
      const BundleReport br = bundle_solve(inst);
      const DualResult dr = solve_dual(inst, dp);
      if (br.result.status != MetricStatus::kConverged || !dr.converged) continue;
      ++converged;
      const double gap = dr.bound - br.result.value;
      worst = std::max(worst, gap);
      if (gap <= tol && gap >= -1e-9) {
        ++agree;
      } else {
        std::ostringstream os;
        os << "# solver disagreement: n = 4, m = " << m << ", rep = " << i << ", seed = " << opt.seed << '\n'
           << "bundle_value " << format_double(br.result.value) << '\n'
           << "dual_bound " << format_double(dr.bound) << '\n';
        r.dumps.push_back(os.str());
      }
    }
    const int need = count - count / 15;
    r.passed = converged >= need && agree == converged;
    r.detail = std::to_string(converged) + "/" + std::to_string(count) + " converged, " + std::to_string(agree) +
               " within tolerance, max dual - primal = " + fmt(worst);
  });
}

SuiteResult suite_propagator(const SuiteOptions& opt) {
  return timed("propagator_rk4", [&](SuiteResult& r) {
    const int count = opt.quick ? 8 : 20;
    const double tol = threshold(opt, 1e-8);
    std::mt19937_64 rng(opt.seed * 104729ULL + 5);
    int ok = 0;
    double worst = 0.0;
    for (int i = 0; i < count; ++i) {
      const Eigen::Index n = i % 2 ? 4 : 2;
      const double tau = (i / 2) % 2 ? 0.2 : 0.05;
      const CMat H = random_hermitian(n, rng);
      const CMat I = CMat::Identity(n, n);
      const double err = (unitary_propagator(H, tau) - integrate_schrodinger(H, tau, I, 10000)).norm();
      worst = std::max(worst, err);
      if (err <= tol) {
        ++ok;
      } else {
        std::ostringstream os;
        os << "# propagator mismatch, tau = " << format_double(tau) << ", error = " << format_double(err)
           << "\n# H\n";
        write_matrix(os, H);
        r.dumps.push_back(os.str());
      }
    }
    r.passed = ok == count;
    r.detail = std::to_string(ok) + "/" + std::to_string(count) + " generators, max error = " + fmt(worst);
  });
}

SuiteResult suite_pruning_soundness(const SuiteOptions& opt) {
  return timed("pruning_soundness", [&](SuiteResult& r) {
    const int sets = opt.quick ? 5 : 20;
    const int points = opt.quick ? 2000 : 10000;
    const double tol = threshold(opt, 1e-9);
    PruningConfig cfg;
    cfg.mode = PruneMode::kDropNegative;
    cfg.safety_margin = 1e-9;
    std::mt19937_64 rng(opt.seed * 15485863ULL + 11);
    int ok = 0;
    std::size_t removed = 0, total = 0;
    double worst = 0.0;
    for (int i = 0; i < sets; ++i) {
      const std::size_t step = 2 + static_cast<std::size_t>(i % 2);
      const BasisSet S = harvest_propagation(default_su2_problem(), step, opt.seed * 31ULL + static_cast<unsigned long long>(i) + 1);
      const auto metrics = compute_metrics(S, cfg);
      const auto [kept, report] = prune(S, metrics, cfg);
      removed += report.removed.size();
      total += S.size();
      double err = 0.0;
      for (int t = 0; t < points; ++t) {
        const CMat U = haar_unitary(2, rng);
        err = std::max(err, std::abs(eval_min(kept, U).value - eval_min(S, U).value));
      }
      worst = std::max(worst, err);
      if (err <= tol) {
        ++ok;
      } else {
        std::ostringstream os;
        os << "# pruning changed the minimum by " << format_double(err) << ", step " << step << '\n';
        write_basis_set(os, S);
        r.dumps.push_back(os.str());
      }
    }
    r.passed = ok == sets && removed > 0;
    r.detail = std::to_string(ok) + "/" + std::to_string(sets) + " sets, removed " + std::to_string(removed) + " of " +
               std::to_string(total) + ", max change = " + fmt(worst);
  });
}

SuiteResult suite_maxplus_linearity(const SuiteOptions& opt) {
  return timed("maxplus_linearity", [&](SuiteResult& r) {
    const int points = opt.quick ? 200 : 1000;
    const double tol = threshold(opt, 1e-9);
    const GateSynthesisProblem p = default_su2_problem();
    const auto props = build_propagators(p);
    const BasisSet S = harvest_propagation(p, 2, 0);
    std::mt19937_64 rng(opt.seed * 32452843ULL + 3);
    double worst = 0.0;
    for (const auto& g : props) {
      const BasisSet T = propagate_step(S, {g});
      for (int t = 0; t < points; ++t) {
        const CMat U = haar_unitary(2, rng);
        const double lhs = eval_min(T, U).value;
        const double rhs = g.cost_increment + eval_min(S, g.G.adjoint() * U).value;
        worst = std::max(worst, std::abs(lhs - rhs));
      }
    }
    r.passed = worst <= tol;
    r.detail = std::to_string(props.size()) + " propagators x " + std::to_string(points) +
               " points, max deviation = " + fmt(worst);
  });
}

SuiteResult suite_weak_duality(const SuiteOptions& opt) {
  return timed("weak_duality", [&](SuiteResult& r) {
    const int trials = opt.quick ? 300 : 1000;
    const double tol = threshold(opt, 1e-12);
    std::mt19937_64 rng(opt.seed * 49979687ULL + 7);
    int ok = 0;
    for (int t = 0; t < trials; ++t) {
      const std::size_t n = 1 + static_cast<std::size_t>(t % 3);
      const std::size_t m = 2 + static_cast<std::size_t>(t % 6);
      const MetricInstance inst = make_instance(random_instance(n, m, opt.seed * 1000ULL + static_cast<unsigned long long>(t)), t % m);
      const RVec alpha = random_simplex(static_cast<Eigen::Index>(inst.size()), rng);
      const CMat X = random_contraction(static_cast<Eigen::Index>(n), rng);
      const double primal = full_objective(inst, X).value;
      const double dual = dual_value(inst, alpha);
      if (primal <= dual + tol) ++ok;
      else if (r.dumps.size() < 5) {
        std::ostringstream os;
        os << "# weak duality violated: primal " << format_double(primal) << " dual " << format_double(dual) << '\n';
        r.dumps.push_back(os.str());
      }
    }
    r.passed = ok == trials;
    r.detail = std::to_string(ok) + "/" + std::to_string(trials) + " trials";
  });
}

SuiteResult suite_bundle_model(const SuiteOptions& opt) {
  return timed("bundle_model", [&](SuiteResult& r) {
    const int trials = opt.quick ? 200 : 1000;
    const double tol = threshold(opt, 1e-9);
    std::mt19937_64 rng(opt.seed * 67867967ULL + 13);
    BundleParams bp;
    bp.record_trace = true;
    int ok = 0;
    for (int t = 0; t < trials; ++t) {
      const std::size_t n = 1 + static_cast<std::size_t>(t % 3);
      const std::size_t m = 2 + static_cast<std::size_t>(t % 11);
      const MetricInstance inst =
          make_instance(random_instance(n, m, opt.seed * 2000003ULL + static_cast<unsigned long long>(t)), 0);
      const BundleReport rep = bundle_solve(inst, bp);
      bool good = !rep.trace.empty();
      double last_v = -std::numeric_limits<double>::infinity();
      for (const auto& row : rep.trace) {
        good = good && row.w >= row.v - tol && row.v >= last_v - tol &&
               row.cuts <= static_cast<std::size_t>(row.k) + 1;
        last_v = row.v;
      }
      CutModel model(inst);
      for (std::size_t a : rep.active) model.add(a);
      for (int s = 0; s < 10 && good; ++s) {
        const RVec x = to_real(random_contraction(static_cast<Eigen::Index>(n), rng));
        good = model.value(x) >= full_objective(inst, x).value - tol;
      }
      if (good) ++ok;
      else if (r.dumps.size() < 5) {
        std::ostringstream os;
        os << "# bundle invariant violated on a random instance, n = " << n << ", m = " << m << ", trial " << t << '\n';
        r.dumps.push_back(os.str());
      }
    }
    r.passed = ok == trials;
    r.detail = std::to_string(ok) + "/" + std::to_string(trials) + " runs (over-approximation, w >= v, monotone v)";
  });
}

SuiteResult suite_smoothing(const SuiteOptions& opt) {
  return timed("smoothing_bounds", [&](SuiteResult& r) {
    const int trials = opt.quick ? 300 : 1000;
    const double tol = threshold(opt, 1e-12);
    std::mt19937_64 rng(opt.seed * 86028121ULL + 17);
    int ok = 0;
    for (int t = 0; t < trials; ++t) {
      const std::size_t n = 1 + static_cast<std::size_t>(t % 3);
      const MetricInstance inst = make_instance(
          random_instance(n, 3 + static_cast<std::size_t>(t % 20), opt.seed * 3000017ULL + static_cast<unsigned long long>(t)), 0);
      const auto dim = static_cast<Eigen::Index>(n);
      const RVec x = to_real(random_contraction(dim, rng));
      const RVec y = to_real(random_contraction(dim, rng));
      const double beta = std::pow(10.0, t % 9);
      const double hard = full_objective(inst, x).value;
      const double fx = smoothed_objective(inst, x, beta);
      const double fy = smoothed_objective(inst, y, beta);
      const bool sandwich = fx <= hard + tol && hard <= fx + std::log(static_cast<double>(inst.size())) / beta + tol;
      const bool lipschitz = std::abs(fx - fy) <= inst.lipschitz() * (x - y).norm() + tol;
      if (sandwich && lipschitz) ++ok;
      else if (r.dumps.size() < 5) {
        std::ostringstream os;
        os << "# smoothing bound violated: beta " << beta << ", hard " << format_double(hard) << ", smooth "
           << format_double(fx) << '\n';
        r.dumps.push_back(os.str());
      }
    }
    r.passed = ok == trials;
    r.detail = std::to_string(ok) + "/" + std::to_string(trials) + " trials (sandwich, Lipschitz)";
  });
}

std::vector<SuiteResult> run_battery(const SuiteOptions& opt) {
  return {suite_exactness(opt),         suite_solver_agreement(opt), suite_propagator(opt),
          suite_pruning_soundness(opt), suite_maxplus_linearity(opt), suite_weak_duality(opt),
          suite_bundle_model(opt),      suite_smoothing(opt)};
}

}  // namespace maxplus::cli
