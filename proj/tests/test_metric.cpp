#include <gtest/gtest.h>

#include <maxplus/oracle.hpp>
#include <maxplus/pruning.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "test_support.hpp"

using namespace maxplus;
using namespace testing_support;

namespace {

const double kSqrt2 = std::numbers::sqrt2;

BasisSet three_basis() { return load_basis_set(fixture("three_basis.bset")); }

// Closed form of the n = 1 dual over alpha = (a, 1 - a): |(-a - 1) + (1 - a) i|.
double three_basis_dual(double a) { return std::abs(Complex(-a - 1.0, 1.0 - a)); }

}  // namespace

TEST(MakeInstance, DuplicateBasisGivesZeroDiff) {
  std::mt19937_64 rng(1);
  const CMat P = gram_schmidt_unitary(2, rng);
  const MetricInstance inst = make_instance(BasisSet({{P, 0.3}, {P, 0.3}}), 0);
  ASSERT_EQ(inst.size(), 1u);
  EXPECT_EQ(inst.diff(0).norm(), 0.0);
  EXPECT_EQ(inst.b(0), 0.0);
  EXPECT_TRUE(inst.degenerate());
}

TEST(MakeInstance, SkipsCandidateInIndexOrder) {
  const MetricInstance inst = make_instance(random_instance(2, 5, 3), 2);
  ASSERT_EQ(inst.size(), 4u);
  EXPECT_EQ(inst.source, (std::vector<std::size_t>{0, 1, 3, 4}));
  EXPECT_EQ(inst.j, 2u);
}

TEST(MakeInstance, FormMatchesMinusCandidate) {
  std::mt19937_64 rng(2);
  const BasisSet S = random_instance(3, 9, 4);
  for (std::size_t j = 0; j < S.size(); ++j) {
    const MetricInstance inst = make_instance(S, j);
    for (int t = 0; t < 20; ++t) {
      const CMat X = random_contraction(3, rng);
      double expect = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < S.size(); ++i)
        if (i != j) expect = std::min(expect, eval(S[i], X) - eval(S[j], X));
      EXPECT_NEAR(full_objective(inst, X).value, expect, 1e-12);
    }
    for (std::size_t k = 0; k < inst.size(); ++k) EXPECT_LE(spectral_norm(inst.diff(k)), 2.0 + 1e-12);
  }
}

TEST(MakeInstance, SingletonRejected) {
  EXPECT_THROW(make_instance(BasisSet({{CMat::Identity(2, 2), 0.0}}), 0), std::invalid_argument);
}

TEST(DualValue, SingleDiffIsExact) {
  std::mt19937_64 rng(3);
  const CMat A = gram_schmidt_unitary(2, rng) - gram_schmidt_unitary(2, rng);
  const MetricInstance inst = make_instance_from_diffs({A}, {0.7});
  EXPECT_NEAR(dual_value(inst, RVec::Ones(1)), nuclear_norm(A) + 0.7, 1e-12);
}

TEST(DualValue, ThreeBasisEndpoints) {
  const MetricInstance inst = make_instance(three_basis(), 0);
  RVec a(2);
  a << 1.0, 0.0;
  EXPECT_NEAR(dual_value(inst, a), 2.0, 1e-15);
  a << 0.0, 1.0;
  EXPECT_NEAR(dual_value(inst, a), kSqrt2, 1e-15);
  a << 0.3, 0.7;
  EXPECT_NEAR(dual_value(inst, a), three_basis_dual(0.3), 1e-14);
}

TEST(DualValue, NonSimplexRejected) {
  const MetricInstance inst = make_instance(three_basis(), 0);
  RVec a(2);
  a << 0.6, 0.6;
  EXPECT_THROW(dual_value(inst, a), std::invalid_argument);
  a << 1.2, -0.2;
  EXPECT_THROW(dual_value(inst, a), std::invalid_argument);
  EXPECT_THROW(dual_value(inst, RVec::Ones(3) / 3.0), std::invalid_argument);
}

TEST(DualValue, WeakDualityOnSamples) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + t % 3;
    const MetricInstance inst = make_instance(random_instance(n, 2 + t % 6, 100 + t), 0);
    RVec a(static_cast<Eigen::Index>(inst.size()));
    for (Eigen::Index k = 0; k < a.size(); ++k) a(k) = -std::log(ud(rng) + 1e-300);
    a /= a.sum();
    const CMat X = random_contraction(static_cast<Eigen::Index>(n), rng);
    EXPECT_LE(full_objective(inst, X).value, dual_value(inst, a) + 1e-12);
  }
}

TEST(SolveDual, SingleDiffOneStep) {
  std::mt19937_64 rng(5);
  const CMat A = gram_schmidt_unitary(2, rng) - gram_schmidt_unitary(2, rng);
  const MetricInstance inst = make_instance_from_diffs({A}, {0.1});
  const DualResult r = solve_dual(inst);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.bound, nuclear_norm(A) + 0.1, 1e-12);
  EXPECT_LE(r.iterations, 1);
}

TEST(SolveDual, ThreeBasisClosedForm) {
  // The closed form is decreasing in a on [0, 1], so the minimum sits at a = 0.
  for (double a = 0.0; a < 1.0; a += 0.01) EXPECT_GE(three_basis_dual(a + 0.01), three_basis_dual(a) - 1e-15);
  const MetricInstance inst = make_instance(three_basis(), 0);
  for (DualMethod m : {DualMethod::kMirrorDescent, DualMethod::kInteriorPoint}) {
    DualParams p;
    p.method = m;
    p.tol = 1e-6;
    const DualResult r = solve_dual(inst, p);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.bound, kSqrt2, 1e-6);
    EXPECT_LE(r.alpha(0), 1e-3);
  }
}

TEST(SolveDual, AgreesWithBundle) {
  for (unsigned seed = 0; seed < 10; ++seed) {
    const MetricInstance inst = make_instance(random_instance(2, 7, 50 + seed), 0);
    const BundleReport br = bundle_solve(inst);
    for (DualMethod m : {DualMethod::kMirrorDescent, DualMethod::kInteriorPoint}) {
      DualParams p;
      p.method = m;
      const DualResult r = solve_dual(inst, p);
      // Mirror descent alone is slow near the optimum; only its bound is checked.
      if (m == DualMethod::kInteriorPoint) {
        EXPECT_TRUE(r.converged);
        EXPECT_LE(r.bound - br.result.value, 1e-5) << "seed " << seed;
      }
      EXPECT_GE(r.bound, br.result.value - 1e-9);
      EXPECT_LE(r.primal, br.result.dual_bound + 1e-9);
    }
  }
}

TEST(SolveDual, LargeInstanceCertified) {
  const MetricInstance inst = make_instance(random_instance(4, 801, 9), 0);
  DualParams p;
  p.method = DualMethod::kInteriorPoint;
  const DualResult r = solve_dual(inst, p);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.bound - r.primal, 1e-6);
  EXPECT_LE(unitarity_defect(r.primal_point), 1e-9);
  EXPECT_NEAR(full_objective(inst, r.primal_point).value, r.primal, 1e-12);
}

TEST(SolveDual, BadToleranceRejected) {
  DualParams p;
  p.tol = 0.0;
  EXPECT_THROW(solve_dual(make_instance(three_basis(), 0), p), std::invalid_argument);
}

TEST(ImportanceMetric, DominatedBasis) {
  std::mt19937_64 rng(6);
  const CMat P = gram_schmidt_unitary(2, rng);
  PruningConfig cfg;
  const MetricResult r = importance_metric(BasisSet({{P, 0.0}, {P, -1.0}}), 0, cfg);
  EXPECT_NEAR(r.value, -1.0, 1e-12);
  EXPECT_EQ(r.status, MetricStatus::kConverged);
}

TEST(ImportanceMetric, ThreeBasisAllSolvers) {
  const Complex expect_x = Complex(-1.0, 1.0) / kSqrt2;
  for (MetricSolver s : {MetricSolver::kBundle, MetricSolver::kDualOnly, MetricSolver::kOracle}) {
    PruningConfig cfg;
    cfg.solver = s;
    const MetricResult r = importance_metric(three_basis(), 0, cfg);
    EXPECT_NEAR(r.value, kSqrt2, 1e-6) << to_string(s);
    // The oracle reports its Lipschitz resolution as the gap.
    if (s != MetricSolver::kOracle) EXPECT_LE(r.gap, 1e-5);
    EXPECT_GT(r.dual_bound, kSqrt2 - 1e-9);
    EXPECT_EQ(r.status, MetricStatus::kConverged);
    EXPECT_NEAR(std::abs(r.optimizer(0, 0) - expect_x), 0.0, 1e-3) << to_string(s);
  }
}

TEST(ImportanceMetric, OnePairIsNuclearNorm) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 10; ++t) {
    const BasisSet S({{gram_schmidt_unitary(3, rng), 0.2}, {gram_schmidt_unitary(3, rng), 0.5}});
    PruningConfig cfg;
    const MetricResult r = importance_metric(S, 0, cfg);
    EXPECT_NEAR(r.value, nuclear_norm(S[1].P - S[0].P) + 0.3, 1e-6);
    EXPECT_LE(spectral_norm(r.optimizer), 1.0 + 1e-8);
  }
}

TEST(ImportanceMetric, ResultInvariants) {
  const BasisSet S = random_instance(3, 12, 8);
  PruningConfig cfg;
  for (std::size_t j = 0; j < S.size(); ++j) {
    const MetricResult r = importance_metric(S, j, cfg);
    EXPECT_LE(r.value, r.dual_bound + cfg.gap_tol);
    EXPECT_GE(schur_feasibility(r.optimizer), -1e-8);
    EXPECT_NEAR(r.gap, std::max(0.0, r.dual_bound - r.value), 1e-15);
    EXPECT_EQ(r.j, j);
  }
}

TEST(ImportanceMetric, RelaxationOrdering) {
  for (unsigned seed = 0; seed < 8; ++seed) {
    const std::size_t n = 1 + seed % 2;
    const MetricInstance inst = make_instance(random_instance(n, 5, 200 + seed), 0);
    const BundleReport br = bundle_solve(inst);
    const BruteForceResult bf = brute_force_unitary(inst, 16, 2000);
    EXPECT_LE(bf.value, br.result.dual_bound + 1e-9);
    EXPECT_LE(bf.su_value, bf.value + 1e-12);
    EXPECT_LE(std::abs(br.result.value - bf.value), bf.resolution);
  }
}

TEST(Prune, MixedExample) {
  std::vector<MetricResult> metrics(3);
  const double values[3] = {-1.0, 2.0, 0.5};
  for (std::size_t i = 0; i < 3; ++i) {
    metrics[i].j = i;
    metrics[i].value = metrics[i].dual_bound = values[i];
  }
  const CMat I2 = CMat::Identity(2, 2);
  const BasisSet S({{I2, 0.0}, {I2, 1.0}, {I2, 2.0}});
  PruningConfig cfg;
  cfg.mode = PruneMode::kBoth;
  cfg.budget = 2;
  const auto [kept, report] = prune(S, metrics, cfg);
  EXPECT_EQ(report.kept, (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(report.removed, (std::vector<std::size_t>{0}));
  EXPECT_EQ(report.removed_metrics, (std::vector<double>{-1.0}));
  ASSERT_EQ(kept.size(), 2u);
  EXPECT_EQ(kept[0].c, 1.0);
}

TEST(Prune, LargeBudgetIsIdentity) {
  const BasisSet S = random_instance(2, 6, 10);
  std::vector<MetricResult> metrics(6);
  for (std::size_t i = 0; i < 6; ++i) metrics[i].value = metrics[i].dual_bound = 0.1 * static_cast<double>(i);
  PruningConfig cfg;
  cfg.mode = PruneMode::kBoth;
  cfg.budget = 6;
  const auto [kept, report] = prune(S, metrics, cfg);
  EXPECT_EQ(kept.size(), 6u);
  EXPECT_TRUE(report.removed.empty());
}

TEST(Prune, TopKTiesKeepLowerIndex) {
  const BasisSet S = random_instance(2, 4, 11);
  std::vector<MetricResult> metrics(4);
  const double values[4] = {1.0, 3.0, 1.0, 1.0};
  for (std::size_t i = 0; i < 4; ++i) metrics[i].value = metrics[i].dual_bound = values[i];
  PruningConfig cfg;
  cfg.budget = 2;
  EXPECT_EQ(prune(S, metrics, cfg).second.kept, (std::vector<std::size_t>{0, 1}));
}

TEST(Prune, FailedMetricsAreRetained) {
  const BasisSet S = random_instance(2, 3, 12);
  std::vector<MetricResult> metrics(3);
  for (auto& m : metrics) m.value = m.dual_bound = -5.0;
  metrics[1].status = MetricStatus::kInfeasibleAccuracy;
  metrics[1].value = metrics[1].dual_bound = std::numeric_limits<double>::infinity();
  PruningConfig cfg;
  cfg.mode = PruneMode::kDropNegative;
  EXPECT_EQ(prune(S, metrics, cfg).second.kept, (std::vector<std::size_t>{1}));
}

TEST(Prune, DropNegativeSoundOnHarvestedSet) {
  const BasisSet S = harvest_propagation(default_su2_problem(), 3, 77);
  PruningConfig cfg;
  cfg.mode = PruneMode::kDropNegative;
  const auto metrics = compute_metrics(S, cfg);
  const auto [kept, report] = prune(S, metrics, cfg);
  EXPECT_FALSE(report.removed.empty());
  std::mt19937_64 rng(13);
  for (int t = 0; t < 10000; ++t) {
    const CMat U = gram_schmidt_unitary(2, rng);
    EXPECT_NEAR(eval_min(kept, U).value, eval_min(S, U).value, 1e-9);
  }
}

TEST(Prune, TopKNeverDecreasesMin) {
  const BasisSet S = random_instance(2, 10, 14);
  PruningConfig cfg;
  cfg.budget = 4;
  const auto kept = prune(S, compute_metrics(S, cfg), cfg).first;
  EXPECT_EQ(kept.size(), 4u);
  std::mt19937_64 rng(15);
  for (int t = 0; t < 2000; ++t) {
    const CMat U = gram_schmidt_unitary(2, rng);
    EXPECT_GE(eval_min(kept, U).value, eval_min(S, U).value);
  }
}

TEST(ComputeMetrics, SingletonAndThreadDeterminism) {
  PruningConfig cfg;
  const auto single = compute_metrics(BasisSet({{CMat::Identity(2, 2), 0.0}}), cfg);
  ASSERT_EQ(single.size(), 1u);
  EXPECT_TRUE(std::isinf(single[0].value));

  const BasisSet S = random_instance(2, 9, 16);
  cfg.threads = 1;
  const auto a = compute_metrics(S, cfg);
  cfg.threads = 3;
  const auto b = compute_metrics(S, cfg);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].j, i);
    EXPECT_EQ(a[i].value, b[i].value);
    EXPECT_EQ(a[i].dual_bound, b[i].dual_bound);
  }
}

TEST(MetricsCsv, Header) {
  std::vector<MetricResult> metrics(1);
  std::stringstream ss;
  write_metrics_csv(ss, metrics);
  std::string header, row;
  std::getline(ss, header);
  std::getline(ss, row);
  EXPECT_EQ(header, "j,value,dual_bound,gap,iterations,wall_time_s,status");
  EXPECT_EQ(row.substr(0, 2), "0,");
  EXPECT_NE(row.find("converged"), std::string::npos);
}

TEST(ParseNames, RoundTrip) {
  for (auto m : {PruneMode::kTopK, PruneMode::kDropNegative, PruneMode::kBoth}) EXPECT_EQ(parse_prune_mode(to_string(m)), m);
  for (auto s : {MetricSolver::kBundle, MetricSolver::kDualOnly, MetricSolver::kOracle})
    EXPECT_EQ(parse_metric_solver(to_string(s)), s);
  EXPECT_THROW(parse_prune_mode("drop"), std::invalid_argument);
  EXPECT_THROW(parse_metric_solver("cvx"), std::invalid_argument);
}

TEST(SchurFeasibility, Examples) {
  EXPECT_NEAR(schur_feasibility(CMat::Zero(2, 2)), 1.0, 1e-14);
  std::mt19937_64 rng(17);
  EXPECT_NEAR(schur_feasibility(gram_schmidt_unitary(3, rng)), 0.0, 1e-12);
}

TEST(SchurFeasibility, SignAgreesWithSpectralNorm) {
  std::mt19937_64 rng(18);
  std::uniform_real_distribution<double> ud(0.5, 1.5);
  for (int t = 0; t < 500; ++t) {
    CMat X = gaussian(3, 3, rng);
    X *= ud(rng) / spectral_norm(X);
    const double margin = 1.0 - spectral_norm(X);
    const double s = schur_feasibility(X);
    EXPECT_NEAR(s, margin, 1e-10);
  }
}
