#include <gtest/gtest.h>

#include <maxplus/oracle.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "test_support.hpp"

using namespace maxplus;
using namespace testing_support;

namespace {

const double kPi = std::numbers::pi;

}  // namespace

TEST(UnitaryChart, ImagesAreUnitary) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ud(-10.0, 10.0);
  UnitaryChart c2{2}, c1{1};
  for (int t = 0; t < 200; ++t) {
    EXPECT_LE(unitarity_defect(c2.map({ud(rng), ud(rng), ud(rng), ud(rng)})), 1e-12);
    EXPECT_LE(unitarity_defect(c1.map({ud(rng)})), 1e-12);
  }
  EXPECT_NEAR(std::abs(c2.map({0.0, 0.3, 1.1, -0.4}).determinant() - Complex(1.0, 0.0)), 0.0, 1e-12);
  EXPECT_THROW(UnitaryChart::parameter_count(3), std::invalid_argument);
}

TEST(UnitaryChart, ReachesRandomUnitaries) {
  // Fit chart parameters to Haar samples: every sample is in the image.
  std::mt19937_64 rng(2);
  for (int t = 0; t < 5; ++t) {
    const CMat U = haar_unitary(2, rng);
    const MetricInstance inst = make_instance(BasisSet({{-U, 0.0}, {CMat::Identity(2, 2), 0.0}}), 1);
    // max over U(2) of <-U - I, X> ... the maximiser of <U, X> is U itself.
    const MetricInstance fit = make_instance_from_diffs({U}, {0.0});
    const BruteForceResult bf = brute_force_unitary(fit, 12, 4000);
    EXPECT_NEAR(bf.value, 2.0, 1e-9);
    EXPECT_LE((bf.maximizer - U).norm(), 1e-4);
    (void)inst;
  }
}

TEST(BruteForce, SinglePairOnCircle) {
  const CMat P0 = CMat::Constant(1, 1, std::polar(1.0, 0.3));
  const CMat P1 = CMat::Constant(1, 1, std::polar(1.0, 2.0));
  const MetricInstance inst = make_instance(BasisSet({{P0, 0.1}, {P1, 0.6}}), 0);
  const BruteForceResult bf = brute_force_unitary(inst, 16, 1000);
  EXPECT_NEAR(bf.value, std::abs(P1(0, 0) - P0(0, 0)) + 0.5, 1e-9);
}

TEST(BruteForce, DuplicateBasisGivesZero) {
  std::mt19937_64 rng(3);
  const CMat P = haar_unitary(2, rng);
  const BruteForceResult bf = brute_force_unitary(make_instance(BasisSet({{P, 0.0}, {P, 0.0}}), 0), 8, 100);
  EXPECT_NEAR(bf.value, 0.0, 1e-15);
}

TEST(BruteForce, ThreeBasisDenseCircle) {
  const MetricInstance inst = make_instance(load_basis_set(fixture("three_basis.bset")), 0);
  // Dense 1-D scan with step 1e-5 as an oracle independent of the chart search.
  double best = -1e300, arg = 0.0;
  for (double th = 0.0; th < 2.0 * kPi; th += 1e-5) {
    const double v = full_objective(inst, CMat(CMat::Constant(1, 1, std::polar(1.0, th)))).value;
    if (v > best) {
      best = v;
      arg = th;
    }
  }
  EXPECT_NEAR(best, std::numbers::sqrt2, 1e-9);
  EXPECT_NEAR(arg, 0.75 * kPi, 1e-5);
  const BruteForceResult bf = brute_force_unitary(inst, 24, 2000);
  EXPECT_NEAR(bf.value, std::numbers::sqrt2, 1e-9);
  EXPECT_NEAR(std::abs(bf.maximizer(0, 0) - Complex(-1.0, 1.0) / std::numbers::sqrt2), 0.0, 1e-6);
  EXPECT_THROW(brute_force_unitary(make_instance(random_instance(3, 3, 1), 0), 8, 10), std::invalid_argument);
}

TEST(BruteForce, SpecialUnitaryBelowUnitary) {
  for (unsigned seed = 0; seed < 10; ++seed) {
    const BruteForceResult bf = brute_force_unitary(make_instance(random_instance(2, 4, 10 + seed), 0), 12, 1000);
    EXPECT_LE(bf.su_value, bf.value + 1e-12);
    EXPECT_NEAR(std::abs(bf.su_maximizer.determinant() - Complex(1.0, 0.0)), 0.0, 1e-12);
    EXPECT_GT(bf.resolution, 0.0);
  }
}

TEST(Unitarize, Examples) {
  CMat D = CMat::Zero(2, 2);
  D(0, 0) = 0.5;
  D(1, 1) = 1.0;
  EXPECT_LE((unitarize(D) - CMat::Identity(2, 2)).norm(), 1e-14);
  std::mt19937_64 rng(4);
  const CMat U = haar_unitary(3, rng);
  EXPECT_LE((unitarize(U) - U).norm(), 1e-12);
  for (int t = 0; t < 50; ++t) {
    const CMat X = random_contraction(3, rng);
    const CMat W = unitarize(X);
    EXPECT_LE(unitarity_defect(W), 1e-10);
    EXPECT_LE((unitarize(W) - W).norm(), 1e-12);
  }
}

TEST(Schrodinger, ZeroAndPauliZ) {
  std::mt19937_64 rng(5);
  const CMat U0 = haar_unitary(2, rng);
  EXPECT_LE((integrate_schrodinger(CMat::Zero(2, 2), 1.0, U0, 10) - U0).norm(), 1e-15);
  const double t = 0.9;
  CMat Z = CMat::Zero(2, 2);
  Z(0, 0) = 1.0;
  Z(1, 1) = -1.0;
  CMat E = CMat::Zero(2, 2);
  E(0, 0) = std::polar(1.0, t);
  E(1, 1) = std::polar(1.0, -t);
  EXPECT_LE((integrate_schrodinger(Z, t, U0, 1000) - E * U0).norm(), 1e-8);
}

TEST(Schrodinger, CrossValidatesPropagator) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 10; ++t) {
    const CMat H = hermitian(4, rng);
    const CMat U0 = haar_unitary(4, rng);
    EXPECT_LE((integrate_schrodinger(H, 0.2, U0, 10000) - unitary_propagator(H, 0.2) * U0).norm(), 1e-8);
  }
}

TEST(Schrodinger, FourthOrderConvergence) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 5; ++t) {
    const CMat H = hermitian(3, rng);
    const CMat exact = unitary_propagator(H, 1.0);
    const CMat I3 = CMat::Identity(3, 3);
    const double e1 = (integrate_schrodinger(H, 1.0, I3, 20) - exact).norm();
    const double e2 = (integrate_schrodinger(H, 1.0, I3, 40) - exact).norm();
    EXPECT_GE(e1 / e2, 8.0);
    EXPECT_LE(e1 / e2, 32.0);
  }
}

TEST(RandomInstance, DeterministicAndUnitary) {
  const BasisSet a = random_instance(3, 6, 42), b = random_instance(3, 6, 42);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].P, b[i].P);
    EXPECT_EQ(a[i].c, b[i].c);
    EXPECT_LE(unitarity_defect(a[i].P), 1e-10);
    EXPECT_GE(a[i].c, 0.0);
    EXPECT_LE(a[i].c, 1.0);
  }
  EXPECT_NE(random_instance(3, 6, 43)[0].P, a[0].P);
  EXPECT_THROW(random_instance(2, 1, 0), std::invalid_argument);
}

TEST(RandomInstance, HaarTraceMoment) {
  std::mt19937_64 rng(8);
  double sum = 0.0;
  const int samples = 10000;
  for (int t = 0; t < samples; ++t) sum += std::norm(haar_unitary(2, rng).trace());
  EXPECT_NEAR(sum / samples, 1.0, 0.05);
}

TEST(HarvestPropagation, SizesAndTarget) {
  const BasisSet S = harvest_propagation(default_su2_problem(), 2, 0);
  EXPECT_EQ(S.size(), 16u);
  const BasisSet T = harvest_propagation(default_su2_problem(), 2, 5);
  EXPECT_EQ(T.size(), 16u);
  EXPECT_NE(S[0].P, T[0].P);
}

TEST(ExactnessCheck, SinglePair) {
  for (std::size_t n : {1u, 2u}) {
    const BasisSet S = random_instance(n, 2, 60 + n);
    const ExactnessReport r = exactness_check(S, 0);
    EXPECT_TRUE(r.passed) << r.dump;
    EXPECT_NEAR(r.relaxed, nuclear_norm(S[1].P - S[0].P) + S[1].c - S[0].c, 1e-6);
  }
}

TEST(ExactnessCheck, ThreeBasisInstance) {
  const ExactnessReport r = exactness_check(load_basis_set(fixture("three_basis.bset")), 0);
  EXPECT_TRUE(r.passed) << r.dump;
  EXPECT_NEAR(r.relaxed, std::numbers::sqrt2, 1e-6);
  EXPECT_NEAR(r.unitary, std::numbers::sqrt2, 1e-9);
}

TEST(ExactnessCheck, RandomInstancesAndDump) {
  for (unsigned seed = 0; seed < 6; ++seed) {
    const ExactnessReport r = exactness_check(random_instance(2, 3 + seed, 500 + seed), 0);
    EXPECT_TRUE(r.passed) << r.dump;
    EXPECT_LE(std::abs(r.relaxed - r.unitary), 1e-3);
    EXPECT_TRUE(r.dump.empty());
  }
  ExactnessParams strict;
  strict.unitarize_tol = -1.0;
  const ExactnessReport bad = exactness_check(random_instance(2, 4, 9), 0, strict);
  EXPECT_FALSE(bad.passed);
  std::istringstream dump(bad.dump);
  std::string first;
  std::getline(dump, first);
  EXPECT_EQ(first.rfind("# exactness counterexample", 0), 0u);
  EXPECT_EQ(read_basis_set(dump).size(), 4u);
}
