#pragma once

// Independent reference computations: brute force over U(n) for n <= 2,
// an RK4 integrator for the propagators, unitarisation of B(n) points and
// seeded instance generation.

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "maxplus/basis.hpp"
#include "maxplus/bundle.hpp"
#include "maxplus/metric.hpp"
#include "maxplus/pruning.hpp"
#include "maxplus/semigroup.hpp"

namespace maxplus {

/// n = 1: U = e^{i t0}. n = 2:
/// U = e^{i phi} [[e^{i a} cos t, e^{i b} sin t], [-e^{-i b} sin t, e^{-i a} cos t]]
/// with parameters (phi, t, a, b); phi = 0 is the SU(2) sub-chart.
struct UnitaryChart {
  std::size_t n = 2;
  static std::size_t parameter_count(std::size_t n);
  CMat map(const std::vector<double>& params) const;
};

struct BruteForceResult {
  double value = 0.0;        // attained at a unitary point: a lower bound on the U(n) optimum
  CMat maximizer;
  double su_value = 0.0;     // same over SU(n)
  CMat su_maximizer;
  double resolution = 0.0;   // K * grid cell diameter: value >= optimum - resolution
  long long evaluations = 0;
};

BruteForceResult brute_force_unitary(const MetricInstance& inst, int grid_per_axis,
                                     int refine_iters);

/// left * right of the SVD.
CMat unitarize(const CMat& X);

/// Classical RK4 for dU/ds = i H U over [0, t].
CMat integrate_schrodinger(const CMat& H, double t, const CMat& U0, int steps);

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the
/// phases of diag(R) moved into Q.
CMat haar_unitary(std::size_t n, std::mt19937_64& rng);

/// m bases with Haar P_i and c_i ~ U[0, 1]; bitwise reproducible per seed.
BasisSet random_instance(std::size_t n, std::size_t m, unsigned long long seed);

/// Unpruned propagation of `problem` for `step` steps, starting from its
/// terminal basis. With seed != 0 the target is replaced by a Haar-random
/// unitary drawn from that seed.
BasisSet harvest_propagation(GateSynthesisProblem problem, std::size_t step,
                             unsigned long long seed);

struct ExactnessParams {
  double tol = 1e-3;
  double smoothing_beta = 1e6;
  double unitarize_tol = 1e-6;
  BundleParams bundle;
  OracleParams oracle;
};

struct ExactnessReport {
  double relaxed = 0.0;          // bundle value over B(n)
  double relaxed_bound = 0.0;    // its dual bound
  double unitary = 0.0;          // brute force over U(n)
  double special_unitary = 0.0;  // brute force over SU(n)
  double resolution = 0.0;
  double smoothed_optimum = 0.0;
  double smoothed_unitarized = 0.0;
  bool relaxation_ok = false;
  bool unitarization_ok = false;
  bool passed = false;
  std::string dump;              // counterexample text when !passed
};

ExactnessReport exactness_check(const BasisSet& S, std::size_t j, const ExactnessParams& params = {});

}  // namespace maxplus
