#pragma once

// Gate-synthesis control problem on U(n) and the propagate-then-prune loop.
//
// With a constant control m over one step, the state evolves by
// U -> exp(-i tau H_m) U at running cost tau sqrt(R_mm). An affine basis
// <P, .> + c therefore propagates to <G_m P, .> + c + tau sqrt(R_mm) with
// G_m = exp(i tau H_m), since <P, G_m^* U> = <G_m P, U>.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "maxplus/basis.hpp"
#include "maxplus/pruning.hpp"

namespace maxplus {

struct GateSynthesisProblem {
  std::size_t n = 2;
  std::vector<CMat> generators;  // Hermitian H_1..H_M
  std::vector<double> r_diag;    // positive weights R_mm
  double tau = 0.2;
  CMat target;                   // unitary
  std::size_t horizon_steps = 4;

  /// Throws std::invalid_argument on any violated invariant.
  void validate() const;
};

struct Propagator {
  CMat G;
  double cost_increment = 0.0;
  std::size_t m = 0;
};

std::vector<CMat> pauli_generators();        // sigma_x, sigma_y, sigma_z
std::vector<CMat> gell_mann_generators();    // 8 matrices, SU(3)
std::vector<CMat> two_qubit_generators();    // X1 Y1 Z1 X2 Y2 Z2 and Z1Z2, SU(4)
CMat preset_target(const std::string& name, std::size_t n);

/// SU(2), Pauli generators, R = I, tau = 0.2, target i*Hadamard, N = 4.
GateSynthesisProblem default_su2_problem();
/// SU(4) with two_qubit_generators, target e^{i pi/4} CNOT, reduced horizon.
GateSynthesisProblem default_su4_problem();

/// phi(U) = 1/2 |U - target|_F^2 = <-target, U> + n on U(n).
BasisSet terminal_basis(const GateSynthesisProblem& problem);
std::vector<Propagator> build_propagators(const GateSynthesisProblem& problem);

/// Output index = m * |S| + i (propagator-major).
BasisSet propagate_step(const BasisSet& S, const std::vector<Propagator>& props);

struct StepRecord {
  std::size_t step = 0;
  std::size_t count_before = 0;
  std::size_t count_after = 0;
  double min_metric = 0.0;
  double max_metric = 0.0;
  double prune_time_s = 0.0;
  double step_time_s = 0.0;
  std::size_t metric_failures = 0;
  bool pruned = false;
};

struct PropagationReport {
  std::vector<StepRecord> steps;
  std::vector<BasisSet> sets;  // per step when keep_all, else only the final set
  BasisSet final_set;
};

PropagationReport propagate_with_pruning(const GateSynthesisProblem& problem,
                                         const PruningConfig& pruner, bool keep_all = false);

void write_steps_csv(std::ostream& os, const std::vector<StepRecord>& steps);
void write_report_json(std::ostream& os, const GateSynthesisProblem& problem,
                       const PruningConfig& pruner, const PropagationReport& report);

/// Key-value configuration ("key = value" per line, '#' comments).
using ConfigMap = std::map<std::string, std::string>;
ConfigMap read_config(std::istream& is);
ConfigMap load_config(const std::string& path);

/// Problem from keys n, generators, r_diag, tau, steps, target; missing keys
/// fall back to the default SU(2) instance.
GateSynthesisProblem problem_from_config(const ConfigMap& cfg);
/// Pruning from keys budget, mode, solver and bundle/dual parameters.
PruningConfig pruning_from_config(const ConfigMap& cfg);

}  // namespace maxplus
