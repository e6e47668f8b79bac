#pragma once

// Interior-point method for
//
//   maximize lambda  s.t.  a_i . y + b_i >= lambda,  Y in B(n),
//                          |y - center|_F <= mu   (dropped when mu = inf)
//
// in the real coordinates of to_real(). B(n) enters through the
// self-concordant barrier -log det(I - Y Y^*), which is the log-det of the
// Schur complement of [[I, Y], [Y^*, I]].

#include <limits>

#include "maxplus/cxmat.hpp"

namespace maxplus::detail {

struct BarrierSettings {
  double gap = defaults::kBarrierGap;       // stop at this certified duality gap
  int max_newton = defaults::kMaxNewton;
};

struct BarrierResult {
  RVec y;
  double lambda = 0.0;
  RVec alpha;           // cut multipliers, normalised onto the simplex
  int newton_steps = 0;
  double gap_bound = 0.0;  // certified duality gap at exit
  bool capped = false;
};

BarrierResult barrier_maximin(const Eigen::MatrixXd& A, const RVec& b, Eigen::Index n,
                              const RVec& center, double mu, const BarrierSettings& settings);

/// Value, gradient and Hessian of -log det(I - Y Y^*) in real coordinates.
/// Returns false when Y is not strictly inside B(n).
bool logdet_barrier(const CMat& Y, double& value, RVec* grad, Eigen::MatrixXd* hess);

}  // namespace maxplus::detail
