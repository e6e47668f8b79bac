#include "maxplus/detail/barrier.hpp"

#include <algorithm>
#include <cmath>

namespace maxplus::detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Coordinates of Y: index 2*(p*n + q) is Re Y_pq, +1 is Im Y_pq.
void put_complex(RVec& col, const CMat& M) {
  const Eigen::Index n = M.rows();
  for (Eigen::Index p = 0; p < n; ++p) {
    for (Eigen::Index q = 0; q < n; ++q) {
      col(2 * (p * n + q)) = M(p, q).real();
      col(2 * (p * n + q) + 1) = M(p, q).imag();
    }
  }
}

}  // namespace

bool logdet_barrier(const CMat& Y, double& value, RVec* grad, Eigen::MatrixXd* hess) {
  const Eigen::Index n = Y.rows();
  const CMat S = CMat::Identity(n, n) - Y * Y.adjoint();
  Eigen::LLT<CMat> llt(S);
  if (llt.info() != Eigen::Success) return false;
  double logdet = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double d = llt.matrixL()(k, k).real();
    if (!(d > 0.0)) return false;
    logdet += 2.0 * std::log(d);
  }
  value = -logdet;
  if (!grad && !hess) return true;

  const CMat Sinv = llt.solve(CMat::Identity(n, n));
  const CMat Z = Sinv * Y;
  if (grad) {
    grad->resize(2 * n * n);
    put_complex(*grad, 2.0 * Z);
  }
  if (hess) {
    // d(2 S^-1 Y)[E] = 2 S^-1 E (I + Y^* S^-1 Y) + 2 Z E^* Z
    const CMat IQ = CMat::Identity(n, n) + Y.adjoint() * Z;
    const Eigen::Index D = 2 * n * n;
    hess->resize(D, D);
    RVec col(D);
    const Complex I(0.0, 1.0);
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = 0; q < n; ++q) {
        const CMat first = Sinv.col(p) * IQ.row(q);
        const CMat second = Z.col(q) * Z.row(p);
        put_complex(col, 2.0 * (first + second));
        hess->col(2 * (p * n + q)) = col;
        put_complex(col, 2.0 * I * (first - second));
        hess->col(2 * (p * n + q) + 1) = col;
      }
    }
    *hess = 0.5 * (*hess + hess->transpose()).eval();
  }
  return true;
}

// Path following on the perturbed optimality conditions
//
//   1^T z = 1,   A^T z = grad(Phi)(y) / t,   z_i s_i = 1 / t,
//
// with s = A y + b - lambda 1 the cut slacks, z their multipliers and Phi
// the barrier of B(n) (plus the trust region). Cuts are handled primal-dual;
// the two convex-set barriers are primal with weight 1 / t.
BarrierResult barrier_maximin(const Eigen::MatrixXd& A, const RVec& b, Eigen::Index n,
                              const RVec& center, double mu, const BarrierSettings& settings) {
  const Eigen::Index m = A.rows();
  const Eigen::Index D = 2 * n * n;
  if (m == 0) throw std::invalid_argument("barrier_maximin: no cuts");
  const bool ball = std::isfinite(mu);
  const double mu2 = ball ? mu * mu : 0.0;

  auto set_barrier = [&](const RVec& yy, double& value, RVec* grad, Eigen::MatrixXd* hess) {
    if (!logdet_barrier(from_real(yy, n, n), value, grad, hess)) return false;
    if (ball) {
      const RVec dy = yy - center;
      const double r = mu2 - dy.squaredNorm();
      if (!(r > 0.0)) return false;
      value -= std::log(r);
      if (grad) *grad += (2.0 / r) * dy;
      if (hess) {
        hess->diagonal().array() += 2.0 / r;
        *hess += (4.0 / (r * r)) * dy * dy.transpose();
      }
    }
    return true;
  };

  // Strictly feasible start: shrink the center towards the origin.
  RVec y = RVec::Zero(D);
  if (ball) {
    const double cn = center.norm();
    const double shrink = cn > 0.0 ? std::min(0.5, 0.5 * mu / cn) : 0.5;
    y = (1.0 - shrink) * center;
    if (spectral_norm(from_real(y, n, n)) >= 1.0) y *= 0.5;
  }
  double lambda = (A * y + b).minCoeff() - 1.0;
  RVec s = A * y + b - RVec::Constant(m, lambda);
  RVec z = RVec::Constant(m, 1.0 / static_cast<double>(m));
  double inv_t = z.dot(s) / static_cast<double>(m);

  BarrierResult out;
  RVec pgrad;
  Eigen::MatrixXd phess;
  Eigen::MatrixXd H(D + 1, D + 1);
  RVec rhs(D + 1);
  const double sigma = 0.1;
  int it = 0;
  // Exact duality gap of the normalised multipliers; the set barriers only
  // contribute through the support function of B(n) and of the ball.
  auto certified_gap = [&]() {
    const double total = z.sum();
    const RVec g = A.transpose() * z / total;
    double support = nuclear_norm(from_real(g, n, n));
    if (ball) support = std::min(support, g.dot(center) + mu * g.norm());
    return support + z.dot(b) / total - lambda;
  };

  for (; it < settings.max_newton; ++it) {
    out.gap_bound = certified_gap();
    if (out.gap_bound <= settings.gap) break;

    double pval = 0.0;
    set_barrier(y, pval, &pgrad, &phess);
    const RVec ratio = z.cwiseQuotient(s);
    const RVec Ar = A.transpose() * ratio;
    const RVec inv_s = s.cwiseInverse();

    // Shrink the barrier weight only near the current central point.
    const RVec ry = A.transpose() * z - inv_t * pgrad;
    const double rl = z.sum() - 1.0;
    const double comp = (z.cwiseProduct(s).array() * (1.0 / inv_t) - 1.0).matrix().norm();
    const double cent = std::sqrt(ry.dot(phess.ldlt().solve(ry))) / inv_t;
    if (cent < 0.5 && comp < 0.5 && std::abs(rl) < 1e-8) inv_t *= sigma;

    H.topLeftCorner(D, D) = A.transpose() * ratio.asDiagonal() * A + inv_t * phess;
    H.topRightCorner(D, 1) = -Ar;
    H.bottomLeftCorner(1, D) = -Ar.transpose();
    H(D, D) = ratio.sum();
    rhs.head(D) = inv_t * (A.transpose() * inv_s) - inv_t * pgrad;
    rhs(D) = 1.0 - inv_t * inv_s.sum();
    Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
    const RVec step = ldlt.solve(rhs);
    const RVec dy = step.head(D);
    const double dl = step(D);
    const RVec ds = A * dy - RVec::Constant(m, dl);
    const RVec dz = inv_t * inv_s - z - ratio.cwiseProduct(ds);

    double alpha = 1.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (ds(i) < 0.0) alpha = std::min(alpha, -0.99 * s(i) / ds(i));
      if (dz(i) < 0.0) alpha = std::min(alpha, -0.99 * z(i) / dz(i));
    }
    bool feasible = false;
    for (int ls = 0; ls < 60; ++ls) {
      double v = 0.0;
      if (set_barrier(y + alpha * dy, v, nullptr, nullptr)) {
        feasible = true;
        break;
      }
      alpha *= 0.7;
    }
    if (!feasible) break;
    y += alpha * dy;
    lambda += alpha * dl;
    s = A * y + b - RVec::Constant(m, lambda);
    z += alpha * dz;
    if (s.minCoeff() <= 0.0) {
      lambda = (A * y + b).minCoeff() - 1e-300;
      s = A * y + b - RVec::Constant(m, lambda);
    }
  }
  if (it == settings.max_newton) out.gap_bound = certified_gap();

  out.y = y;
  out.lambda = lambda;
  out.newton_steps = it;
  out.capped = out.gap_bound > settings.gap;
  out.alpha = z.cwiseMax(0.0);
  const double total = out.alpha.sum();
  out.alpha = total > 0.0 ? RVec(out.alpha / total) : RVec::Constant(m, 1.0 / static_cast<double>(m));
  return out;
}

}  // namespace maxplus::detail
