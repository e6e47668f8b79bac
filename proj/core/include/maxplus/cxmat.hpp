#pragma once

// Dense complex matrix kernel. M_n(C) is treated as a real Hilbert space with
// <X, Y> = Re tr(X^* Y); B(n) is the closed spectral-norm unit ball.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "maxplus/constants.hpp"

namespace maxplus {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

/// Raised when an iterative numerical routine fails to converge.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

struct SvdFactors {
  CMat left;              // n x n unitary
  RVec singular_values;   // nonincreasing
  CMat right;             // n x n unitary; X = left * diag(s) * right
};

struct DykstraResult {
  CMat point;
  double spectral_excess = 0.0;   // max(0, ||Y||_2 - 1)
  double ball_excess = 0.0;       // max(0, ||Y - center||_F - mu)
  int sweeps = 0;
  bool exact = true;              // false when the sweep cap was hit
};

/// Throws std::invalid_argument when X has a NaN or infinite entry.
void require_finite(const CMat& X, const char* what = "matrix");
void require_same_shape(const CMat& X, const CMat& Y, const char* what);
void require_square(const CMat& X, const char* what);

double real_inner(const CMat& X, const CMat& Y);
double frobenius_norm(const CMat& X);
double spectral_norm(const CMat& X);

bool is_hermitian(const CMat& H, double tol = defaults::kHermitianTol);
/// ||U U^* - I||_F.
double unitarity_defect(const CMat& U);
bool is_unitary(const CMat& U, double tol = defaults::kUnitaryTol);

/// Deterministic one-sided Jacobi SVD (Eigen::JacobiSVD) for square inputs up
/// to `max_dim`.
SvdFactors svd(const CMat& X, std::size_t max_dim = defaults::kMaxSvdDim);

/// exp(i t H) for Hermitian H, via the Hermitian eigendecomposition.
CMat unitary_propagator(const CMat& H, double t);

/// Frobenius-nearest point of B(n): singular values clipped to [0, 1].
CMat project_spectral_ball(const CMat& X);

CMat project_frobenius_ball(const CMat& X, const CMat& center, double mu);

/// Projection onto B(n) intersected with the Frobenius ball of radius mu
/// around `center`, by Dykstra's alternating projections.
DykstraResult dykstra_intersect(const CMat& X, const CMat& center, double mu,
                                double tol = defaults::kDykstraTol,
                                int max_sweeps = defaults::kDykstraMaxSweeps);

double nuclear_norm(const CMat& X);

/// Polar factor left * right of the SVD (singular values replaced by ones).
CMat polar_factor(const CMat& X);

// Real coordinates (re, im interleaved, row-major) used by the solvers.
RVec to_real(const CMat& X);
CMat from_real(const RVec& v, Eigen::Index rows, Eigen::Index cols);

// Text format: "rows cols" then one line per row of "re:im" tokens.
void write_matrix(std::ostream& os, const CMat& X);
CMat read_matrix(std::istream& is);
std::string format_double(double v);
double parse_double(const std::string& token);

}  // namespace maxplus
